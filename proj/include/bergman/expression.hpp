#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bergman {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(const std::string& message, std::size_t position)
      : std::invalid_argument(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// Radial expression in the variable r with numbers, + - * / ^, parentheses,
// unary minus, log, exp, sqrt, abs and the constants pi and e. The
// subexpression 1 - r is evaluated from the separately supplied 1 - r, and
// `omr` names that value directly.
class Expression {
 public:
  static Expression parse(std::string_view source);

  double operator()(double r, double one_minus_r) const;
  double operator()(double r) const { return (*this)(r, 1.0 - r); }
  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::string source_;
  std::shared_ptr<const Node> root_;
};

}  // namespace bergman
