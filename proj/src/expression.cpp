#include "bergman/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

namespace bergman {

struct Expression::Node {
  enum class Op { constant, r, omr, add, sub, mul, div, pow, neg, log, exp, sqrt, abs };
  Op op = Op::constant;
  double value = 0.0;
  std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr, double value = 0.0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  n->value = value;
  return n;
}

bool is_one(const NodePtr& n) { return n->op == Node::Op::constant && n->value == 1.0; }

// Recursive descent:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?
//   atom   := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) throw ExpressionError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
    return n;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr left = term();
    for (;;) {
      if (accept('+')) {
        left = make(Node::Op::add, left, term());
      } else if (accept('-')) {
        NodePtr right = term();
        left = is_one(left) && right->op == Node::Op::r ? make(Node::Op::omr) : make(Node::Op::sub, left, right);
      } else {
        return left;
      }
    }
  }

  NodePtr term() {
    NodePtr left = unary();
    for (;;) {
      if (accept('*')) {
        left = make(Node::Op::mul, left, unary());
      } else if (accept('/')) {
        left = make(Node::Op::div, left, unary());
      } else {
        return left;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Node::Op::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) throw ExpressionError("unexpected end of expression", pos_);
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) throw ExpressionError("expected ')'", pos_);
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::string rest(s_.substr(pos_));
      char* end = nullptr;
      const double v = std::strtod(rest.c_str(), &end);
      if (end == rest.c_str()) throw ExpressionError("malformed number", pos_);
      pos_ += static_cast<std::size_t>(end - rest.c_str());
      return make(Node::Op::constant, nullptr, nullptr, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      if (name == "r") return make(Node::Op::r);
      if (name == "omr") return make(Node::Op::omr);
      if (name == "pi") return make(Node::Op::constant, nullptr, nullptr, std::numbers::pi);
      if (name == "e") return make(Node::Op::constant, nullptr, nullptr, std::numbers::e);
      Node::Op op;
      if (name == "log") {
        op = Node::Op::log;
      } else if (name == "exp") {
        op = Node::Op::exp;
      } else if (name == "sqrt") {
        op = Node::Op::sqrt;
      } else if (name == "abs") {
        op = Node::Op::abs;
      } else {
        throw ExpressionError("unknown name '" + name + "'", start);
      }
      if (!accept('(')) throw ExpressionError("expected '(' after " + name, pos_);
      NodePtr arg = expr();
      if (!accept(')')) throw ExpressionError("expected ')'", pos_);
      return make(op, arg);
    }
    throw ExpressionError("unexpected character '" + std::string(1, c) + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double r, double omr) {
  switch (n.op) {
    case Node::Op::constant: return n.value;
    case Node::Op::r: return r;
    case Node::Op::omr: return omr;
    case Node::Op::add: return eval(*n.a, r, omr) + eval(*n.b, r, omr);
    case Node::Op::sub: return eval(*n.a, r, omr) - eval(*n.b, r, omr);
    case Node::Op::mul: return eval(*n.a, r, omr) * eval(*n.b, r, omr);
    case Node::Op::div: return eval(*n.a, r, omr) / eval(*n.b, r, omr);
    case Node::Op::pow: return std::pow(eval(*n.a, r, omr), eval(*n.b, r, omr));
    case Node::Op::neg: return -eval(*n.a, r, omr);
    case Node::Op::log: return std::log(eval(*n.a, r, omr));
    case Node::Op::exp: return std::exp(eval(*n.a, r, omr));
    case Node::Op::sqrt: return std::sqrt(eval(*n.a, r, omr));
    case Node::Op::abs: return std::abs(eval(*n.a, r, omr));
  }
  return 0.0;
}

}  // namespace

Expression Expression::parse(std::string_view source) {
  Expression e;
  e.source_ = std::string(source);
  e.root_ = Parser(source).parse();
  return e;
}

double Expression::operator()(double r, double one_minus_r) const { return eval(*root_, r, one_minus_r); }

}  // namespace bergman
