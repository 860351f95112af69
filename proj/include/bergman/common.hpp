#pragma once

#include <complex>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace bergman {

using Complex = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kE = std::numbers::e;

// Argument outside the domain of a mathematical object (r >= 1, a = 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested accuracy cannot be reached (series too close to the boundary,
// truncation too short, vanishing denominators).
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IntegrabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation would exceed its point or term budget.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shortest round-trip-ish rendering for labels: 0, 2.5, 1e-06.
inline std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Numeric conditions that are reported as data rather than thrown.
using Warnings = std::vector<std::string>;

}  // namespace bergman
