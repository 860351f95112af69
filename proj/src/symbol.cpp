#include "bergman/symbol.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

constexpr double kSelfMapMargin = 1e-6;
constexpr double kInsideMargin = 1e-10;
constexpr double kBoundaryLog = 1e-12;

void trim(std::vector<Complex>& c) {
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
}

}  // namespace

Complex polynomial_eval(const std::vector<Complex>& coefficients, Complex z) {
  Complex acc(0.0, 0.0);
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<Complex> series_multiply(const std::vector<Complex>& a, const std::vector<Complex>& b,
                                     std::size_t max_degree) {
  if (a.empty() || b.empty()) return {};
  const std::size_t size = std::min(max_degree + 1, a.size() + b.size() - 1);
  std::vector<Complex> out(size, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < a.size() && i < size; ++i) {
    if (a[i] == Complex(0.0, 0.0)) continue;
    const std::size_t jmax = std::min(b.size(), size - i);
    for (std::size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coefficients) {
  std::vector<Complex> c = coefficients;
  trim(c);
  const int degree = static_cast<int>(c.size()) - 1;
  if (degree < 1) return {};
  if (degree == 1) return {-c[0] / c[1]};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (int i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < degree; ++i) companion(i, degree - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw PrecisionError("polynomial_roots: eigenvalue solver failed");
  std::vector<Complex> deriv(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) deriv[k - 1] = c[k] * static_cast<double>(k);
  std::vector<Complex> roots;
  for (int i = 0; i < degree; ++i) {
    Complex z = solver.eigenvalues()[i];
    const Complex d = polynomial_eval(deriv, z);
    if (std::abs(d) > 1e-300) {
      const Complex step = polynomial_eval(c, z) / d;
      // Keep the polish only when it is a genuine correction.
      if (std::abs(step) < 1e-3 * std::max(1.0, std::abs(z))) z -= step;
    }
    roots.push_back(z);
  }
  return roots;
}

Symbol Symbol::polynomial(std::vector<Complex> coefficients) {
  trim(coefficients);
  if (coefficients.empty()) throw DomainError("polynomial symbol needs coefficients");
  Symbol s;
  s.form_ = Form::polynomial;
  s.coeffs_ = std::move(coefficients);
  const int grid = std::max(4096, 256 * s.degree());
  double sup = 0.0;
  for (int i = 0; i < grid; ++i) sup = std::max(sup, std::abs(polynomial_eval(s.coeffs_, std::polar(1.0, 2.0 * kPi * i / grid))));
  s.sup_norm_ = sup;
  // Unimodular monomials c z^k (|c| = 1) map the disc into itself with unit
  // boundary modulus; every other polynomial must stay inside the margin.
  const std::size_t nonzero = static_cast<std::size_t>(
      std::count_if(s.coeffs_.begin(), s.coeffs_.end(), [](Complex c) { return std::abs(c) != 0.0; }));
  const bool monomial = s.degree() >= 1 && nonzero == 1 && std::abs(std::abs(s.coeffs_.back()) - 1.0) < 1e-15;
  if (!monomial && sup > 1.0 - kSelfMapMargin) {
    throw DomainError("polynomial symbol is not a self-map of the disc (boundary sup " + format_number(sup) + ")");
  }
  return s;
}

Symbol Symbol::blaschke(std::vector<Complex> zeros, double rotation) {
  if (zeros.empty()) throw DomainError("Blaschke product needs at least one zero");
  for (Complex a : zeros) {
    if (!(std::abs(a) < 1.0)) throw DomainError("Blaschke zeros must lie in the disc");
  }
  Symbol s;
  s.form_ = Form::blaschke;
  s.zeros_ = std::move(zeros);
  s.rotation_ = rotation;
  s.sup_norm_ = 1.0;
  return s;
}

int Symbol::degree() const {
  return form_ == Form::polynomial ? static_cast<int>(coeffs_.size()) - 1 : static_cast<int>(zeros_.size());
}

Complex Symbol::operator()(Complex z) const {
  if (form_ == Form::polynomial) return polynomial_eval(coeffs_, z);
  Complex v = std::polar(1.0, rotation_);
  for (Complex a : zeros_) v *= (z - a) / (1.0 - std::conj(a) * z);
  return v;
}

Complex Symbol::derivative(Complex z) const {
  if (form_ == Form::polynomial) {
    Complex acc(0.0, 0.0);
    for (std::size_t k = coeffs_.size(); k-- > 1;) acc = acc * z + coeffs_[k] * static_cast<double>(k);
    return acc;
  }
  // phi' = phi * sum_k b_k' / b_k with b_k' / b_k = (1 - |a|^2) / ((z - a)(1 - conj(a) z)).
  Complex value = (*this)(z);
  Complex sum(0.0, 0.0);
  Complex product_others = std::polar(1.0, rotation_);
  bool at_zero = false;
  for (Complex a : zeros_) {
    if (z == a) at_zero = true;
  }
  if (!at_zero) {
    for (Complex a : zeros_) sum += (1.0 - std::norm(a)) / ((z - a) * (1.0 - std::conj(a) * z));
    return value * sum;
  }
  // Product rule when z is a zero of one factor.
  Complex total(0.0, 0.0);
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    Complex term = product_others;
    for (std::size_t k = 0; k < zeros_.size(); ++k) {
      const Complex a = zeros_[k];
      if (k == i) {
        term *= (1.0 - std::norm(a)) / ((1.0 - std::conj(a) * z) * (1.0 - std::conj(a) * z));
      } else {
        term *= (z - a) / (1.0 - std::conj(a) * z);
      }
    }
    total += term;
  }
  return total;
}

std::vector<Complex> Symbol::numerator() const {
  if (form_ == Form::polynomial) return coeffs_;
  std::vector<Complex> p{std::polar(1.0, rotation_)};
  for (Complex a : zeros_) p = series_multiply(p, {-a, Complex(1.0)}, p.size());
  return p;
}

std::vector<Complex> Symbol::denominator() const {
  if (form_ == Form::polynomial) return {Complex(1.0)};
  std::vector<Complex> q{Complex(1.0)};
  for (Complex a : zeros_) q = series_multiply(q, {Complex(1.0), -std::conj(a)}, q.size());
  return q;
}

std::vector<Complex> Symbol::taylor(std::size_t max_degree) const {
  if (form_ == Form::polynomial) {
    std::vector<Complex> c(max_degree + 1, Complex(0.0));
    for (std::size_t k = 0; k < coeffs_.size() && k <= max_degree; ++k) c[k] = coeffs_[k];
    return c;
  }
  std::vector<Complex> out{std::polar(1.0, rotation_)};
  for (Complex a : zeros_) {
    // (z - a) / (1 - conj(a) z) = -a + sum_{k>=1} conj(a)^{k-1} (1 - |a|^2) z^k
    std::vector<Complex> factor(max_degree + 1);
    factor[0] = -a;
    Complex power(1.0, 0.0);
    for (std::size_t k = 1; k <= max_degree; ++k) {
      factor[k] = power * (1.0 - std::norm(a));
      power *= std::conj(a);
    }
    out = series_multiply(out, factor, max_degree);
  }
  out.resize(max_degree + 1, Complex(0.0));
  return out;
}

std::vector<Complex> Symbol::preimages(Complex w, int* boundary_cases) const {
  // phi(zeta) = w  <=>  P(zeta) - w Q(zeta) = 0.
  std::vector<Complex> p = numerator();
  const std::vector<Complex> q = denominator();
  if (p.size() < q.size()) p.resize(q.size(), Complex(0.0));
  for (std::size_t k = 0; k < q.size(); ++k) p[k] -= w * q[k];
  std::vector<Complex> roots = polynomial_roots(p);
  std::vector<Complex> inside;
  int boundary = 0;
  for (Complex z : roots) {
    const double m = std::abs(z);
    if (std::abs(m - 1.0) < kBoundaryLog) ++boundary;
    if (m < 1.0 - kInsideMargin) inside.push_back(z);
  }
  std::sort(inside.begin(), inside.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });
  if (boundary_cases) *boundary_cases = boundary;
  return inside;
}

}  // namespace bergman
