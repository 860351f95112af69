#pragma once

#include <vector>

#include "bergman/common.hpp"

namespace bergman {

// Analytic self-map of the disc: a polynomial or a finite Blaschke product
// e^{i theta} prod_k (z - a_k) / (1 - conj(a_k) z).
class Symbol {
 public:
  enum class Form { polynomial, blaschke };

  // Coefficients in ascending order. The polynomial must map the closed
  // disc into |w| <= 1 - 1e-6 on a boundary grid.
  static Symbol polynomial(std::vector<Complex> coefficients);
  static Symbol blaschke(std::vector<Complex> zeros, double rotation = 0.0);
  static Symbol identity() { return polynomial({Complex(0.0), Complex(1.0)}); }

  Form form() const { return form_; }
  int degree() const;
  int valence_bound() const { return degree(); }
  // max |phi| over the boundary grid used at construction.
  double sup_norm_certificate() const { return sup_norm_; }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  const std::vector<Complex>& zeros() const { return zeros_; }
  double rotation() const { return rotation_; }

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  // phi = numerator / denominator with ascending coefficients.
  std::vector<Complex> numerator() const;
  std::vector<Complex> denominator() const;
  // Taylor coefficients of phi up to degree max_degree.
  std::vector<Complex> taylor(std::size_t max_degree) const;

  // Points zeta in the disc with phi(zeta) = w, with multiplicity, ordered by
  // modulus and then argument. Roots with |zeta| >= 1 - 1e-10 are dropped;
  // `boundary_cases` counts roots within 1e-12 of the unit circle.
  std::vector<Complex> preimages(Complex w, int* boundary_cases = nullptr) const;

 private:
  Form form_ = Form::polynomial;
  std::vector<Complex> coeffs_;
  std::vector<Complex> zeros_;
  double rotation_ = 0.0;
  double sup_norm_ = 0.0;
};

// Roots of sum_k c_k z^k (ascending coefficients) by companion-matrix
// eigenvalues followed by one Newton step.
std::vector<Complex> polynomial_roots(const std::vector<Complex>& coefficients);
Complex polynomial_eval(const std::vector<Complex>& coefficients, Complex z);
// Product truncated to degree max_degree.
std::vector<Complex> series_multiply(const std::vector<Complex>& a, const std::vector<Complex>& b,
                                     std::size_t max_degree);

}  // namespace bergman
