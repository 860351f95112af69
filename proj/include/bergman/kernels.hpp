#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "bergman/common.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct KernelValue {
  Complex value;
  double error_estimate = 0.0;  // estimated truncation error
  std::size_t terms = 0;
};

// B_z(zeta) = sum_n c_n (conj(z) zeta)^n with c_n = 1 / (2 omega_{2n+1}).
class KernelSeries {
 public:
  static constexpr std::size_t kMaxTerms = std::size_t{1} << 24;
  static constexpr double kBoundaryMargin = 1e-12;

  explicit KernelSeries(RadialWeight w);

  const RadialWeight& weight() const { return w_; }
  double coefficient(std::size_t n) const;
  // Coefficients of B_z in the orthonormal basis e_n = z^n / sqrt(2 omega_{2n+1}):
  // conj(z)^n / sqrt(2 omega_{2n+1}) for n < count.
  std::vector<Complex> basis_coefficients(Complex z, std::size_t count) const;

  // Series value (order 0) or zeta-derivative (order 1) with adaptive truncation.
  KernelValue eval(Complex z, Complex zeta, int order = 0, double rtol = 1e-13) const;
  // First n_terms terms only.
  Complex eval_truncated(Complex z, Complex zeta, std::size_t n_terms, int order = 0) const;
  // B_z(z) = sum_n c_n |z|^{2n}.
  double diag(double modulus, double rtol = 1e-13) const;
  // B_z(zeta) and B_z(z) through (alpha + 1)(1 - conj(z) zeta)^{-(2 + alpha)}
  // for standard weights and through the series otherwise.
  Complex value(Complex z, Complex zeta) const;
  double diag_value(double modulus) const;
  // sum_n c_n x^n for 0 <= x < 1 together with the term count used.
  double positive_series(double x, double rtol, std::size_t* terms = nullptr) const;
  // Terms needed so that the neglected tail of sum c_n x^n is below rtol.
  std::size_t terms_for(double x, double rtol) const;

 private:
  RadialWeight w_;
};

KernelValue kernel_eval(const RadialWeight& w, Complex z, Complex zeta, int order = 0, double rtol = 1e-13);
double kernel_diag(const RadialWeight& w, Complex z);

// Angular means (1 / 2 pi) \int |sum_n a_n e^{i n theta}|^p dtheta for a series
// with nonnegative real coefficients, evaluated on an FFT grid.
double angular_mean_power(const std::vector<double>& coefficients, double p, std::size_t grid_size);

struct KernelNormEstimate {
  Complex z;
  double p = 2.0;
  std::string nu_label;
  double value = 0.0;          // ||B_z||_{A^p_nu}
  double value_p = 0.0;        // ||B_z||^p
  double theory_value = 0.0;   // \int_0^{|z|} nu_hat / (omega_hat^p (1-t)^p) dt
  double ratio = 0.0;          // value_p / theory_value
  double box_comparator = 0.0; // omega(S(z))^{1 - p}
  bool converged = true;
  bool theory_finite = true;
  Warnings warnings;
};

KernelNormEstimate kernel_norm(const RadialWeight& w, const RadialWeight& nu, Complex z, double p,
                               const QuadSpec& spec = {});
// sup over the disc of |B_z|, attained on the boundary ray through z.
double kernel_sup_norm(const RadialWeight& w, Complex z);

// B_z(zeta) / ||B_z||_{A^p_omega}.
Complex normalized_kernel_eval(const RadialWeight& w, Complex z, Complex zeta, double p = 2.0,
                               const QuadSpec& spec = {});

struct LocalityProbeGrid {
  int j_min = 1;
  int j_max = 10;  // centers a = 1 - 2^{-j}
  std::vector<double> deltas{1e-3, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0};
  std::vector<double> pseudo_radii{0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8};
  double c_fraction = 0.1;  // delta_hat keeps c within this fraction of the smallest-delta value
  int boundary_samples = 64;
};

struct LocalityProbe {
  double delta_hat = 0.0;
  double c_hat = 0.0;
  double r_hat = 0.0;
  std::vector<double> deltas;
  std::vector<double> c_values;        // min |B_a| omega(S(a)) over S(a_delta), nested
  std::vector<double> pseudo_radii;
  std::vector<double> bracket_low;     // min |B_a(z)| / B_a(a) over Delta(a, r)
  std::vector<double> bracket_high;    // max of the same ratio
};

LocalityProbe kernel_locality_probe(const RadialWeight& w, const LocalityProbeGrid& grid = {});

}  // namespace bergman
