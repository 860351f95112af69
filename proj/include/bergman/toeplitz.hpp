#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "bergman/kernels.hpp"
#include "bergman/measures.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

enum class Provenance { toeplitz, composition, product };
const char* to_string(Provenance p);

// Matrix of an operator on A^2_omega in the basis e_n = z^n / sqrt(2 omega_{2n+1}):
// entries(m, n) = <T e_n, e_m>. Composition matrices may be rectangular
// (rows = output coefficients).
struct OperatorMatrix {
  Eigen::MatrixXcd entries;
  Provenance provenance = Provenance::toeplitz;
  std::string label;
  std::vector<std::pair<int, int>> flagged;  // entries whose integrals failed
  Warnings warnings;

  Eigen::Index rows() const { return entries.rows(); }
  Eigen::Index cols() const { return entries.cols(); }
  OperatorMatrix operator+(const OperatorMatrix& other) const;
  OperatorMatrix operator*(const OperatorMatrix& other) const;
};

OperatorMatrix toeplitz_matrix(const Measure& mu, const RadialWeight& w, int N, const QuadSpec& spec = {});

struct BerezinValue {
  double value = 0.0;
  double numerator = 0.0;    // ||B_z||^2_{L^2_mu}
  double kernel_diag = 0.0;  // ||B_z||^2_{A^2_omega}
  bool converged = true;
  std::size_t terms = 0;
};

// ||B_z||^2_{L^2_mu} only (kernel_diag and value left at zero).
BerezinValue berezin_numerator(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec = {});
BerezinValue berezin_value(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec = {});
double berezin(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec = {});
// <T b_z, b_z> with b_z truncated to the matrix size. Throws PrecisionError
// (with a suggested size) when the neglected part of ||b_z||^2 exceeds tail_tol.
double berezin_of_matrix(const OperatorMatrix& T, const RadialWeight& w, Complex z, double tail_tol = 1e-10);
// Smallest N for which the truncated b_z misses less than tail_tol of its norm.
int berezin_size_for(const RadialWeight& w, double modulus, double tail_tol = 1e-10);

struct BerezinField {
  std::string weight;
  std::string measure;
  std::vector<int> levels;
  std::vector<Complex> points;
  std::vector<double> values;
  std::vector<bool> converged;
};

// Samples on the centers of a boundary-refined grid.
BerezinField berezin_field(const Measure& mu, const RadialWeight& w, const CenterGrid& grid = {},
                           const QuadSpec& spec = {});

struct SchattenEstimate {
  double p = 1.0;
  double value = 0.0;
  std::vector<int> sizes;
  std::vector<double> trail;
  std::vector<double> singular_values;  // of the largest truncation, nonincreasing
  bool converged = false;
  double last_step = 0.0;
};

// Default truncation schedule {N/2, 3N/4, N}.
std::vector<int> default_schedule(int N);
// From the singular values of the leading truncations. Singular values below
// max_dim * eps * sigma_max are treated as zero.
SchattenEstimate schatten_norm(const OperatorMatrix& T, double p, std::vector<int> schedule = {});
double schatten_from_singular_values(const Eigen::VectorXd& sigma, double p);
Eigen::VectorXd singular_values(const Eigen::MatrixXcd& block);

struct TraceCheck {
  double trace_matrix = 0.0;
  double trace_integral = 0.0;
  double relative_gap = 0.0;
  bool converged = true;
};

TraceCheck trace_check(const Measure& mu, const RadialWeight& w, int N, const QuadSpec& spec = {});

struct ExponentPair {
  double p = 2.0;
  double q = 2.0;

  ExponentPair() = default;
  ExponentPair(double p_, double q_);
  double p_conjugate() const { return p / (p - 1.0); }
  double q_conjugate() const { return q / (q - 1.0); }
  double carleson_exponent() const { return 1.0 / p + 1.0 / q_conjugate(); }
  double berezin_exponent() const { return carleson_exponent() - 1.0; }
  // pq / (p - q); requires q < p.
  double schatten_dual_exponent() const;
};

// Per-level partial values of a disc integral of a (possibly non-radial)
// function, splitting the disc into the bands 1 - 2^{-(j-1)} <= |z| < 1 - 2^{-j}.
struct LevelTrail {
  std::vector<int> levels;
  std::vector<double> partials;
  TrailVerdict verdict = TrailVerdict::undetermined;
  bool converged = true;

  double value() const { return partials.empty() ? 0.0 : partials.back(); }
  bool diverging() const { return verdict == TrailVerdict::diverging; }
};

// f(r, 1 - r, theta) integrated against density(r, 1 - r) dA over the bands
// j = 1..j_max. Radial integrands use one angle per radius.
using PolarFn = std::function<double(double r, double omr, double theta)>;
LevelTrail level_integral(const PolarFn& f, const RadialFn& density, int j_max, bool radial, const TrailRule& rule = {});

struct CriterionQuantity {
  std::string name;
  double value = 0.0;
  std::vector<double> trail;  // running value per level
  TrailVerdict verdict = TrailVerdict::undetermined;
  bool finite() const { return verdict != TrailVerdict::diverging; }
};

struct CriterionReport {
  ExponentPair exponents;
  double r = 0.5;
  std::string weight;
  std::string measure;
  std::vector<int> levels;
  CriterionQuantity berezin_sup;     // sup T~ / omega(S)^{berezin_exponent}
  CriterionQuantity carleson_sup;    // sup mu(S) / omega(S)^{carleson_exponent}
  CarlesonConstant carleson;
  std::vector<double> berezin_vanishing_tail;
  std::optional<CriterionQuantity> mu_hat_norm;  // ||mu_hat_r||_{L^s_omega}, q < p
  std::optional<CriterionQuantity> berezin_norm; // ||T~||_{L^s_omega}, q < p
  std::optional<double> norm_ratio;
  std::string bounded_verdict;   // "bounded", "unbounded" or "mixed"
  std::string compact_verdict;   // "compact", "not compact" or "mixed"
  std::string dual_verdict;      // branch (c): "finite", "diverging", "mixed" or "n/a"
  Warnings warnings;
};

CriterionReport criteria_report_pq(const Measure& mu, const RadialWeight& w, const ExponentPair& pq, double r,
                                   const CenterGrid& grid = {}, const QuadSpec& spec = {});

struct SchattenReportOptions {
  int n_max_dyadic = 14;
  double r = 0.5;
  int j_max = 14;
};

struct SchattenReport {
  double p = 1.0;
  std::string weight;
  std::string measure;
  CriterionQuantity dyadic_sum;        // sum over dyadic cells (mu(R)/omega_star(z_R))^p
  CriterionQuantity pseudo_integral;   // \int (mu(Delta(z,r))/omega_star(z))^p dA/(1-|z|)^2
  CriterionQuantity berezin_integral;  // \int T~^p omega/omega_star dA
  bool cutoff_regular = false;         // (omega_star)^p / (1-r)^2 classifies regular
  bool berezin_applicable = false;
  std::string cell_convention;
  Warnings warnings;
};

SchattenReport schatten_report(const Measure& mu, const RadialWeight& w, double p, const SchattenReportOptions& opt = {},
                               const QuadSpec& spec = {});

// \int T~_mu dA / (1-|z|)^2 per level (the L^1(dA/(1-|z|)^2) Berezin test).
CriterionQuantity berezin_hyperbolic_integral(const Measure& mu, const RadialWeight& w, int j_max,
                                              const QuadSpec& spec = {});

// P^+_omega(f)(z) = \int f(zeta) |B_z(zeta)| omega(zeta) dA(zeta).
QuadResult maximal_projection(const DiscFn& f, const RadialWeight& w, Complex z, const QuadSpec& spec = {});

// The measure mu_hat_r(z) omega(z) dA(z). Radial when mu is radial.
Measure averaged_measure(const Measure& mu, const RadialWeight& w, double r, const QuadSpec& spec = {});

// <T f, f> for a coefficient vector f in the e_n basis.
double quadratic_form(const OperatorMatrix& T, const Eigen::VectorXcd& f);

struct DominationCheck {
  double fitted_constant = 0.0;  // largest generalized eigenvalue of (T_mu, T_mu_hat)
  double max_ratio = 0.0;        // over the sampled vectors
  int vectors = 0;
  int violations = 0;            // ratio > fitted_constant (relative slack 1e-12)
};

// Quadratic-form domination <T_mu f, f> <= C <T_{mu_hat_r} f, f> on random vectors.
DominationCheck domination_check(const Measure& mu, const RadialWeight& w, double r, int N, int vectors,
                                 unsigned seed = 12345, const QuadSpec& spec = {});

}  // namespace bergman
