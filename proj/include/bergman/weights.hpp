#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bergman/common.hpp"
#include "bergman/moments.hpp"
#include "bergman/quadrature.hpp"

namespace bergman {

enum class WeightFamily { standard, log_weight, exponential, user };

const char* to_string(WeightFamily family);

namespace detail {
struct WeightImpl;
}

// Radial weight omega(r) on [0, 1) with cached tail functionals.
// Copies share the same immutable state and caches.
class RadialWeight {
 public:
  // (1 - r^2)^alpha, alpha > -1.
  static RadialWeight standard(double alpha);
  // [(1 - r) (log(e / (1 - r)))^alpha]^{-1}, integrable for alpha > 1.
  static RadialWeight log_weight(double alpha);
  // exp(-c / (1 - r)), c > 0.
  static RadialWeight exponential(double c);
  // Density given as f(r, 1 - r). When `tail` is provided it must return
  // \int_r^1 omega as a function of (r, 1 - r); otherwise the tail is
  // obtained by quadrature. `integrable = false` marks a density known to
  // have infinite mass.
  static RadialWeight user(RadialFn density, std::string label = "user", bool integrable = true,
                           RadialFn tail = {});

  WeightFamily family() const;
  // alpha for standard/log weights, c for exponential, NaN for user weights.
  double parameter() const;
  const std::string& label() const;
  const Warnings& warnings() const;
  RadialWeight with_warning(std::string message) const;

  double density(double r) const;
  double density(double r, double one_minus_r) const;
  // \hat\omega(r) = \int_r^1 omega(s) ds.
  double tail(double r) const;
  double tail(double r, double one_minus_r) const;
  double log_tail(double r, double one_minus_r) const;
  // \int_r^1 omega(s) s ds.
  double tail_first_moment(double r) const;
  // omega^\star(r) = \int_r^1 omega(s) log(s / r) s ds, r in (0, 1).
  double star(double r) const;
  double star(double r, double one_minus_r) const;
  // omega_n = \int_0^1 r^n omega(r) dr.
  double moment(std::size_t n) const;
  const MomentSequence& moments() const;
  // omega(S(a)) for |a| = modulus.
  double box_mass(double modulus) const;

  // Same shared state, or the same built-in family and parameter.
  bool equivalent(const RadialWeight& other) const;

 private:
  explicit RadialWeight(std::shared_ptr<const detail::WeightImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::WeightImpl> impl_;
};

// Free-function forms of the weight functionals.
double eval_weight(const RadialWeight& w, double r);
double omega_hat(const RadialWeight& w, double r);
double omega_star(const RadialWeight& w, double r);
double moment(const RadialWeight& w, std::size_t n);
double box_mass(const RadialWeight& w, Complex a);

struct RadialGrid {
  int j_min = 1;
  int j_max = 20;               // r_j = 1 - 2^{-j}
  double reverse_factor = 2.0;  // K in \hat\omega(r) / \hat\omega(1 - (1 - r) / K)
  int trend_levels = 5;
  double max_dynamic_range = 100.0;
  double max_trend_slope = 0.05;

  std::vector<double> radii() const;
  void validate() const;
};

// "Bounded ratio" rule on a dyadic grid: max/min <= max_dynamic_range and the
// least-squares slope of log(ratio) over the last trend_levels levels is
// below max_trend_slope in magnitude.
struct BoundedRatioTest {
  double min = 0.0;
  double max = 0.0;
  double trend_slope = 0.0;
  bool bounded = false;
};

BoundedRatioTest bounded_ratio_test(const std::vector<double>& ratios, const RadialGrid& grid);
double trailing_log_slope(const std::vector<double>& values, int levels);

struct WeightClassReport {
  RadialGrid grid;
  std::vector<double> radii;
  std::vector<double> doubling_ratios;  // \hat\omega(r) / \hat\omega((1+r)/2)
  std::vector<double> reverse_ratios;   // \hat\omega(r) / \hat\omega(1-(1-r)/K)
  std::vector<double> regularity_ratios;  // omega(r)(1-r)/\hat\omega(r)
  double doubling_constant = 0.0;
  double doubling_exponent_beta = 0.0;
  double reverse_doubling_constant = 0.0;
  double regularity_min = 0.0;
  double regularity_max = 0.0;
  BoundedRatioTest doubling_test;
  BoundedRatioTest reverse_test;  // applied to log of the reverse ratios
  BoundedRatioTest regularity_test;
  bool in_Dhat = false;
  bool reverse_doubling = false;
  bool regular = false;
  // Radius up to which a passing verdict has been tested.
  double tested_radius = 0.0;
};

WeightClassReport classify(const RadialWeight& w, const RadialGrid& grid = {});

// Weight with density \hat\omega(r) / (1 - r).
RadialWeight regularize(const RadialWeight& w, const RadialGrid& grid = {});

}  // namespace bergman
