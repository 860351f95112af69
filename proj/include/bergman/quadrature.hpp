#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "bergman/common.hpp"

namespace bergman {

enum class BoundarySubstitution { none, log_map };

struct QuadSpec {
  double relative_tolerance = 1e-9;
  double absolute_floor = 1e-14;
  int max_subdivisions = 24;
  BoundarySubstitution boundary_substitution = BoundarySubstitution::log_map;

  void validate() const;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;

  QuadResult& operator+=(const QuadResult& other) {
    value += other.value;
    error += other.error;
    converged = converged && other.converged;
    return *this;
  }
};

using RealFn = std::function<double(double)>;
// Radial integrand f(r, 1 - r). The second argument stays accurate when r
// rounds to 1, which matters for densities singular at the boundary.
using RadialFn = std::function<double(double, double)>;

// Boundary variable t = -log(1 - r).
inline double t_of_r(double r) { return -std::log1p(-r); }
inline double r_of_t(double t) { return -std::expm1(-t); }

QuadResult integrate_interval(const RealFn& f, double a, double b, const QuadSpec& spec = {});

// Integral over [t0, inf) using fixed breakpoints followed by a mapped tail.
QuadResult integrate_half_line(const RealFn& g, double t0, const QuadSpec& spec = {});

// Integral of f over [r0, 1). With log_map the substitution r = 1 - e^{-t}
// resolves boundary concentration.
QuadResult integrate_radial(const RadialFn& f, double r0, const QuadSpec& spec = {});
QuadResult integrate_radial(const RealFn& f, double r0, const QuadSpec& spec = {});
// Integral of f over [r0, r1) in the boundary variable.
QuadResult integrate_radial(const RadialFn& f, double r0, double r1, const QuadSpec& spec = {});

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order; cached, thread-safe.
const GaussRule& gauss_legendre(int order);

struct RadialNode {
  double r;
  double one_minus_r;
  double log_r;
  double weight;  // includes the Jacobian dr/dt
};

// Fixed composite Gauss-Legendre rule for integrals over [0, r_end), used
// where the same nodes serve many integrands (moment tables, 2-D tensor
// rules).
class RadialRule {
 public:
  // Panels of width panel_width in t on [t_begin, t_end), with
  // r = scale (1 - e^{-t}); scale < 1 concentrates nodes near r = scale.
  static RadialRule log_mapped(double t_begin, double t_end, double panel_width, int order, double scale = 1.0);
  // Panels uniform in r on [a, b).
  static RadialRule uniform(double a, double b, int panels, int order);

  std::span<const RadialNode> nodes() const { return nodes_; }
  double r_end() const { return r_end_; }
  double one_minus_r_end() const { return one_minus_r_end_; }

 private:
  std::vector<RadialNode> nodes_;
  double r_end_ = 0.0;
  double one_minus_r_end_ = 1.0;
};

// Piecewise Chebyshev interpolant of a smooth function of t on [t_min, t_max).
// Panels are built on first use.
class PanelInterpolant {
 public:
  PanelInterpolant(RealFn fn, double t_min, double t_max, double panel_width = 0.5, int order = 16);
  PanelInterpolant(const PanelInterpolant&) = delete;
  PanelInterpolant& operator=(const PanelInterpolant&) = delete;

  bool covers(double t) const { return t >= t_min_ && t < t_max_; }
  double operator()(double t) const;

 private:
  void build_panel(std::size_t index) const;

  RealFn fn_;
  double t_min_;
  double t_max_;
  double width_;
  int order_;
  std::size_t panel_count_;
  std::vector<double> cheb_;  // Chebyshev extreme points on [-1, 1]
  mutable std::vector<std::vector<double>> values_;
  mutable std::unique_ptr<std::once_flag[]> once_;
};

// Growth/convergence classification of a sequence of partial values
// (one entry per dyadic level).
enum class TrailVerdict { converging, diverging, undetermined };

struct TrailRule {
  double divergence_step = 0.05;   // minimum relative growth per level
  int divergence_levels = 4;       // consecutive trailing levels
  double convergence_step = 0.01;  // relative step at the last level
};

// Relative steps (v_j - v_{j-1}) / v_j for j >= 1.
std::vector<double> relative_steps(std::span<const double> partials);
bool is_diverging(std::span<const double> partials, const TrailRule& rule = {});
bool is_converged(std::span<const double> partials, const TrailRule& rule = {});
TrailVerdict classify_trail(std::span<const double> partials, const TrailRule& rule = {});
const char* to_string(TrailVerdict verdict);

}  // namespace bergman
