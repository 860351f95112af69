#include "bergman/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

namespace bergman {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Segment {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const Segment& other) const { return error < other.error; }
};

// 21-point Kronrod estimate with the embedded 10-point Gauss rule as error
// indicator. Node tables come from Boost.Math.
Segment kronrod_segment(const RealFn& f, double a, double b, int depth) {
  const auto& x = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = Gauss::weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fc = f(mid);
  double kronrod = fc * wk[0];
  double gauss = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double fp = f(mid + half * x[i]);
    const double fm = f(mid - half * x[i]);
    kronrod += (fp + fm) * wk[i];
    if (i % 2 == 1) gauss += (fp + fm) * wg[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  double err = std::abs(kronrod - gauss);
  err = std::max(err, 2.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod));
  if (!std::isfinite(kronrod)) err = std::numeric_limits<double>::infinity();
  return {a, b, kronrod, err, depth};
}

constexpr std::size_t kMaxSegments = 4096;
// Beyond this point of the half line (1 - r < 1e-304 in the boundary
// variable) integrands are not sampled; a power-law remainder fitted on
// [cutoff / 2, cutoff] is added instead. Weights of logarithmic type keep
// mass of order cutoff^{1 - alpha} out there.
constexpr double kHalfLineCutoff = 700.0;

struct TailFit {
  double value = 0.0;
  bool integrable = true;
};

// \int_c^inf g for g(t) ~ C (t + s)^{-k}, fitted through t = c/4, c/2, c.
// The shift s makes the fit exact for log-type weights, whose boundary
// integrand is (1 + t)^{-alpha}.
TailFit power_law_remainder(const RealFn& g, double t0) {
  const double c = kHalfLineCutoff;
  if (t0 >= 0.25 * c) return {};
  const double g1 = g(0.25 * c), g2 = g(0.5 * c), g3 = g(c);
  auto same_sign = [](double a, double b) { return a != 0.0 && b != 0.0 && (a > 0.0) == (b > 0.0); };
  if (!(std::isfinite(g1) && std::isfinite(g2) && std::isfinite(g3)) || !same_sign(g1, g2) || !same_sign(g2, g3)) return {};
  const double rho1 = std::log(g1 / g2), rho2 = std::log(g2 / g3);
  if (!(rho1 > 0.0 && rho2 > 0.0)) return {0.0, rho2 > 0.0};
  // ratio(s) decreases from +inf at s = -c/4 to 1/2 as s -> inf.
  auto ratio = [c](double s) { return std::log((0.5 * c + s) / (0.25 * c + s)) / std::log((c + s) / (0.5 * c + s)); };
  const double target = rho1 / rho2;
  double shift = 0.0;
  if (target > 0.5) {
    double lo = -0.25 * c * (1.0 - 1e-12), hi = 1e6 * c;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * (1.0 + std::abs(lo)); ++it) {
      const double mid = lo + 0.5 * (hi - lo);
      (ratio(mid) > target ? lo : hi) = mid;
    }
    shift = 0.5 * (lo + hi);
  }
  const double k = rho2 / std::log((c + shift) / (0.5 * c + shift));
  if (!(k > 1.0 + 1e-3)) return {0.0, false};
  return {g3 * (c + shift) / (k - 1.0), true};
}

}  // namespace

void QuadSpec::validate() const {
  if (!(relative_tolerance > 0.0)) throw DomainError("relative_tolerance must be positive");
  if (!(absolute_floor >= 0.0)) throw DomainError("absolute_floor must be nonnegative");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be at least 1");
}

QuadResult integrate_interval(const RealFn& f, double a, double b, const QuadSpec& spec) {
  if (!(b > a)) return {0.0, 0.0, true};
  std::priority_queue<Segment> heap;
  Segment first = kronrod_segment(f, a, b, 0);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  // Segments that cannot be split further keep their error but leave the heap.
  double frozen_error = 0.0;
  double frozen_value = 0.0;
  bool exhausted = false;
  while (!heap.empty()) {
    const double target = std::max(spec.absolute_floor, spec.relative_tolerance * std::abs(total));
    if (total_error <= target) break;
    if (heap.size() >= kMaxSegments) {
      exhausted = true;
      break;
    }
    Segment worst = heap.top();
    heap.pop();
    if (worst.depth >= spec.max_subdivisions || !(worst.b - worst.a > 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(worst.a)))) {
      frozen_error += worst.error;
      frozen_value += worst.value;
      if (heap.empty()) {
        exhausted = true;
        break;
      }
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = kronrod_segment(f, worst.a, mid, worst.depth + 1);
    Segment right = kronrod_segment(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Resum in a fixed order so the result does not depend on heap layout.
  std::vector<Segment> pieces;
  pieces.reserve(heap.size());
  while (!heap.empty()) {
    pieces.push_back(heap.top());
    heap.pop();
  }
  std::sort(pieces.begin(), pieces.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  double value = frozen_value;
  double error = frozen_error;
  for (const auto& s : pieces) {
    value += s.value;
    error += s.error;
  }
  const double target = std::max(spec.absolute_floor, spec.relative_tolerance * std::abs(value));
  const bool converged = std::isfinite(value) && !exhausted && error <= 1.000001 * target;
  return {value, error, converged};
}

QuadResult integrate_half_line(const RealFn& g, double t0, const QuadSpec& spec) {
  static constexpr double kBreaks[] = {0.5, 1, 2, 3, 4, 6, 8, 12, 16, 24, 32, 48};
  QuadResult total;
  double lo = t0;
  for (double step : kBreaks) {
    const double hi = t0 + step;
    total += integrate_interval(g, lo, hi, spec);
    lo = hi;
  }
  // Remaining tail through t = lo + u / (1 - u).
  const double t_end = lo;
  auto mapped = [&](double u) {
    const double s = 1.0 - u;
    const double t = t_end + u / s;
    if (t > kHalfLineCutoff) return 0.0;
    const double v = g(t);
    return v == 0.0 ? 0.0 : v / (s * s);
  };
  QuadSpec tail_spec = spec;
  tail_spec.absolute_floor = std::max(spec.absolute_floor, spec.relative_tolerance * std::abs(total.value));
  QuadResult tail = integrate_interval(mapped, 0.0, 1.0, tail_spec);
  total += tail;
  const TailFit rest = power_law_remainder(g, t0);
  total.value += rest.value;
  total.converged = total.converged && rest.integrable;
  return total;
}

QuadResult integrate_radial(const RadialFn& f, double r0, const QuadSpec& spec) {
  if (!(r0 >= 0.0 && r0 < 1.0)) throw DomainError("integrate_radial: r0 must lie in [0, 1)");
  if (spec.boundary_substitution == BoundarySubstitution::none) {
    return integrate_interval([&](double r) { return f(r, 1.0 - r); }, r0, 1.0, spec);
  }
  auto g = [&](double t) {
    const double one_minus_r = std::exp(-t);
    if (one_minus_r == 0.0) return 0.0;
    const double v = f(-std::expm1(-t), one_minus_r);
    return v == 0.0 ? 0.0 : v * one_minus_r;
  };
  return integrate_half_line(g, t_of_r(r0), spec);
}

QuadResult integrate_radial(const RealFn& f, double r0, const QuadSpec& spec) {
  return integrate_radial([&](double r, double) { return f(r); }, r0, spec);
}

QuadResult integrate_radial(const RadialFn& f, double r0, double r1, const QuadSpec& spec) {
  if (!(r0 >= 0.0 && r1 <= 1.0 && r0 <= r1)) throw DomainError("integrate_radial: need 0 <= r0 <= r1 <= 1");
  if (r1 >= 1.0) return integrate_radial(f, r0, spec);
  if (spec.boundary_substitution == BoundarySubstitution::none) {
    return integrate_interval([&](double r) { return f(r, 1.0 - r); }, r0, r1, spec);
  }
  auto g = [&](double t) {
    const double one_minus_r = std::exp(-t);
    return f(-std::expm1(-t), one_minus_r) * one_minus_r;
  };
  return integrate_interval(g, t_of_r(r0), t_of_r(r1), spec);
}

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 512) throw DomainError("gauss_legendre: order must be in [1, 512]");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    auto rule = std::make_unique<GaussRule>();
    // Boost returns the nonnegative zeros in ascending order.
    const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(order);
    std::vector<double> nodes;
    for (auto it = zeros.rbegin(); it != zeros.rend(); ++it) {
      if (*it > 0.0) nodes.push_back(-*it);
    }
    for (double z : zeros) nodes.push_back(z);
    for (double x : nodes) {
      const double dp = boost::math::legendre_p_prime<double>(order, x);
      rule->nodes.push_back(x);
      rule->weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
    }
    slot = std::move(rule);
  }
  return *slot;
}

RadialRule RadialRule::log_mapped(double t_begin, double t_end, double panel_width, int order, double scale) {
  if (!(t_end > t_begin) || !(panel_width > 0.0)) throw DomainError("RadialRule: empty range");
  if (!(scale > 0.0 && scale <= 1.0)) throw DomainError("RadialRule: scale must lie in (0, 1]");
  const GaussRule& gl = gauss_legendre(order);
  RadialRule rule;
  const auto panels = static_cast<std::size_t>(std::ceil((t_end - t_begin) / panel_width - 1e-12));
  const double h = (t_end - t_begin) / static_cast<double>(panels);
  rule.nodes_.reserve(panels * gl.nodes.size());
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = t_begin + h * (static_cast<double>(p) + 0.5);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = mid + 0.5 * h * gl.nodes[i];
      const double e = std::exp(-t);
      const double r = -scale * std::expm1(-t);
      const double omr = (1.0 - scale) + scale * e;
      rule.nodes_.push_back({r, omr, std::log(scale) + std::log1p(-e), 0.5 * h * gl.weights[i] * scale * e});
    }
  }
  rule.r_end_ = scale * r_of_t(t_end);
  rule.one_minus_r_end_ = (1.0 - scale) + scale * std::exp(-t_end);
  return rule;
}

RadialRule RadialRule::uniform(double a, double b, int panels, int order) {
  if (!(b > a) || panels < 1) throw DomainError("RadialRule: empty range");
  const GaussRule& gl = gauss_legendre(order);
  RadialRule rule;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + h * (p + 0.5);
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double r = mid + 0.5 * h * gl.nodes[i];
      rule.nodes_.push_back({r, 1.0 - r, std::log(r), 0.5 * h * gl.weights[i]});
    }
  }
  rule.r_end_ = b;
  rule.one_minus_r_end_ = 1.0 - b;
  return rule;
}

PanelInterpolant::PanelInterpolant(RealFn fn, double t_min, double t_max, double panel_width, int order)
    : fn_(std::move(fn)), t_min_(t_min), t_max_(t_max), width_(panel_width), order_(order) {
  if (!(t_max > t_min) || !(panel_width > 0.0) || order < 2) throw DomainError("PanelInterpolant: bad layout");
  panel_count_ = static_cast<std::size_t>(std::ceil((t_max - t_min) / panel_width));
  t_max_ = t_min_ + width_ * static_cast<double>(panel_count_);
  cheb_.resize(static_cast<std::size_t>(order));
  for (int k = 0; k < order; ++k) cheb_[static_cast<std::size_t>(k)] = std::cos(kPi * k / (order - 1));
  values_.resize(panel_count_);
  once_ = std::make_unique<std::once_flag[]>(panel_count_);
}

void PanelInterpolant::build_panel(std::size_t index) const {
  const double lo = t_min_ + width_ * static_cast<double>(index);
  std::vector<double> v(cheb_.size());
  for (std::size_t k = 0; k < cheb_.size(); ++k) v[k] = fn_(lo + 0.5 * width_ * (cheb_[k] + 1.0));
  values_[index] = std::move(v);
}

double PanelInterpolant::operator()(double t) const {
  if (!covers(t)) throw DomainError("PanelInterpolant: argument outside the tabulated range");
  auto index = static_cast<std::size_t>((t - t_min_) / width_);
  if (index >= panel_count_) index = panel_count_ - 1;
  std::call_once(once_[index], [&] { build_panel(index); });
  const std::vector<double>& v = values_[index];
  const double lo = t_min_ + width_ * static_cast<double>(index);
  const double x = 2.0 * (t - lo) / width_ - 1.0;
  // Barycentric formula for Chebyshev extreme points.
  double num = 0.0;
  double den = 0.0;
  const std::size_t n = cheb_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const double diff = x - cheb_[k];
    if (diff == 0.0) return v[k];
    double w = (k % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k + 1 == n) w *= 0.5;
    w /= diff;
    num += w * v[k];
    den += w;
  }
  return num / den;
}

std::vector<double> relative_steps(std::span<const double> partials) {
  std::vector<double> steps;
  for (std::size_t j = 1; j < partials.size(); ++j) {
    const double denom = std::abs(partials[j]);
    steps.push_back(denom > 0.0 ? (partials[j] - partials[j - 1]) / denom : 0.0);
  }
  return steps;
}

bool is_diverging(std::span<const double> partials, const TrailRule& rule) {
  const auto steps = relative_steps(partials);
  const auto need = static_cast<std::size_t>(rule.divergence_levels);
  if (steps.size() < need) return false;
  for (std::size_t i = steps.size() - need; i < steps.size(); ++i) {
    if (!(steps[i] >= rule.divergence_step)) return false;
  }
  return true;
}

bool is_converged(std::span<const double> partials, const TrailRule& rule) {
  const auto steps = relative_steps(partials);
  if (steps.empty()) return false;
  return std::abs(steps.back()) < rule.convergence_step;
}

TrailVerdict classify_trail(std::span<const double> partials, const TrailRule& rule) {
  if (is_diverging(partials, rule)) return TrailVerdict::diverging;
  if (is_converged(partials, rule)) return TrailVerdict::converging;
  return TrailVerdict::undetermined;
}

const char* to_string(TrailVerdict verdict) {
  switch (verdict) {
    case TrailVerdict::converging: return "converging";
    case TrailVerdict::diverging: return "diverging";
    case TrailVerdict::undetermined: return "undetermined";
  }
  return "undetermined";
}

}  // namespace bergman
