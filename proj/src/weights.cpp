#include "bergman/weights.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

namespace bergman {

const char* to_string(WeightFamily family) {
  switch (family) {
    case WeightFamily::standard: return "standard";
    case WeightFamily::log_weight: return "log";
    case WeightFamily::exponential: return "exponential";
    case WeightFamily::user: return "user";
  }
  return "user";
}

namespace detail {

struct WeightDefinition {
  WeightFamily family = WeightFamily::user;
  double param = std::numeric_limits<double>::quiet_NaN();
  std::string label;
  Warnings warnings;
  RadialFn user_density;
  RadialFn user_tail;
};

namespace {

constexpr double kStarDirectBelow = 0.05;  // radius below which omega^star is not tabulated
constexpr double kTableEnd = 40.0;         // last tabulated value of t
constexpr double kFarTableEnd = 700.0;

// Integrand tolerance for the functionals that feed other quadratures.
QuadSpec inner_spec() {
  QuadSpec s;
  s.relative_tolerance = 1e-12;
  s.absolute_floor = 0.0;
  s.max_subdivisions = 30;
  return s;
}

// e^z E_2(z) for large z by its asymptotic series.
double scaled_expint2(double z) {
  double term = 1.0 / z;
  double sum = term;
  for (int k = 1; k <= 10; ++k) {
    term *= -static_cast<double>(k + 1) / z;
    sum += term;
  }
  return sum;
}

}  // namespace

struct WeightImpl {
  WeightDefinition def;

  mutable std::once_flag moments_once;
  mutable std::unique_ptr<MomentSequence> moments;
  mutable std::once_flag tail_once;
  mutable std::unique_ptr<PanelInterpolant> log_tail_table;
  mutable std::once_flag star_once;
  mutable std::unique_ptr<PanelInterpolant> log_star_table;
  mutable std::once_flag star_far_once;
  mutable std::unique_ptr<PanelInterpolant> log_star_far;

  explicit WeightImpl(WeightDefinition d) : def(std::move(d)) {}

  double log_density(double r, double omr) const {
    const double a = def.param;
    switch (def.family) {
      case WeightFamily::standard: return a == 0.0 ? 0.0 : a * (std::log(omr) + std::log1p(r));
      case WeightFamily::log_weight: return -std::log(omr) - a * std::log(1.0 - std::log(omr));
      case WeightFamily::exponential: return -a / omr;
      case WeightFamily::user: return std::log(def.user_density(r, omr));
    }
    return 0.0;
  }

  double density(double r, double omr) const {
    if (def.family == WeightFamily::user) return def.user_density(r, omr);
    return std::exp(log_density(r, omr));
  }

  double user_tail_direct(double r, double omr) const {
    const QuadSpec spec = inner_spec();
    const RadialFn& f = def.user_density;
    auto g = [&](double u) {
      const double o = std::exp(-u);
      if (o == 0.0) return 0.0;
      const double v = f(-std::expm1(-u), o);
      return v == 0.0 ? 0.0 : v * o;
    };
    (void)r;
    QuadResult q = integrate_half_line(g, -std::log(omr), spec);
    if (!std::isfinite(q.value)) throw IntegrabilityError("weight '" + def.label + "' is not integrable");
    return q.value;
  }

  double log_tail(double r, double omr) const {
    const double a = def.param;
    switch (def.family) {
      case WeightFamily::standard: {
        const double x = omr * (1.0 + r);
        const double scale = 0.5 * boost::math::beta(a + 1.0, 0.5);
        const double v = scale * boost::math::ibeta(a + 1.0, 0.5, x);
        if (v > 0.0) return std::log(v);
        return (a + 1.0) * std::log(x) - std::log(2.0 * (a + 1.0));
      }
      case WeightFamily::log_weight:
        return (1.0 - a) * std::log(1.0 - std::log(omr)) - std::log(a - 1.0);
      case WeightFamily::exponential: {
        // \int_x^\infty e^{-c u} u^{-2} du = E_2(c x) / x with x = 1/(1-r).
        const double log_x = -std::log(omr);
        const double z = a / omr;
        if (z < 500.0) return std::log(boost::math::expint(2, z)) - log_x;
        return -z + std::log(scaled_expint2(z)) - log_x;
      }
      case WeightFamily::user: {
        if (def.user_tail) return std::log(def.user_tail(r, omr));
        const double t = -std::log(omr);
        if (t < kTableEnd) {
          std::call_once(tail_once, [&] {
            log_tail_table = std::make_unique<PanelInterpolant>(
                [this](double s) {
                  const double o = std::exp(-s);
                  return std::log(user_tail_direct(-std::expm1(-s), o));
                },
                0.0, kTableEnd, 0.25, 16);
          });
          return (*log_tail_table)(t);
        }
        return std::log(user_tail_direct(r, omr));
      }
    }
    return 0.0;
  }

  double tail(double r, double omr) const {
    if (def.family == WeightFamily::log_weight) {
      return std::pow(1.0 - std::log(omr), 1.0 - def.param) / (def.param - 1.0);
    }
    if (def.family == WeightFamily::user && def.user_tail) return def.user_tail(r, omr);
    return std::exp(log_tail(r, omr));
  }

  double star_direct(double r, double omr) const {
    // Integration by parts: omega^star(r) = \int_r^1 \hat\omega(s) (1 + log(s/r)) ds.
    const QuadSpec spec = inner_spec();
    auto g = [&](double u) {
      const double o = std::exp(-u);
      if (o == 0.0) return 0.0;
      const double s = -std::expm1(-u);
      const double w_hat = tail(s, o);
      if (w_hat == 0.0) return 0.0;
      const double log_ratio = std::log1p((omr - o) / r);
      return w_hat * (1.0 + log_ratio) * o;
    };
    return integrate_half_line(g, -std::log(omr), spec).value;
  }

  double star(double r, double omr) const {
    if (def.family == WeightFamily::standard && def.param == 0.0) {
      // 1/2 log(1/r) - (1 - r^2)/4; near the boundary the leading terms cancel
      // and the series omr^2/2 + sum_{k>=3} omr^k/(2k) is used instead.
      if (omr < 0.25) {
        double sum = 0.5 * omr * omr;
        double power = omr * omr;
        for (int k = 3; k < 40; ++k) {
          power *= omr;
          const double term = power / (2.0 * k);
          sum += term;
          if (term < 1e-18 * sum) break;
        }
        return sum;
      }
      return -0.5 * std::log1p(-omr) - 0.25 * omr * (1.0 + r);
    }
    const double t = -std::log(omr);
    const double t_lo = -std::log1p(-kStarDirectBelow);
    if (def.family == WeightFamily::exponential || r < kStarDirectBelow) return star_direct(r, omr);
    if (t >= kTableEnd) {
      if (t >= kFarTableEnd) return star_direct(r, omr);
      // log omega^star is slowly varying in t this deep, so wide panels suffice.
      std::call_once(star_far_once, [&] {
        log_star_far = std::make_unique<PanelInterpolant>(
            [this](double s) { return std::log(star_direct(-std::expm1(-s), std::exp(-s))); }, kTableEnd,
            kFarTableEnd, 4.0, 16);
      });
      return std::exp((*log_star_far)(t));
    }
    std::call_once(star_once, [&] {
      log_star_table = std::make_unique<PanelInterpolant>(
          [this](double s) {
            const double o = std::exp(-s);
            return std::log(star_direct(-std::expm1(-s), o));
          },
          t_lo, kTableEnd, 0.25, 16);
    });
    return std::exp((*log_star_table)(t));
  }

  double tail_first_moment(double r) const {
    const double omr = 1.0 - r;
    if (def.family == WeightFamily::standard) {
      const double a = def.param;
      return std::pow(omr * (1.0 + r), a + 1.0) / (2.0 * (a + 1.0));
    }
    auto g = [&](double u) {
      const double o = std::exp(-u);
      if (o == 0.0) return 0.0;
      const double s = -std::expm1(-u);
      const double v = density(s, o);
      return v == 0.0 ? 0.0 : v * s * o;
    };
    return integrate_half_line(g, -std::log(omr), inner_spec()).value;
  }

  const MomentSequence& moment_table() const {
    std::call_once(moments_once, [&] {
      if (def.family == WeightFamily::standard) {
        const double a = def.param;
        auto exact = [a](std::size_t b, std::size_t e, double* out) {
          constexpr std::size_t kResync = 256;
          for (std::size_t k = b; k < e; k += kResync) {
            const std::size_t stop = std::min(e, k + kResync);
            // omega_k = B((k+1)/2, a+1)/2, advanced by
            // omega_{k+2} = omega_k (k+1)/(k+3+2a).
            double even = 0.5 * boost::math::beta((static_cast<double>(k) + 1.0) / 2.0, a + 1.0);
            double odd = 0.5 * boost::math::beta((static_cast<double>(k) + 2.0) / 2.0, a + 1.0);
            for (std::size_t m = k; m < stop; m += 2) {
              out[m - b] = even;
              if (m + 1 < stop) out[m + 1 - b] = odd;
              const double km = static_cast<double>(m);
              even *= (km + 1.0) / (km + 3.0 + 2.0 * a);
              odd *= (km + 2.0) / (km + 4.0 + 2.0 * a);
            }
          }
        };
        moments = std::make_unique<MomentSequence>(exact);
      } else {
        auto density_t = [this](double t) {
          const double o = std::exp(-t);
          const double v = density(-std::expm1(-t), o);
          return v * o;
        };
        auto tail_t = [this](double t) {
          const double o = std::exp(-t);
          return tail(-std::expm1(-t), o);
        };
        moments = std::make_unique<MomentSequence>(density_t, tail_t);
      }
    });
    return *moments;
  }
};

}  // namespace detail

using detail::WeightDefinition;
using detail::WeightImpl;

RadialWeight RadialWeight::standard(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw DomainError("standard weight requires alpha > -1");
  WeightDefinition d;
  d.family = WeightFamily::standard;
  d.param = alpha;
  d.label = "standard(" + format_number(alpha) + ")";
  return RadialWeight(std::make_shared<const WeightImpl>(std::move(d)));
}

RadialWeight RadialWeight::log_weight(double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("log weight requires a finite alpha");
  if (!(alpha > 1.0)) throw IntegrabilityError("log weight is integrable only for alpha > 1");
  WeightDefinition d;
  d.family = WeightFamily::log_weight;
  d.param = alpha;
  d.label = "log(" + format_number(alpha) + ")";
  return RadialWeight(std::make_shared<const WeightImpl>(std::move(d)));
}

RadialWeight RadialWeight::exponential(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("exponential weight requires c > 0");
  WeightDefinition d;
  d.family = WeightFamily::exponential;
  d.param = c;
  d.label = "exponential(" + format_number(c) + ")";
  return RadialWeight(std::make_shared<const WeightImpl>(std::move(d)));
}

RadialWeight RadialWeight::user(RadialFn density, std::string label, bool integrable, RadialFn tail) {
  if (!density) throw DomainError("user weight requires a density");
  if (!integrable) throw IntegrabilityError("weight '" + label + "' is marked non-integrable");
  WeightDefinition d;
  d.family = WeightFamily::user;
  d.label = std::move(label);
  d.user_density = std::move(density);
  d.user_tail = std::move(tail);
  auto impl = std::make_shared<const WeightImpl>(std::move(d));
  const double total = impl->def.user_tail ? impl->def.user_tail(0.0, 1.0) : impl->user_tail_direct(0.0, 1.0);
  if (!std::isfinite(total)) throw IntegrabilityError("weight '" + impl->def.label + "' is not integrable");
  const double omr = std::ldexp(1.0, -20);
  const double edge = impl->def.user_tail ? impl->def.user_tail(1.0 - omr, omr) : impl->user_tail_direct(1.0 - omr, omr);
  if (!(edge > 0.0)) throw DomainError("weight '" + impl->def.label + "' has vanishing tail near the boundary");
  return RadialWeight(std::move(impl));
}

WeightFamily RadialWeight::family() const { return impl_->def.family; }
double RadialWeight::parameter() const { return impl_->def.param; }
const std::string& RadialWeight::label() const { return impl_->def.label; }

bool RadialWeight::equivalent(const RadialWeight& other) const {
  if (impl_ == other.impl_) return true;
  return family() != WeightFamily::user && family() == other.family() && parameter() == other.parameter();
}
const Warnings& RadialWeight::warnings() const { return impl_->def.warnings; }

RadialWeight RadialWeight::with_warning(std::string message) const {
  WeightDefinition d = impl_->def;
  d.warnings.push_back(std::move(message));
  return RadialWeight(std::make_shared<const WeightImpl>(std::move(d)));
}

namespace {
void check_radius(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw DomainError("radius must lie in [0, 1)");
}
}  // namespace

double RadialWeight::density(double r) const {
  check_radius(r);
  return impl_->density(r, 1.0 - r);
}
double RadialWeight::density(double r, double one_minus_r) const {
  if (!(one_minus_r > 0.0 && r >= 0.0)) throw DomainError("radius must lie in [0, 1)");
  return impl_->density(r, one_minus_r);
}
double RadialWeight::tail(double r) const {
  check_radius(r);
  return impl_->tail(r, 1.0 - r);
}
double RadialWeight::tail(double r, double one_minus_r) const {
  if (!(one_minus_r > 0.0 && r >= 0.0)) throw DomainError("radius must lie in [0, 1)");
  return impl_->tail(r, one_minus_r);
}
double RadialWeight::log_tail(double r, double one_minus_r) const {
  if (!(one_minus_r > 0.0 && r >= 0.0)) throw DomainError("radius must lie in [0, 1)");
  return impl_->log_tail(r, one_minus_r);
}
double RadialWeight::tail_first_moment(double r) const {
  check_radius(r);
  return impl_->tail_first_moment(r);
}
double RadialWeight::star(double r) const {
  check_radius(r);
  if (r == 0.0) throw DomainError("omega_star is undefined at the origin");
  return impl_->star(r, 1.0 - r);
}
double RadialWeight::star(double r, double one_minus_r) const {
  if (!(one_minus_r > 0.0 && r > 0.0)) throw DomainError("omega_star requires a radius in (0, 1)");
  return impl_->star(r, one_minus_r);
}
double RadialWeight::moment(std::size_t n) const { return impl_->moment_table()[n]; }
const MomentSequence& RadialWeight::moments() const { return impl_->moment_table(); }
double RadialWeight::box_mass(double modulus) const {
  if (!(modulus > 0.0 && modulus < 1.0)) throw DomainError("box_mass requires 0 < |a| < 1");
  return (1.0 - modulus) / kPi * impl_->tail_first_moment(modulus);
}

double eval_weight(const RadialWeight& w, double r) { return w.density(r); }
double omega_hat(const RadialWeight& w, double r) { return w.tail(r); }
double omega_star(const RadialWeight& w, double r) { return w.star(r); }
double moment(const RadialWeight& w, std::size_t n) { return w.moment(n); }
double box_mass(const RadialWeight& w, Complex a) {
  if (a == Complex(0.0, 0.0)) throw DomainError("box_mass requires a != 0");
  return w.box_mass(std::abs(a));
}

std::vector<double> RadialGrid::radii() const {
  std::vector<double> r;
  for (int j = j_min; j <= j_max; ++j) r.push_back(1.0 - std::ldexp(1.0, -j));
  return r;
}

void RadialGrid::validate() const {
  if (j_min < 1 || j_max > 50 || j_max - j_min + 1 < trend_levels) {
    throw DomainError("radial grid needs 1 <= j_min and at least trend_levels levels up to j_max <= 50");
  }
  if (!(reverse_factor > 1.0)) throw DomainError("reverse doubling factor must exceed 1");
  if (trend_levels < 2) throw DomainError("trend_levels must be at least 2");
}

double trailing_log_slope(const std::vector<double>& values, int levels) {
  const auto n = values.size();
  const auto m = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(levels), n));
  if (m < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double x = static_cast<double>(i);
    const double y = std::log(values[n - m + i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double md = static_cast<double>(m);
  return (md * sxy - sx * sy) / (md * sxx - sx * sx);
}

BoundedRatioTest bounded_ratio_test(const std::vector<double>& ratios, const RadialGrid& grid) {
  BoundedRatioTest t;
  if (ratios.empty()) return t;
  t.min = *std::min_element(ratios.begin(), ratios.end());
  t.max = *std::max_element(ratios.begin(), ratios.end());
  const bool finite = std::all_of(ratios.begin(), ratios.end(), [](double v) { return std::isfinite(v) && v > 0.0; });
  t.trend_slope = finite ? trailing_log_slope(ratios, grid.trend_levels) : std::numeric_limits<double>::infinity();
  t.bounded = finite && t.max / t.min <= grid.max_dynamic_range && std::abs(t.trend_slope) < grid.max_trend_slope;
  return t;
}

WeightClassReport classify(const RadialWeight& w, const RadialGrid& grid) {
  grid.validate();
  WeightClassReport rep;
  rep.grid = grid;
  std::vector<double> reverse_logs;
  for (int j = grid.j_min; j <= grid.j_max; ++j) {
    const double omr = std::ldexp(1.0, -j);
    const double r = 1.0 - omr;
    const double lt = w.log_tail(r, omr);
    const double lt_half = w.log_tail(1.0 - omr / 2.0, omr / 2.0);
    const double omr_k = omr / grid.reverse_factor;
    const double lt_k = w.log_tail(1.0 - omr_k, omr_k);
    rep.radii.push_back(r);
    rep.doubling_ratios.push_back(std::exp(lt - lt_half));
    reverse_logs.push_back(lt - lt_k);
    rep.reverse_ratios.push_back(std::exp(lt - lt_k));
    const double log_density = std::log(w.density(r, omr));
    double reg = std::exp(log_density + std::log(omr) - lt);
    if (w.family() == WeightFamily::exponential) reg = std::exp(-w.parameter() / omr + std::log(omr) - lt);
    rep.regularity_ratios.push_back(reg);
  }
  rep.doubling_constant = *std::max_element(rep.doubling_ratios.begin(), rep.doubling_ratios.end());
  rep.doubling_exponent_beta = std::log2(rep.doubling_constant);
  rep.reverse_doubling_constant = *std::min_element(rep.reverse_ratios.begin(), rep.reverse_ratios.end());
  rep.regularity_min = *std::min_element(rep.regularity_ratios.begin(), rep.regularity_ratios.end());
  rep.regularity_max = *std::max_element(rep.regularity_ratios.begin(), rep.regularity_ratios.end());
  rep.doubling_test = bounded_ratio_test(rep.doubling_ratios, grid);
  rep.reverse_test = bounded_ratio_test(reverse_logs, grid);
  rep.regularity_test = bounded_ratio_test(rep.regularity_ratios, grid);
  rep.in_Dhat = rep.doubling_test.bounded;
  rep.reverse_doubling = rep.reverse_test.bounded;
  rep.regular = rep.in_Dhat && rep.regularity_test.bounded;
  rep.tested_radius = rep.radii.back();
  return rep;
}

RadialWeight regularize(const RadialWeight& w, const RadialGrid& grid) {
  const WeightClassReport rep = classify(w, grid);
  RadialFn density = [w](double r, double omr) { return w.tail(r, omr) / omr; };
  RadialFn tail;
  if (w.family() == WeightFamily::standard && w.parameter() == 0.0) {
    tail = [](double, double omr) { return omr; };
  } else if (w.family() == WeightFamily::log_weight) {
    const double a = w.parameter();
    if (!(a > 2.0)) throw IntegrabilityError("regularization of log(alpha) is integrable only for alpha > 2");
    tail = [a](double, double omr) { return std::pow(1.0 - std::log(omr), 2.0 - a) / ((a - 1.0) * (a - 2.0)); };
  }
  RadialWeight out = RadialWeight::user(std::move(density), "regularize(" + w.label() + ")", true, std::move(tail));
  if (!rep.in_Dhat) out = out.with_warning("input weight is not doubling on the tested grid");
  if (!rep.reverse_doubling) {
    out = out.with_warning("input weight fails reverse doubling on the tested grid; norm equivalence not guaranteed");
  }
  return out;
}

}  // namespace bergman
