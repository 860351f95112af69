#include "bergman/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace bergman {

namespace detail {

struct MeasureImpl {
  Measure::Kind kind = Measure::Kind::point_masses;
  std::string label;
  std::vector<Atom> atoms;
  RadialFn radial;  // includes the support cut-off
  DiscFn area;
  double support = 1.0;
  std::optional<Symbol> symbol;
  std::optional<RadialWeight> weight;  // base weight (pullback) or weight multiple
  bool exact_weight_multiple = false;
  double scale = 1.0;

  mutable std::once_flag moments_once;
  mutable std::unique_ptr<MomentSequence> moments;
};

}  // namespace detail

using detail::MeasureImpl;

namespace {

QuadSpec tight_spec() {
  QuadSpec s;
  s.relative_tolerance = 1e-12;
  s.absolute_floor = 0.0;
  s.max_subdivisions = 30;
  return s;
}

RadialFn with_support(RadialFn v, double support) {
  if (support >= 1.0) return v;
  return [v = std::move(v), support](double r, double omr) { return r < support ? v(r, omr) : 0.0; };
}

void check_support(double support) {
  if (!(support > 0.0 && support <= 1.0)) throw DomainError("support radius must lie in (0, 1]");
}

}  // namespace

Measure Measure::point_masses(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (!(std::abs(a.location) < 1.0)) throw DomainError("point mass must lie in the disc");
    if (!(a.mass > 0.0) || !std::isfinite(a.mass)) throw DomainError("point-mass weights must be positive");
  }
  auto impl = std::make_shared<MeasureImpl>();
  impl->kind = Kind::point_masses;
  impl->atoms = std::move(atoms);
  double support = 0.0;
  for (const Atom& a : impl->atoms) support = std::max(support, std::abs(a.location));
  impl->support = std::min(1.0, support + 1e-300);
  impl->label = "point_masses(" + std::to_string(impl->atoms.size()) + ")";
  return Measure(std::move(impl));
}

Measure Measure::radial_density(RadialFn density, std::string label, double support_radius) {
  if (!density) throw DomainError("radial density required");
  check_support(support_radius);
  auto impl = std::make_shared<MeasureImpl>();
  impl->kind = Kind::radial_density;
  impl->label = std::move(label);
  impl->support = support_radius;
  impl->radial = with_support(std::move(density), support_radius);
  return Measure(std::move(impl));
}

Measure Measure::weighted(const RadialWeight& w, double scale, double support_radius) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("measure scale must be positive");
  check_support(support_radius);
  auto impl = std::make_shared<MeasureImpl>();
  impl->kind = Kind::radial_density;
  impl->label = (scale == 1.0 ? std::string() : format_number(scale) + "*") + w.label() + " dA" +
                (support_radius < 1.0 ? " on |z|<" + format_number(support_radius) : std::string());
  impl->support = support_radius;
  impl->radial = with_support([w, scale](double r, double omr) { return scale * w.density(r, omr); }, support_radius);
  impl->weight = w;
  impl->exact_weight_multiple = support_radius >= 1.0;
  impl->scale = scale;
  return Measure(std::move(impl));
}

Measure Measure::weighted_by(const RadialWeight& w, RadialFn factor, std::string label, double support_radius) {
  if (!factor) throw DomainError("density factor required");
  RadialFn v = [w, f = std::move(factor)](double r, double omr) {
    const double a = f(r, omr);
    return a == 0.0 ? 0.0 : a * w.density(r, omr);
  };
  return radial_density(std::move(v), std::move(label), support_radius);
}

Measure Measure::area_density(DiscFn density, std::string label, double support_radius) {
  if (!density) throw DomainError("area density required");
  check_support(support_radius);
  auto impl = std::make_shared<MeasureImpl>();
  impl->kind = Kind::area_density;
  impl->label = std::move(label);
  impl->support = support_radius;
  if (support_radius < 1.0) {
    impl->area = [v = std::move(density), support_radius](Complex z) { return std::abs(z) < support_radius ? v(z) : 0.0; };
  } else {
    impl->area = std::move(density);
  }
  return Measure(std::move(impl));
}

Measure Measure::pullback(const Symbol& phi, const RadialWeight& w) {
  auto impl = std::make_shared<MeasureImpl>();
  impl->kind = Kind::pullback;
  impl->label = "pullback(deg " + std::to_string(phi.degree()) + ", " + w.label() + ")";
  impl->symbol = phi;
  impl->weight = w;
  // The image of a polynomial with boundary sup below 1 stays in that disc.
  impl->support = phi.form() == Symbol::Form::polynomial && phi.sup_norm_certificate() < 1.0
                      ? phi.sup_norm_certificate()
                      : 1.0;
  return Measure(std::move(impl));
}

Measure::Kind Measure::kind() const { return impl_->kind; }
const std::string& Measure::label() const { return impl_->label; }
double Measure::support_radius() const { return impl_->support; }

bool Measure::is_radial() const {
  if (impl_->kind == Kind::radial_density) return true;
  if (impl_->kind == Kind::point_masses) {
    return std::all_of(impl_->atoms.begin(), impl_->atoms.end(), [](const Atom& a) { return a.location == Complex(0.0); });
  }
  return false;
}

Measure Measure::scaled(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("measure scale must be positive");
  const MeasureImpl& s = *impl_;
  switch (s.kind) {
    case Kind::point_masses: {
      std::vector<Atom> atoms = s.atoms;
      for (Atom& a : atoms) a.mass *= t;
      return point_masses(std::move(atoms));
    }
    case Kind::radial_density: {
      if (s.weight && s.exact_weight_multiple) return weighted(*s.weight, s.scale * t, s.support);
      RadialFn v = s.radial;
      return radial_density([v, t](double r, double omr) { return t * v(r, omr); }, format_number(t) + "*" + s.label,
                            s.support);
    }
    case Kind::area_density: {
      DiscFn v = s.area;
      return area_density([v, t](Complex z) { return t * v(z); }, format_number(t) + "*" + s.label, s.support);
    }
    case Kind::pullback: throw UnsupportedError("scaling a pullback measure is not supported");
  }
  throw UnsupportedError("unknown measure kind");
}

const std::vector<Atom>& Measure::atoms() const { return impl_->atoms; }

double Measure::radial_density_at(double r, double one_minus_r) const {
  if (impl_->kind != Kind::radial_density) throw UnsupportedError("measure has no radial density");
  return impl_->radial(r, one_minus_r);
}

const RadialFn& Measure::radial_density_fn() const {
  if (impl_->kind != Kind::radial_density) throw UnsupportedError("measure has no radial density");
  return impl_->radial;
}

double Measure::area_density_at(Complex z) const {
  if (impl_->kind != Kind::area_density) throw UnsupportedError("measure has no area density");
  return impl_->area(z);
}

const Symbol& Measure::symbol() const {
  if (!impl_->symbol) throw UnsupportedError("measure is not a pullback");
  return *impl_->symbol;
}

const RadialWeight& Measure::base_weight() const {
  if (!impl_->weight) throw UnsupportedError("measure has no base weight");
  return *impl_->weight;
}

std::optional<std::pair<RadialWeight, double>> Measure::weight_multiple() const {
  if (impl_->kind == Kind::radial_density && impl_->weight && impl_->exact_weight_multiple) {
    return std::make_pair(*impl_->weight, impl_->scale);
  }
  return std::nullopt;
}

const MomentSequence& Measure::radial_moments() const {
  if (impl_->kind != Kind::radial_density) throw UnsupportedError("radial moments require a radial density");
  const MeasureImpl& s = *impl_;
  std::call_once(s.moments_once, [&s] {
    if (s.weight && s.exact_weight_multiple) {
      RadialWeight w = *s.weight;
      const double scale = s.scale;
      auto exact = [w, scale](std::size_t b, std::size_t e, double* out) {
        for (std::size_t k = b; k < e; ++k) out[k - b] = scale == 1.0 ? w.moment(k) : scale * w.moment(k);
      };
      s.moments = std::make_unique<MomentSequence>(exact);
    } else if (s.support < 1.0) {
      s.moments = std::make_unique<MomentSequence>(RadialRule::log_mapped(0.0, 40.0, 0.5, 16, s.support), s.radial, 0.0);
    } else {
      RadialFn v = s.radial;
      auto density_t = [v](double t) {
        const double o = std::exp(-t);
        return v(-std::expm1(-t), o) * o;
      };
      auto tail_t = [v](double t) {
        RealFn g = [&v](double u) {
          const double o = std::exp(-u);
          const double d = v(-std::expm1(-u), o);
          return d == 0.0 ? 0.0 : d * o;
        };
        return integrate_half_line(g, t, tight_spec()).value;
      };
      s.moments = std::make_unique<MomentSequence>(density_t, tail_t);
    }
  });
  return *s.moments;
}

double Measure::radial_first_moment_tail(double r) const {
  if (impl_->kind != Kind::radial_density) throw UnsupportedError("radial moments require a radial density");
  const MeasureImpl& s = *impl_;
  if (r >= s.support) return 0.0;
  if (s.weight && s.exact_weight_multiple) return s.scale * s.weight->tail_first_moment(r);
  const RadialFn& v = s.radial;
  RadialFn f = [&v](double x, double omx) {
    const double d = v(x, omx);
    return d == 0.0 ? 0.0 : d * x;
  };
  if (s.support < 1.0) return integrate_radial(f, r, s.support, tight_spec()).value;
  return integrate_radial(f, r, tight_spec()).value;
}

MassEstimate pullback_mass(const Symbol& phi, const RadialWeight& w, const Region& region, int rays) {
  if (rays < 8) throw DomainError("pullback_mass needs at least 8 rays");
  // Radii sampled uniformly in r and then geometrically toward the boundary.
  std::vector<double> omrs;
  for (int k = 0; k < 512; ++k) omrs.push_back(1.0 - k / 1024.0);
  for (double t = std::log(2.0); t <= 40.0; t += 0.125) omrs.push_back(std::exp(-t));
  std::sort(omrs.begin(), omrs.end(), std::greater<>());
  omrs.erase(std::unique(omrs.begin(), omrs.end()), omrs.end());

  auto inside = [&](double r, double theta) { return region_contains(region, phi(std::polar(r, theta))); };
  auto ray_mass = [&](double theta) {
    auto tfm = [&](double omr) {
      if (omr >= 1.0) return w.tail_first_moment(0.0);
      const double r = 1.0 - omr;
      return r < 1.0 ? w.tail_first_moment(r) : 0.0;
    };
    double total = 0.0;
    bool state = inside(1.0 - omrs[0], theta);
    double start = omrs[0];
    for (std::size_t k = 1; k < omrs.size(); ++k) {
      const bool now = inside(1.0 - omrs[k], theta);
      if (now == state) continue;
      // Bisect the transition in the interval (omrs[k], omrs[k-1]).
      double lo = omrs[k - 1], hi = omrs[k];
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (inside(1.0 - mid, theta) == state) lo = mid;
        else hi = mid;
      }
      const double edge = 0.5 * (lo + hi);
      if (state) total += tfm(start) - tfm(edge);
      state = now;
      start = edge;
    }
    if (state) total += tfm(start);
    return total;
  };
  // Trapezoid cells between rays, bisected while the midpoint ray moves the
  // cell value (jumps where the image crosses the region boundary).
  std::vector<double> m(static_cast<std::size_t>(rays) + 1);
  const double step = 2.0 * kPi / rays;
  for (int i = 0; i < rays; ++i) m[static_cast<std::size_t>(i)] = ray_mass(step * i);
  m[static_cast<std::size_t>(rays)] = m[0];
  const double peak = *std::max_element(m.begin(), m.end());
  const double tol = 1e-11 * std::max(peak, std::numeric_limits<double>::min());
  double value = 0.0, error = 0.0;
  std::function<void(double, double, double, double, int)> cell = [&](double a, double b, double ma, double mb, int depth) {
    const double mm = ray_mass(0.5 * (a + b));
    const double gap = std::abs(mm - 0.5 * (ma + mb)) * (b - a);
    if (depth < 40 && gap > tol) {
      cell(a, 0.5 * (a + b), ma, mm, depth + 1);
      cell(0.5 * (a + b), b, mm, mb, depth + 1);
      return;
    }
    value += (b - a) * (ma + 4.0 * mm + mb) / 6.0;
    error += gap;
  };
  for (int i = 0; i < rays; ++i) {
    const auto k = static_cast<std::size_t>(i);
    cell(step * i, step * (i + 1), m[k], m[k + 1], 0);
  }
  return {value / kPi, error / kPi, true};
}

MassEstimate Measure::mass(const Region& region, const QuadSpec& spec) const {
  const MeasureImpl& s = *impl_;
  switch (s.kind) {
    case Kind::point_masses: {
      double total = 0.0;
      for (const Atom& a : s.atoms) {
        if (region_contains(region, a.location)) total += a.mass;
      }
      return {total, 0.0, true};
    }
    case Kind::radial_density: {
      struct Visitor {
        const Measure& mu;
        const QuadSpec& spec;
        double ring(double r0, double r1) const {
          const double outer = r1 >= 1.0 ? 0.0 : mu.radial_first_moment_tail(r1);
          return 2.0 * (mu.radial_first_moment_tail(r0) - outer);
        }
        MassEstimate operator()(const FullDisc&) const { return {ring(0.0, 1.0), 0.0, true}; }
        MassEstimate operator()(const Annulus& a) const { return {ring(a.r_inner, a.r_outer), 0.0, true}; }
        MassEstimate operator()(const CarlesonSquare& c) const {
          return {c.arc.width / (2.0 * kPi) * ring(c.inner_radius, 1.0), 0.0, true};
        }
        MassEstimate operator()(const DyadicRectangle& d) const {
          return {(d.theta_end - d.theta_begin) / (2.0 * kPi) * ring(d.r_inner, d.r_outer), 0.0, true};
        }
        MassEstimate operator()(const PseudoDisc& d) const {
          const double rho = std::abs(d.center);
          QuadResult q = pseudo_disc_radial_integral(mu.radial_density_fn(), rho, 1.0 - rho, d.radius, spec);
          return {q.value, q.error, q.converged};
        }
      };
      return std::visit(Visitor{*this, spec}, region);
    }
    case Kind::area_density: {
      QuadResult q = integrate_region(s.area, region, std::nullopt, spec);
      return {q.value, q.error, q.converged};
    }
    case Kind::pullback: return pullback_mass(*s.symbol, *s.weight, region);
  }
  throw UnsupportedError("unknown measure kind");
}

QuadResult Measure::integrate(const DiscFn& g, const QuadSpec& spec) const {
  const MeasureImpl& s = *impl_;
  switch (s.kind) {
    case Kind::point_masses: {
      QuadResult q;
      for (const Atom& a : s.atoms) q.value += a.mass * g(a.location);
      return q;
    }
    case Kind::radial_density:
      return integrate_polar(g, 0.0, s.support, 0.0, 2.0 * kPi, s.radial, spec);
    case Kind::area_density: {
      const DiscFn& v = s.area;
      DiscFn h = [&](Complex z) {
        const double d = v(z);
        return d == 0.0 ? 0.0 : d * g(z);
      };
      const Region region = s.support < 1.0 ? Region{Annulus{0.0, s.support}} : Region{FullDisc{}};
      return integrate_region(h, region, std::nullopt, spec);
    }
    case Kind::pullback: {
      const Symbol& phi = *s.symbol;
      return integrate_region([&](Complex z) { return g(phi(z)); }, FullDisc{}, s.weight, spec);
    }
  }
  throw UnsupportedError("unknown measure kind");
}

MassEstimate mass(const Measure& mu, const Region& region, const QuadSpec& spec) { return mu.mass(region, spec); }

double mu_hat_r_radial(const Measure& mu, const RadialWeight& w, double rho, double one_minus_rho, double r,
                       const QuadSpec& spec) {
  RadialFn wd = [&w](double s, double oms) { return w.density(s, oms); };
  const double denom = pseudo_disc_radial_integral(wd, rho, one_minus_rho, r, spec).value;
  if (!(denom > 0.0)) throw PrecisionError("mu_hat_r: omega(Delta(z, r)) vanishes");
  const double num = mu.kind() == Measure::Kind::radial_density
                         ? pseudo_disc_radial_integral(mu.radial_density_fn(), rho, one_minus_rho, r, spec).value
                         : mu.mass(Region{pseudo_disc(Complex(rho, 0.0), r)}, spec).value;
  return num / denom;
}

double mu_hat_r(const Measure& mu, const RadialWeight& w, Complex z, double r, const QuadSpec& spec) {
  const PseudoDisc d = pseudo_disc(z, r);
  const double denom = weighted_region_mass(Region{d}, w, spec);
  if (!(denom > spec.absolute_floor)) throw PrecisionError("mu_hat_r: omega(Delta(z, r)) below the absolute floor");
  return mu.mass(Region{d}, spec).value / denom;
}

void CenterGrid::validate() const {
  if (j_min < 1 || j_max < j_min || j_max > 40) throw DomainError("center grid levels must satisfy 1 <= j_min <= j_max <= 40");
  if (max_angle_bits < 0 || max_angle_bits > 16) throw DomainError("center grid angle bits must lie in [0, 16]");
}

std::vector<std::pair<int, Complex>> grid_centers(const CenterGrid& grid, bool radial) {
  grid.validate();
  std::vector<std::pair<int, Complex>> out;
  for (int j = grid.j_min; j <= grid.j_max; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    const int count = (radial && grid.radial_shortcut) ? 1 : (1 << std::min(j, grid.max_angle_bits));
    for (int k = 0; k < count; ++k) out.emplace_back(j, std::polar(r, 2.0 * kPi * k / count));
  }
  for (Complex a : grid.extra_centers) {
    const double m = std::abs(a);
    if (!(m > 0.0 && m < 1.0)) throw DomainError("extra centers must satisfy 0 < |a| < 1");
    const int level = std::clamp(static_cast<int>(std::floor(-std::log2(1.0 - m))), grid.j_min, grid.j_max);
    out.emplace_back(level, a);
  }
  return out;
}

CarlesonConstant carleson_constant(const Measure& mu, const RadialWeight& w, double gamma, const CenterGrid& grid,
                                   const QuadSpec& spec) {
  if (!(gamma > 0.0)) throw DomainError("carleson_constant requires gamma > 0");
  CarlesonConstant out;
  out.gamma = gamma;
  out.grid = grid;
  const auto centers = grid_centers(grid, mu.is_radial());
  for (int j = grid.j_min; j <= grid.j_max; ++j) out.levels.push_back(j);
  out.level_sup.assign(out.levels.size(), 0.0);
  out.sup_value = -1.0;
  for (const auto& [level, a] : centers) {
    const double num = mu.mass(Region{carleson_square(a)}, spec).value;
    const double ratio = num / std::pow(w.box_mass(std::abs(a)), gamma);
    auto& slot = out.level_sup[static_cast<std::size_t>(level - grid.j_min)];
    slot = std::max(slot, ratio);
    if (ratio > out.sup_value) {
      out.sup_value = ratio;
      out.argmax_center = a;
    }
    ++out.centers_evaluated;
  }
  out.vanishing_tail.assign(out.levels.size(), 0.0);
  double running = 0.0;
  for (std::size_t i = out.levels.size(); i-- > 0;) {
    running = std::max(running, out.level_sup[i]);
    out.vanishing_tail[i] = running;
  }
  return out;
}

}  // namespace bergman
