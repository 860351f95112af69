#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bergman {

double wrap_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return t;
}

bool Arc::contains_angle(double theta) const {
  if (width >= 2.0 * kPi) return true;
  const double offset = wrap_angle(theta - begin_angle());
  return offset <= width;
}

bool CarlesonSquare::contains(Complex z) const {
  const double m = std::abs(z);
  // The inner edge is closed; a few ulps of slack keep a itself inside S(a).
  if (!(m < 1.0) || m < inner_radius - 4.0 * std::numeric_limits<double>::epsilon()) return false;
  if (m == 0.0) return arc.width >= 2.0 * kPi;
  return arc.contains_angle(std::arg(z));
}

bool DyadicRectangle::contains(Complex z) const {
  const double m = std::abs(z);
  if (m < r_inner || m >= r_outer) return false;
  if (level == 0) return true;
  const double th = wrap_angle(std::arg(z));
  return th >= theta_begin && th < theta_end;
}

bool PseudoDisc::contains(Complex z) const { return std::abs(z) < 1.0 && pseudo_distance(center, z) < radius; }

bool Annulus::contains(Complex z) const {
  const double m = std::abs(z);
  return m >= r_inner && m < r_outer;
}

bool region_contains(const Region& region, Complex z) {
  return std::visit([&](const auto& r) { return r.contains(z); }, region);
}

double region_area(const Region& region) {
  struct Visitor {
    double operator()(const FullDisc&) const { return 1.0; }
    double operator()(const Annulus& a) const { return a.r_outer * a.r_outer - a.r_inner * a.r_inner; }
    double operator()(const CarlesonSquare& s) const {
      return s.arc.width / (2.0 * kPi) * (1.0 - s.inner_radius * s.inner_radius);
    }
    double operator()(const PseudoDisc& d) const { return d.euclid_radius * d.euclid_radius; }
    double operator()(const DyadicRectangle& d) const {
      return (d.theta_end - d.theta_begin) / (2.0 * kPi) * (d.r_outer * d.r_outer - d.r_inner * d.r_inner);
    }
  };
  return std::visit(Visitor{}, region);
}

std::string region_name(const Region& region) {
  struct Visitor {
    std::string operator()(const FullDisc&) const { return "disc"; }
    std::string operator()(const Annulus&) const { return "annulus"; }
    std::string operator()(const CarlesonSquare&) const { return "carleson_square"; }
    std::string operator()(const PseudoDisc&) const { return "pseudo_disc"; }
    std::string operator()(const DyadicRectangle&) const { return "dyadic_rectangle"; }
  };
  return std::visit(Visitor{}, region);
}

double pseudo_distance(Complex a, Complex z) {
  const Complex den = 1.0 - std::conj(a) * z;
  if (den == Complex(0.0, 0.0)) throw DomainError("pseudo_distance requires points inside the disc");
  return std::min(1.0, std::abs(a - z) / std::abs(den));
}

Complex mobius(Complex a, Complex z) { return (a - z) / (1.0 - std::conj(a) * z); }

PseudoDisc pseudo_disc(Complex a, double r) {
  if (!(std::abs(a) < 1.0)) throw DomainError("pseudo_disc center must lie in the disc");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("pseudo_disc radius must lie in (0, 1)");
  const double a2 = std::norm(a);
  const double den = 1.0 - r * r * a2;
  PseudoDisc d;
  d.center = a;
  d.radius = r;
  d.euclid_center = a * ((1.0 - r * r) / den);
  d.euclid_radius = r * (1.0 - a2) / den;
  return d;
}

Arc interval_of(Complex a) {
  const double m = std::abs(a);
  if (m == 0.0) throw DomainError("interval_of is undefined at the origin");
  if (!(m < 1.0)) throw DomainError("interval_of requires |a| < 1");
  return Arc{wrap_angle(std::arg(a)), 1.0 - m};
}

CarlesonSquare carleson_square(const Arc& arc) {
  if (!(arc.width > 0.0 && arc.width <= 2.0 * kPi)) throw DomainError("arc width must lie in (0, 2 pi]");
  return CarlesonSquare{arc, std::max(0.0, 1.0 - arc.width)};
}

CarlesonSquare carleson_square(Complex a) { return carleson_square(interval_of(a)); }

Complex boundary_point(Complex a, double delta) {
  const double m = std::abs(a);
  if (m == 0.0) throw DomainError("boundary_point is undefined at the origin");
  if (!(m < 1.0)) throw DomainError("boundary_point requires |a| < 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw DomainError("boundary_point requires delta in (0, 1]");
  return std::polar(1.0 - delta * (1.0 - m), std::arg(a));
}

DyadicRectangle dyadic_rectangle(int level, std::int64_t index) {
  if (level < 0 || level > 60) throw DomainError("dyadic level must lie in [0, 60]");
  DyadicRectangle d;
  d.level = level;
  d.index = index;
  if (level == 0) {
    if (index != 0) throw DomainError("level 0 has a single cell");
    d.center = Complex(0.5, 0.0);
    return d;
  }
  const auto count = std::int64_t{1} << level;
  if (index < 0 || index >= count) throw DomainError("dyadic index out of range");
  const double step = 2.0 * kPi / static_cast<double>(count);
  d.r_inner = 1.0 - std::ldexp(1.0, -level);
  d.r_outer = 1.0 - std::ldexp(1.0, -level - 1);
  d.theta_begin = step * static_cast<double>(index);
  d.theta_end = step * static_cast<double>(index + 1);
  d.center = std::polar(d.r_inner, d.theta_begin + step / 2.0);
  return d;
}

std::vector<DyadicRectangle> dyadic_rectangles(int n_max) {
  if (n_max < 0 || n_max > 24) throw DomainError("dyadic_rectangles: n_max must lie in [0, 24]");
  std::vector<DyadicRectangle> out;
  out.reserve((std::size_t{1} << (n_max + 1)) - 1);
  for (int n = 0; n <= n_max; ++n) {
    const auto count = (n == 0) ? 1 : (std::int64_t{1} << n);
    for (std::int64_t k = 0; k < count; ++k) out.push_back(dyadic_rectangle(n, k));
  }
  return out;
}

DyadicRectangle dyadic_cell(Complex z) {
  const double m = std::abs(z);
  if (!(m < 1.0)) throw DomainError("dyadic_cell requires |z| < 1");
  if (m < 0.5) return dyadic_rectangle(0, 0);
  // Level n satisfies 1 - 2^{-n} <= m < 1 - 2^{-n-1}.
  int n = static_cast<int>(std::floor(-std::log2(1.0 - m)));
  n = std::clamp(n, 1, 60);
  while (n > 1 && m < 1.0 - std::ldexp(1.0, -n)) --n;
  while (n < 60 && m >= 1.0 - std::ldexp(1.0, -n - 1)) ++n;
  const auto count = std::int64_t{1} << n;
  const double th = wrap_angle(std::arg(z));
  auto k = static_cast<std::int64_t>(std::floor(th / (2.0 * kPi) * static_cast<double>(count)));
  k = std::clamp<std::int64_t>(k, 0, count - 1);
  DyadicRectangle d = dyadic_rectangle(n, k);
  // Guard against rounding at the angular cell edges.
  if (th < d.theta_begin && k > 0) d = dyadic_rectangle(n, k - 1);
  if (th >= d.theta_end && k + 1 < count) d = dyadic_rectangle(n, k + 1);
  return d;
}

Lattice delta_lattice(double delta, int depth, std::size_t point_budget) {
  if (!(delta > 0.0 && delta < 0.5)) throw DomainError("delta_lattice requires delta in (0, 0.5)");
  if (depth < 1 || depth > 30) throw DomainError("delta_lattice depth must lie in [1, 30]");
  const double h = std::atanh(delta);
  const double limit = 1.0 - std::ldexp(1.0, -depth);
  Lattice lat;
  lat.delta = delta;
  lat.depth = depth;
  lat.points.push_back(Complex(0.0, 0.0));
  double min_sep = delta;  // radial neighbours are exactly delta apart
  double worst_half_step = 0.0;
  double outer = 0.0;
  for (int k = 1;; ++k) {
    const double rho = std::tanh(k * h);
    if (rho >= limit) break;
    const double step_guess = delta * (1.0 - rho * rho) / rho;
    const auto count = static_cast<std::size_t>(std::max(3.0, std::ceil(2.0 * kPi / step_guess)));
    if (lat.points.size() + count > point_budget) {
      throw ResourceError("delta_lattice: point budget exceeded; raise the budget or lower the depth");
    }
    const double step = 2.0 * kPi / static_cast<double>(count);
    // Stagger alternate rings by half a step.
    const double phase = (k % 2 == 0) ? 0.0 : step / 2.0;
    for (std::size_t i = 0; i < count; ++i) lat.points.push_back(std::polar(rho, phase + step * static_cast<double>(i)));
    const Complex p0 = std::polar(rho, 0.0);
    min_sep = std::min(min_sep, pseudo_distance(p0, std::polar(rho, step)));
    worst_half_step = std::max(worst_half_step, pseudo_distance(p0, std::polar(rho, step / 2.0)));
    outer = rho;
  }
  lat.outer_radius = outer;
  lat.min_separation = min_sep;
  // Project radially to the nearest ring, then move along it.
  lat.covering_bound = std::tanh(h / 2.0) + worst_half_step;
  if (lat.min_separation < delta / 5.0) throw PrecisionError("delta_lattice: separation invariant violated");
  if (lat.covering_bound > 5.0 * delta) throw PrecisionError("delta_lattice: covering invariant violated");
  return lat;
}

}  // namespace bergman
