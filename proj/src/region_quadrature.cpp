#include "bergman/region_quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

constexpr int kMaxAnglePoints = 1 << 16;

bool close_enough(double a, double b, const QuadSpec& spec) {
  return std::abs(a - b) <= std::max(spec.absolute_floor, spec.relative_tolerance * std::abs(b));
}

int initial_angle_points(double width, double omr) {
  const double n = 16.0 + 2.0 * width / std::max(omr, 1e-12);
  return static_cast<int>(std::min(n, 4096.0));
}

}  // namespace

QuadResult integrate_angle(const DiscFn& g, double r, double theta0, double width, const QuadSpec& spec,
                           int min_points) {
  if (width >= 2.0 * kPi - 1e-15) {
    // Periodic trapezoid rule; each doubling reuses the previous samples.
    int n = std::max(4, min_points);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += g(std::polar(r, theta0 + 2.0 * kPi * i / n));
    double prev = 2.0 * kPi * sum / n;
    while (2 * n <= kMaxAnglePoints) {
      for (int i = 0; i < n; ++i) sum += g(std::polar(r, theta0 + 2.0 * kPi * (i + 0.5) / n));
      n *= 2;
      const double cur = 2.0 * kPi * sum / n;
      if (close_enough(prev, cur, spec)) return {cur, std::abs(cur - prev), true};
      prev = cur;
    }
    return {prev, std::abs(prev), false};
  }
  // Composite Gauss-Legendre on the arc, doubling the panel count.
  const GaussRule& gl = gauss_legendre(16);
  auto rule = [&](int panels) {
    const double h = width / panels;
    double s = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = theta0 + h * (p + 0.5);
      for (std::size_t i = 0; i < gl.nodes.size(); ++i) s += gl.weights[i] * g(std::polar(r, mid + 0.5 * h * gl.nodes[i]));
    }
    return 0.5 * h * s;
  };
  int panels = std::max(1, min_points / 16);
  double prev = rule(panels);
  while (16 * 2 * panels <= kMaxAnglePoints) {
    panels *= 2;
    const double cur = rule(panels);
    if (close_enough(prev, cur, spec)) return {cur, std::abs(cur - prev), true};
    prev = cur;
  }
  return {prev, std::abs(prev), false};
}

static RadialFn density_of(const std::optional<RadialWeight>& w) {
  if (!w) return [](double, double) { return 1.0; };
  RadialWeight copy = *w;
  return [copy](double r, double omr) { return copy.density(r, omr); };
}

QuadResult integrate_polar(const DiscFn& g, double r0, double r1, double theta0, double width,
                           const std::optional<RadialWeight>& w, const QuadSpec& spec) {
  return integrate_polar(g, r0, r1, theta0, width, density_of(w), spec);
}

QuadResult integrate_polar(const DiscFn& g, double r0, double r1, double theta0, double width,
                           const RadialFn& weight_density, const QuadSpec& spec) {
  if (!(r0 >= 0.0 && r1 <= 1.0 && r0 <= r1)) throw DomainError("integrate_polar: need 0 <= r0 <= r1 <= 1");
  bool angles_ok = true;
  QuadSpec angle_spec = spec;
  angle_spec.relative_tolerance = spec.relative_tolerance * 0.1;
  angle_spec.absolute_floor = 0.0;
  RadialFn f = [&](double r, double omr) {
    const double density = weight_density(r, omr);
    if (density == 0.0 || r == 0.0) return 0.0;
    // Radii that round to 1 are nudged inside so that g only sees disc points.
    const double rr = r < 1.0 ? r : std::nextafter(1.0, 0.0);
    QuadResult a = integrate_angle(g, rr, theta0, width, angle_spec, initial_angle_points(width, omr));
    angles_ok = angles_ok && a.converged;
    return density * r * a.value / kPi;
  };
  QuadResult q = integrate_radial(f, r0, r1, spec);
  q.converged = q.converged && angles_ok;
  return q;
}

QuadResult integrate_region(const DiscFn& g, const Region& region, const std::optional<RadialWeight>& w,
                            const QuadSpec& spec) {
  return integrate_region(g, region, density_of(w), spec);
}

QuadResult integrate_region(const DiscFn& g, const Region& region, const RadialFn& w, const QuadSpec& spec) {
  spec.validate();
  struct Visitor {
    const DiscFn& g;
    const RadialFn& w;
    const QuadSpec& spec;
    QuadResult operator()(const FullDisc&) const { return integrate_polar(g, 0.0, 1.0, 0.0, 2.0 * kPi, w, spec); }
    QuadResult operator()(const Annulus& a) const {
      return integrate_polar(g, a.r_inner, a.r_outer, 0.0, 2.0 * kPi, w, spec);
    }
    QuadResult operator()(const CarlesonSquare& s) const {
      return integrate_polar(g, s.inner_radius, 1.0, s.arc.begin_angle(), s.arc.width, w, spec);
    }
    QuadResult operator()(const DyadicRectangle& d) const {
      return integrate_polar(g, d.r_inner, d.r_outer, d.theta_begin, d.theta_end - d.theta_begin, w, spec);
    }
    QuadResult operator()(const PseudoDisc& d) const {
      // Euclidean polar coordinates about the Euclidean center.
      const Complex c = d.euclid_center;
      const double radius = d.euclid_radius;
      bool angles_ok = true;
      QuadSpec angle_spec = spec;
      angle_spec.relative_tolerance = spec.relative_tolerance * 0.1;
      angle_spec.absolute_floor = 0.0;
      auto shifted = [&](Complex u) {
        const Complex z = c + u;
        const double m = std::abs(z);
        if (!(m < 1.0)) return 0.0;
        const double density = w(m, 1.0 - m);
        return density == 0.0 ? 0.0 : g(z) * density;
      };
      const double gap = 1.0 - std::abs(c) - radius;
      RealFn f = [&](double rho) {
        if (rho == 0.0) return 0.0;
        const double omr = std::max(gap + (radius - rho), 1e-300);
        QuadResult a = integrate_angle(shifted, rho, 0.0, 2.0 * kPi, angle_spec, initial_angle_points(kPi * rho, omr));
        angles_ok = angles_ok && a.converged;
        return rho * a.value / kPi;
      };
      QuadResult q = integrate_interval(f, 0.0, radius, spec);
      q.converged = q.converged && angles_ok;
      return q;
    }
  };
  return std::visit(Visitor{g, w, spec}, region);
}

QuadResult pseudo_disc_radial_integral(const RadialFn& v, double rho, double omr, double r, const QuadSpec& spec) {
  if (!(rho >= 0.0 && rho <= 1.0 && omr > 0.0)) throw DomainError("pseudo-disc center must lie in the disc");
  if (!(r > 0.0 && r < 1.0)) throw DomainError("pseudo-disc radius must lie in (0, 1)");
  const double one_minus_rr = (1.0 - r) + r * omr;  // 1 - r rho
  const double denom = one_minus_rr * (1.0 + r * rho);
  const double c = rho * (1.0 - r * r) / denom;
  const double R = r * omr * (1.0 + rho) / denom;
  const double gap = omr * (1.0 - r) / (1.0 + r * rho);  // 1 - c - R
  QuadResult total;
  // Circles fully inside the disc when it contains the origin.
  double psi0 = 0.0;
  if (rho < r) {
    const double inner = (r - rho) / one_minus_rr;
    RealFn full = [&](double s) {
      const double d = v(s, 1.0 - s);
      return d == 0.0 ? 0.0 : 2.0 * d * s;
    };
    total += integrate_interval(full, 0.0, inner, spec);
    if (c == 0.0) return total;
    psi0 = std::acos(std::clamp((2.0 * c - R) / R, -1.0, 1.0));
  }
  // s = c - R cos(psi); the circle of radius s meets the disc in an arc of
  // half-angle phi with sin(phi / 2) = R sin(psi) / (2 sqrt(s c)).
  RealFn arc = [&](double psi) {
    const double sin_psi = std::sin(psi);
    const double half = std::cos(0.5 * psi);
    const double s = c - R * std::cos(psi);
    if (!(s > 0.0) || sin_psi <= 0.0) return 0.0;
    const double one_minus_s = gap + 2.0 * R * half * half;
    const double d = v(s, one_minus_s);
    if (d == 0.0) return 0.0;
    const double phi = 2.0 * std::asin(std::min(1.0, R * sin_psi / (2.0 * std::sqrt(s * c))));
    return 2.0 * phi / kPi * d * s * R * sin_psi;
  };
  total += integrate_interval(arc, psi0, kPi, spec);
  return total;
}

double weighted_region_mass(const Region& region, const RadialWeight& w, const QuadSpec& spec) {
  struct Visitor {
    const RadialWeight& w;
    const QuadSpec& spec;
    double ring(double r0, double r1) const {
      // 2 \int_{r0}^{r1} omega(s) s ds
      const double outer = r1 >= 1.0 ? 0.0 : w.tail_first_moment(r1);
      return 2.0 * (w.tail_first_moment(r0) - outer);
    }
    double operator()(const FullDisc&) const { return ring(0.0, 1.0); }
    double operator()(const Annulus& a) const { return ring(a.r_inner, a.r_outer); }
    double operator()(const CarlesonSquare& s) const { return s.arc.width / (2.0 * kPi) * ring(s.inner_radius, 1.0); }
    double operator()(const DyadicRectangle& d) const {
      return (d.theta_end - d.theta_begin) / (2.0 * kPi) * ring(d.r_inner, d.r_outer);
    }
    double operator()(const PseudoDisc& d) const {
      const double rho = std::abs(d.center);
      return pseudo_disc_radial_integral([this](double r, double omr) { return w.density(r, omr); }, rho, 1.0 - rho,
                                         d.radius, spec)
          .value;
    }
  };
  return std::visit(Visitor{w, spec}, region);
}

}  // namespace bergman
