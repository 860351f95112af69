#pragma once

#include <functional>
#include <optional>

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

using DiscFn = std::function<double(Complex)>;

// Integral of g over the angular range [theta0, theta0 + width] at fixed
// radius r. Full circles use the periodic trapezoid rule with doubling;
// arcs use Gauss-Legendre with doubling. `min_points` sets the starting
// resolution.
QuadResult integrate_angle(const DiscFn& g, double r, double theta0, double width, const QuadSpec& spec,
                           int min_points = 16);

// \int_{r0}^{r1} \int_{theta0}^{theta0+width} g(r e^{i theta}) omega(r) r dtheta dr / pi.
// r1 = 1 integrates up to the boundary through the log map.
QuadResult integrate_polar(const DiscFn& g, double r0, double r1, double theta0, double width,
                           const std::optional<RadialWeight>& w, const QuadSpec& spec = {});

// Same with a radial density given as f(r, 1 - r).
QuadResult integrate_polar(const DiscFn& g, double r0, double r1, double theta0, double width,
                           const RadialFn& density, const QuadSpec& spec = {});

// \int_region g omega dA with dA = dx dy / pi. Without a weight, omega = 1.
QuadResult integrate_region(const DiscFn& g, const Region& region, const std::optional<RadialWeight>& w = std::nullopt,
                            const QuadSpec& spec = {});
QuadResult integrate_region(const DiscFn& g, const Region& region, const RadialFn& density, const QuadSpec& spec = {});

// \int_{Delta(z, r)} v dA for a radial density v, with |z| = rho and
// 1 - rho passed separately. Parametrized by the circles |zeta| = s so that
// 1 - s stays accurate for pseudo-discs close to the boundary.
QuadResult pseudo_disc_radial_integral(const RadialFn& v, double rho, double one_minus_rho, double r,
                                       const QuadSpec& spec = {});

// omega-mass of a region in closed form where one exists (all built-in
// region kinds; pseudo-discs use the one-dimensional radial form).
double weighted_region_mass(const Region& region, const RadialWeight& w, const QuadSpec& spec = {});

}  // namespace bergman
