#include "doctest.h"

#include <cmath>

#include "bergman/geometry.hpp"
#include "bergman/measures.hpp"
#include "bergman/region_quadrature.hpp"
#include "bergman/symbol.hpp"

using namespace bergman;
using doctest::Approx;

namespace {
const double kBox05 = 0.5 * 0.75 / (2.0 * kPi);  // omega(S(0.5)) for standard(0)
}

TEST_CASE("region integrals") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  auto one = [](Complex) { return 1.0; };
  CHECK(integrate_region(one, Region{FullDisc{}}, s0).value == Approx(1.0).epsilon(1e-10));
  CHECK(integrate_region(one, Region{carleson_square(0.5)}, s0).value == Approx(kBox05).epsilon(1e-10));
  CHECK(integrate_region([](Complex z) { return std::norm(z); }, Region{FullDisc{}}, s0).value ==
        Approx(2.0 * s0.moment(3)).epsilon(1e-10));
  CHECK(weighted_region_mass(Region{carleson_square(0.5)}, s0) == Approx(kBox05).epsilon(1e-12));
}

TEST_CASE("measure masses") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  CHECK(Measure::point_mass(0.0).mass(Region{carleson_square(Complex(0.3, 0.1))}).value == 0.0);
  CHECK(Measure::point_mass(0.0).mass(Region{FullDisc{}}).value == 1.0);
  CHECK(Measure::weighted(s0).mass(Region{FullDisc{}}).value == Approx(1.0).epsilon(1e-10));
  const Measure pb = Measure::pullback(Symbol::identity(), s0);
  CHECK(pb.mass(Region{carleson_square(0.5)}).value == Approx(kBox05).epsilon(1e-6));
  const Measure scaled = Measure::weighted(s0).scaled(3.0);
  CHECK(scaled.mass(Region{Annulus{0.0, 0.5}}).value == Approx(0.75).epsilon(1e-10));
}

TEST_CASE("averaging functions") {
  const RadialWeight s0 = RadialWeight::standard(0.0), l3 = RadialWeight::log_weight(3.0);
  for (double m : {0.0, 0.5, 0.9, 0.999}) {
    CHECK(mu_hat_r(Measure::weighted(l3), l3, std::polar(m, 0.4), 0.3) == Approx(1.0).epsilon(1e-8));
    CHECK(mu_hat_r(Measure::weighted(l3, 2.0), l3, std::polar(m, 0.4), 0.3) == Approx(2.0).epsilon(1e-8));
  }
  // Delta(0.5, 0.5) is the disc of center 0.4 and radius 0.4; it contains 0.4.
  CHECK(mu_hat_r(Measure::point_mass(0.4), s0, 0.5, 0.5) == Approx(6.25).epsilon(1e-10));
}

TEST_CASE("Carleson constants") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  CenterGrid grid;
  grid.j_max = 10;
  const CarlesonConstant c = carleson_constant(Measure::weighted(s0), s0, 1.0, grid);
  CHECK(c.sup_value == Approx(1.0).epsilon(1e-8));
  for (double t : c.vanishing_tail) CHECK(t == Approx(1.0).epsilon(1e-8));

  grid.extra_centers = {0.9};
  const CarlesonConstant d = carleson_constant(Measure::point_mass(0.9), s0, 1.0, grid);
  CHECK(d.sup_value == Approx(1.0 / s0.box_mass(0.9)).epsilon(1e-10));
  CHECK(d.sup_value == Approx(330.7).epsilon(1e-3));

  // Density (1 - |z|)^s omega: the ratio behaves like (1 - |a|)^s.
  const Measure mu = Measure::weighted_by(s0, [](double, double omr) { return std::sqrt(omr); }, "sqrt(1-r)");
  CenterGrid g2;
  g2.j_max = 12;
  const CarlesonConstant e = carleson_constant(mu, s0, 1.0, g2);
  const std::size_t n = e.vanishing_tail.size();
  CHECK(e.vanishing_tail[n - 1] < 0.05);
  CHECK(e.vanishing_tail[n - 1] / e.vanishing_tail[n - 3] == Approx(0.5).epsilon(0.1));
}

TEST_CASE("grid centers") {
  CenterGrid g;
  g.j_max = 4;
  g.max_angle_bits = 2;
  const auto c = grid_centers(g, false);
  CHECK(c.size() == 2 + 4 + 4 + 4);
  CHECK(grid_centers(g, true).size() == 4);
}
