#include "doctest.h"

#include <cmath>
#include <random>

#include "bergman/geometry.hpp"

using namespace bergman;
using doctest::Approx;

TEST_CASE("pseudo-distance") {
  CHECK(pseudo_distance(Complex(0.3, 0.4), Complex(0.3, 0.4)) == Approx(0.0));
  CHECK(pseudo_distance(0.0, Complex(0.3, -0.6)) == Approx(std::abs(Complex(0.3, -0.6))));
  CHECK(pseudo_distance(0.5, 0.8) == Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Mobius maps are involutive isometries") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> rad(0.0, 0.999), ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 200; ++i) {
    const Complex a = std::polar(rad(rng), ang(rng)), z = std::polar(rad(rng), ang(rng)), w = std::polar(rad(rng), ang(rng));
    CHECK(std::abs(mobius(a, mobius(a, z)) - z) < 1e-10);
    CHECK(pseudo_distance(mobius(a, z), mobius(a, w)) == Approx(pseudo_distance(z, w)).epsilon(1e-9));
  }
}

TEST_CASE("pseudo-discs") {
  const PseudoDisc d0 = pseudo_disc(0.0, 0.3);
  CHECK(std::abs(d0.euclid_center) < 1e-15);
  CHECK(d0.euclid_radius == Approx(0.3));
  const PseudoDisc d = pseudo_disc(0.5, 0.5);
  CHECK(d.euclid_center.real() == Approx(0.4).epsilon(1e-14));
  CHECK(d.euclid_radius == Approx(0.4).epsilon(1e-14));
  for (int k = 0; k < 32; ++k) {
    const Complex b = d.euclid_center + std::polar(d.euclid_radius, 2.0 * kPi * k / 32.0);
    CHECK(pseudo_distance(0.5, b) == Approx(0.5).epsilon(1e-12));
  }
  // Euclidean area comparable to (1 - |a|)^2.
  double lo = 1e300, hi = 0.0;
  for (double m = 0.0; m <= 0.999; m += 0.001) {
    const double ratio = region_area(pseudo_disc(m, 0.4)) / ((1 - m) * (1 - m));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(lo > 0.1);
  CHECK(hi < 1.0);
}

TEST_CASE("Carleson squares and boundary points") {
  const Arc i = interval_of(0.5);
  CHECK(i.width == Approx(0.5));
  CHECK(carleson_square(0.5).inner_radius == Approx(0.5));
  const Arc j = interval_of(std::polar(0.9, kPi));
  CHECK(j.width == Approx(0.1));
  CHECK(j.center_angle == Approx(kPi));
  CHECK_THROWS_AS(interval_of(0.0), DomainError);

  CHECK(std::abs(boundary_point(0.5, 1.0) - 0.5) < 1e-15);
  CHECK(std::abs(boundary_point(0.5, 0.5) - 0.75) < 1e-15);
  const Complex a = std::polar(0.6, 1.2);
  CHECK(std::abs(boundary_point(a, 1e-6) - a / std::abs(a)) < 1e-5);
  const CarlesonSquare s = carleson_square(a);
  for (double delta : {1.0, 0.5, 0.1, 1e-3, 1e-9}) CHECK(s.contains(boundary_point(a, delta)));
}

TEST_CASE("dyadic rectangles") {
  const DyadicRectangle r = dyadic_rectangle(1, 0);
  CHECK(r.r_inner == Approx(0.5));
  CHECK(r.r_outer == Approx(0.75));
  CHECK(r.theta_begin == Approx(0.0));
  CHECK(r.theta_end == Approx(kPi));
  CHECK(std::abs(r.center - Complex(0.0, 0.5)) < 1e-15);

  double area = 0.0;
  for (const DyadicRectangle& d : dyadic_rectangles(8)) area += region_area(d);
  CHECK(area == Approx(std::pow(1.0 - std::ldexp(1.0, -9), 2)).epsilon(1e-13));

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> rad(0.5, 0.9999), ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 500; ++i) {
    const Complex z = std::polar(rad(rng), ang(rng));
    const DyadicRectangle c = dyadic_cell(z);
    CHECK(c.contains(z));
    int owners = 0;
    for (std::int64_t k = 0; k < (std::int64_t{1} << c.level); ++k) owners += dyadic_rectangle(c.level, k).contains(z) ? 1 : 0;
    CHECK(owners == 1);
  }
}

TEST_CASE("delta-lattices") {
  const double delta = 0.25;
  const Lattice L = delta_lattice(delta, 6);
  CHECK(L.min_separation >= delta / 5.0);
  // Brute-force covering check inside the outermost ring.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int tested = 0;
  double worst = 0.0;
  while (tested < 10000) {
    const Complex z(u(rng), u(rng));
    if (std::abs(z) >= L.outer_radius) continue;
    ++tested;
    double best = 1.0;
    for (const Complex& p : L.points) best = std::min(best, pseudo_distance(z, p));
    worst = std::max(worst, best);
  }
  CHECK(worst <= 5.0 * delta);
  CHECK(worst <= L.covering_bound + 1e-12);

  // Points inside |z| < 1 - 2^{-j} grow like 4^j.
  std::vector<double> scaled;
  for (int j = 2; j <= 5; ++j) {
    const double R = 1.0 - std::ldexp(1.0, -j);
    std::size_t n = 0;
    for (const Complex& p : L.points) n += std::abs(p) < R ? 1 : 0;
    scaled.push_back(static_cast<double>(n) * delta * delta / std::pow(4.0, j));
  }
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  CHECK(*hi / *lo < 4.0);
}

TEST_CASE("region helpers") {
  CHECK(region_area(Region{FullDisc{}}) == Approx(1.0));
  CHECK(region_area(Region{Annulus{0.5, 1.0}}) == Approx(0.75));
  CHECK(region_contains(Region{Annulus{0.5, 1.0}}, 0.7));
  CHECK_FALSE(region_contains(Region{Annulus{0.5, 1.0}}, 0.2));
  CHECK(wrap_angle(-0.5) == Approx(2.0 * kPi - 0.5));
}
