#include "doctest.h"

#include <cmath>
#include <numbers>

#include "bergman/weights.hpp"

using namespace bergman;
using doctest::Approx;

namespace {
const double e = std::numbers::e;
const double pi = std::numbers::pi;
}  // namespace

TEST_CASE("densities") {
  CHECK(RadialWeight::standard(0.0).density(0.5) == Approx(1.0));
  CHECK(RadialWeight::standard(1.0).density(0.5) == Approx(0.75));
  CHECK(RadialWeight::log_weight(2.0).density(1.0 - 1.0 / e) == Approx(e / 4.0).epsilon(1e-13));
  CHECK_THROWS_AS(RadialWeight::standard(-1.0), DomainError);
  CHECK_THROWS(RadialWeight::log_weight(1.0));
  CHECK_THROWS_AS(RadialWeight::exponential(0.0), DomainError);
}

TEST_CASE("tails") {
  CHECK(RadialWeight::standard(0.0).tail(0.5) == Approx(0.5).epsilon(1e-14));
  CHECK(RadialWeight::standard(1.0).tail(0.0) == Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(RadialWeight::log_weight(2.0).tail(1.0 - 1.0 / e) == Approx(0.5).epsilon(1e-13));
  // Quadrature oracle for the exponential tail.
  const RadialWeight x = RadialWeight::exponential(1.0);
  const QuadResult q = integrate_radial([&](double r, double omr) { return x.density(r, omr); }, 0.6);
  CHECK(x.tail(0.6) == Approx(q.value).epsilon(1e-9));
}

TEST_CASE("omega star") {
  const RadialWeight w = RadialWeight::standard(0.0);
  CHECK(w.star(0.5) == Approx(0.5 * std::log(2.0) - 0.75 / 4.0).epsilon(1e-13));
  CHECK(w.star(0.5) == Approx(0.159074).epsilon(1e-5));
  double prev = w.star(0.5);
  for (int j = 2; j <= 30; ++j) {
    const double v = w.star(1.0 - std::ldexp(1.0, -j));
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  CHECK(prev < 1e-17);
  double lo = 1e300, hi = 0.0;
  for (double r = 0.5; r <= 0.999; r += 0.0005) {
    const double ratio = w.star(r) / (w.tail(r) * (1.0 - r));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 4.0);
}

TEST_CASE("moments") {
  CHECK(RadialWeight::standard(0.0).moment(3) == Approx(0.25).epsilon(1e-15));
  CHECK(RadialWeight::standard(1.0).moment(1) == Approx(0.25).epsilon(1e-14));
  const RadialWeight w = RadialWeight::standard(0.0);
  for (std::size_t n : {10u, 100u, 1000u}) {
    const double ratio = w.moment(n) / w.tail(1.0 - 1.0 / static_cast<double>(n));
    CHECK(ratio == Approx(static_cast<double>(n) / (n + 1.0)).epsilon(1e-12));
  }
  // log weight moments against direct quadrature.
  const RadialWeight l = RadialWeight::log_weight(3.0);
  for (std::size_t n : {0u, 7u, 200u}) {
    const QuadResult q = integrate_radial(
        [&](double r, double omr) { return std::pow(r, static_cast<double>(n)) * l.density(r, omr); }, 0.0);
    CHECK(l.moment(n) == Approx(q.value).epsilon(1e-9));
  }
}

TEST_CASE("box mass") {
  const RadialWeight w = RadialWeight::standard(0.0);
  CHECK(w.box_mass(0.5) == Approx(0.5 * 0.75 / (2.0 * pi)).epsilon(1e-13));
  CHECK(box_mass(w, std::polar(0.7, 0.3)) == Approx(box_mass(w, std::polar(0.7, 2.9))).epsilon(1e-15));
  double lo = 1e300, hi = 0.0;
  for (double m = 0.5; m <= 0.999; m += 0.001) {
    const double ratio = w.box_mass(m) / (w.tail(m) * (1.0 - m));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo < 2.0);
}

TEST_CASE("classifier verdicts") {
  const WeightClassReport s1 = classify(RadialWeight::standard(1.0));
  CHECK(s1.in_Dhat);
  CHECK(s1.regular);
  // \hat\omega(r) is comparable to (1 - r)^2, so the doubling ratio tends to 4.
  CHECK(s1.doubling_ratios.back() == Approx(4.0).epsilon(1e-4));

  const WeightClassReport l3 = classify(RadialWeight::log_weight(3.0));
  CHECK(l3.in_Dhat);
  CHECK_FALSE(l3.regular);

  CHECK_FALSE(classify(RadialWeight::exponential(1.0)).in_Dhat);
}

TEST_CASE("regularization") {
  const RadialWeight r0 = regularize(RadialWeight::standard(0.0));
  for (double r : {0.0, 0.3, 0.9, 0.999}) CHECK(r0.density(r) == Approx(1.0).epsilon(1e-12));

  // \hat\omega(r) = (1 - r)^2 (2 + r) / 3 for standard(1).
  const RadialWeight r1 = regularize(RadialWeight::standard(1.0));
  for (double r : {0.1, 0.5, 0.95}) CHECK(r1.density(r) == Approx((1 - r) * (2 + r) / 3.0).epsilon(1e-12));
  CHECK(classify(r1).regular);

  // For W = \hat\omega / (1 - r) with omega = log_weight(3), W (1 - r) / \hat W
  // equals 1 / log(e / (1 - r)) exactly.
  const RadialGrid grid;
  const WeightClassReport rep = classify(regularize(RadialWeight::log_weight(3.0)), grid);
  for (std::size_t i = 0; i < rep.radii.size(); i += 4) {
    const double L = 1.0 + (grid.j_min + static_cast<double>(i)) * std::log(2.0);
    CHECK(rep.regularity_ratios[i] == Approx(1.0 / L).epsilon(1e-6));
  }
}

TEST_CASE("user weights") {
  const RadialWeight u = RadialWeight::user([](double, double) { return 1.0; }, "one");
  CHECK(u.family() == WeightFamily::user);
  CHECK(u.tail(0.25) == Approx(0.75).epsilon(1e-10));
  CHECK(u.moment(4) == Approx(0.2).epsilon(1e-10));
  CHECK(std::isnan(u.parameter()));
}

TEST_CASE("bounded ratio rule") {
  RadialGrid g;
  std::vector<double> flat(20, 2.0), drifting;
  for (int i = 0; i < 20; ++i) drifting.push_back(std::exp(0.2 * i));
  CHECK(bounded_ratio_test(flat, g).bounded);
  CHECK_FALSE(bounded_ratio_test(drifting, g).bounded);
  CHECK(trailing_log_slope(drifting, 5) == Approx(0.2).epsilon(1e-12));
}
