#include "doctest.h"

#include <cmath>
#include <vector>

#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

using namespace bergman;
using doctest::Approx;

TEST_CASE("radial integrals with closed forms") {
  CHECK(integrate_radial([](double, double) { return 1.0; }, 0.0).value == Approx(1.0).epsilon(1e-12));
  // (1 - r)^{-1/2} has antiderivative -2 (1 - r)^{1/2}.
  const QuadResult s = integrate_radial([](double, double omr) { return 1.0 / std::sqrt(omr); }, 0.0);
  CHECK(s.converged);
  CHECK(s.value == Approx(2.0).epsilon(1e-9));
  const RadialWeight w = RadialWeight::log_weight(3.0);
  const QuadResult l = integrate_radial([&](double r, double omr) { return w.density(r, omr); }, 0.0);
  CHECK(l.value == Approx(0.5).epsilon(1e-9));
}

TEST_CASE("interval integrals") {
  CHECK(integrate_interval([](double x) { return std::sin(x); }, 0.0, std::acos(-1.0)).value == Approx(2.0).epsilon(1e-12));
  const QuadResult r = integrate_interval([](double x) { return std::sqrt(x); }, 0.0, 1.0);
  CHECK(r.value == Approx(2.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("Gauss-Legendre rules are exact up to degree 2n - 1") {
  const GaussRule& g = gauss_legendre(10);
  double sum = 0.0, x18 = 0.0;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    sum += g.weights[i];
    x18 += g.weights[i] * std::pow(g.nodes[i], 18);
  }
  CHECK(sum == Approx(2.0).epsilon(1e-14));
  CHECK(x18 == Approx(2.0 / 19.0).epsilon(1e-13));
}

TEST_CASE("panel interpolant reproduces a smooth function") {
  PanelInterpolant p([](double t) { return std::exp(-t) * std::cos(t); }, 0.0, 8.0, 0.5, 16);
  double worst = 0.0;
  for (double t = 0.0; t < 8.0; t += 0.0137) worst = std::max(worst, std::abs(p(t) - std::exp(-t) * std::cos(t)));
  CHECK(worst < 1e-13);
  CHECK(p.covers(7.9));
  CHECK_FALSE(p.covers(8.0));
}

TEST_CASE("trail classification") {
  std::vector<double> geometric, growing, constant;
  double acc = 0.0;
  for (int j = 0; j < 14; ++j) {
    acc += std::pow(0.5, j);
    geometric.push_back(acc);
    growing.push_back(std::pow(1.1, j));
    constant.push_back(3.0);
  }
  CHECK(classify_trail(geometric) == TrailVerdict::converging);
  CHECK(classify_trail(growing) == TrailVerdict::diverging);
  CHECK(classify_trail(constant) == TrailVerdict::converging);
  // 3% growth per level: neither rule applies.
  std::vector<double> slow;
  for (int j = 0; j < 14; ++j) slow.push_back(std::pow(1.03, j));
  CHECK(classify_trail(slow) == TrailVerdict::undetermined);
  const std::vector<double> steps = relative_steps(std::vector<double>{1.0, 2.0, 4.0});
  REQUIRE(steps.size() == 2);
  CHECK(steps[0] == Approx(0.5));
  CHECK(steps[1] == Approx(0.5));
}

TEST_CASE("QuadSpec validation") {
  QuadSpec q;
  q.relative_tolerance = -1.0;
  CHECK_THROWS(q.validate());
}
