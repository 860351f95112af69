#include "doctest.h"

#include <cmath>

#include "bergman/toeplitz.hpp"

using namespace bergman;
using doctest::Approx;

TEST_CASE("Toeplitz matrices with closed forms") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  for (const RadialWeight& w : {s0, RadialWeight::log_weight(2.0), RadialWeight::exponential(1.0)}) {
    const OperatorMatrix T = toeplitz_matrix(Measure::weighted(w), w, 64);
    CHECK(T.entries == Eigen::MatrixXcd::Identity(64, 64));
  }
  const OperatorMatrix D = toeplitz_matrix(Measure::point_mass(0.0), s0, 16);
  CHECK(std::abs(D.entries(0, 0) - 1.0) < 1e-15);
  CHECK((D.entries.array().abs() > 1e-15).count() == 1);
}

TEST_CASE("Schatten norms") {
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(60, 60);
  for (int n = 0; n < 60; ++n) d(n, n) = std::ldexp(1.0, -n);
  OperatorMatrix T;
  T.entries = d;
  CHECK(schatten_norm(T, 1.0).value == Approx(2.0).epsilon(1e-12));

  const RadialWeight s0 = RadialWeight::standard(0.0);
  const OperatorMatrix R = toeplitz_matrix(Measure::point_mass(0.5), s0, 128);
  for (double p : {0.5, 1.0, 2.0, 4.0}) CHECK(schatten_norm(R, p).value == Approx(16.0 / 9.0).epsilon(0.01));

  // omega dA on |z| < 1/2 is diagonal with entries 4^{-(n+1)}.
  const OperatorMatrix H = toeplitz_matrix(Measure::weighted(s0, 1.0, 0.5), s0, 64);
  CHECK(schatten_norm(H, 1.0).value == Approx(1.0 / 3.0).epsilon(1e-10));
  CHECK(std::abs(H.entries(3, 3) - std::pow(0.25, 4)) < 1e-14);
}

TEST_CASE("trace check") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const TraceCheck a = trace_check(Measure::point_mass(0.0), s0, 64);
  CHECK(a.trace_matrix == Approx(1.0).epsilon(1e-12));
  CHECK(a.trace_integral == Approx(1.0).epsilon(1e-10));
  const TraceCheck b = trace_check(Measure::point_mass(0.5), s0, 128);
  CHECK(b.trace_matrix == Approx(16.0 / 9.0).epsilon(1e-4));
  CHECK(b.trace_integral == Approx(16.0 / 9.0).epsilon(1e-4));
  const TraceCheck c = trace_check(Measure::point_mass(0.0, 2.5), s0, 64);
  CHECK(c.trace_matrix == Approx(2.5).epsilon(1e-12));
  CHECK(c.trace_integral == Approx(2.5).epsilon(1e-10));
}

TEST_CASE("Berezin transform") {
  const RadialWeight s0 = RadialWeight::standard(0.0), l3 = RadialWeight::log_weight(3.0);
  CHECK(berezin(Measure::point_mass(0.0), s0, 0.5) == Approx(0.5625).epsilon(1e-12));
  CenterGrid grid;
  grid.j_max = 10;
  const BerezinField f = berezin_field(Measure::weighted(l3), l3, grid);
  for (double v : f.values) CHECK(v == Approx(1.0).epsilon(1e-8));

  const OperatorMatrix I = toeplitz_matrix(Measure::weighted(s0), s0, 64);
  CHECK(berezin_of_matrix(I, s0, 0.3) == Approx(1.0).epsilon(1e-10));
  const OperatorMatrix T1 = toeplitz_matrix(Measure::point_mass(0.0), s0, 64);
  CHECK(berezin_of_matrix(T1, s0, 0.5) == Approx(0.5625).epsilon(1e-6));
  const OperatorMatrix T2 = toeplitz_matrix(Measure::point_mass(Complex(0.2, 0.1)), s0, 64);
  const double sum = berezin_of_matrix(T1 + T2, s0, 0.4);
  CHECK(sum == Approx(berezin_of_matrix(T1, s0, 0.4) + berezin_of_matrix(T2, s0, 0.4)).epsilon(1e-12));
  CHECK_THROWS_AS(berezin_of_matrix(T1, s0, 0.99), PrecisionError);
}

TEST_CASE("Berezin transform of the log-weight example density") {
  // v = (1 - r)^{-1/2} L^{-5/4} against log_weight(2), L = log(e / (1 - r)):
  // the transform is comparable to (1 - r)^{1/2} L^{-1/4}.
  const RadialWeight w = RadialWeight::log_weight(2.0);
  const Measure mu = Measure::radial_density(
      [](double, double omr) { return std::pow(omr, -0.5) * std::pow(1.0 - std::log(omr), -1.25); }, "v");
  double lo = 1e300, hi = 0.0;
  for (double t : {0.1, 0.05, 0.01, 1e-3, 1e-4, std::ldexp(1.0, -14)}) {
    const double ratio = berezin(mu, w, 1.0 - t) / (std::sqrt(t) * std::pow(1.0 - std::log(t), -0.25));
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  CHECK(hi / lo <= 50.0);
}

TEST_CASE("criteria report for omega dA") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  CenterGrid grid;
  grid.j_max = 10;
  const CriterionReport r = criteria_report_pq(Measure::weighted(s0), s0, ExponentPair(2.0, 2.0), 0.5, grid);
  CHECK(r.berezin_sup.value == Approx(1.0).epsilon(1e-8));
  CHECK(r.carleson_sup.value == Approx(1.0).epsilon(1e-8));
  CHECK(r.bounded_verdict == "bounded");
  CHECK(r.compact_verdict == "not compact");
  CHECK(r.dual_verdict == "n/a");
}

TEST_CASE("exponent pairs") {
  const ExponentPair pq(3.0, 2.0);
  CHECK(pq.schatten_dual_exponent() == Approx(6.0));
  CHECK(pq.carleson_exponent() == Approx(1.0 / 3.0 + 0.5));
  CHECK_THROWS(ExponentPair(2.0, 3.0).schatten_dual_exponent());
}

TEST_CASE("dyadic Schatten sum of a point mass") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  SchattenReportOptions opt;
  opt.n_max_dyadic = 8;
  opt.j_max = 8;
  const SchattenReport r = schatten_report(Measure::point_mass(0.5), s0, 1.0, opt);
  CHECK(r.dyadic_sum.value == Approx(1.0 / s0.star(0.5)).epsilon(1e-10));
  CHECK(r.dyadic_sum.value == Approx(6.2864).epsilon(1e-4));
}

TEST_CASE("maximal Bergman projection") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  CHECK(maximal_projection([](Complex) { return 1.0; }, s0, 0.0).value == Approx(1.0).epsilon(1e-8));
  CHECK(maximal_projection([](Complex) { return 0.0; }, s0, 0.4).value == 0.0);
}

TEST_CASE("quadratic forms and domination") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const OperatorMatrix I = toeplitz_matrix(Measure::weighted(s0), s0, 8);
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(8);
  f(2) = Complex(0.0, 2.0);
  CHECK(quadratic_form(I, f) == Approx(4.0));
  const Measure mu = Measure::weighted_by(s0, [](double, double omr) { return std::sqrt(omr); }, "sqrt(1-r)");
  const DominationCheck d = domination_check(mu, s0, 0.3, 16, 40);
  CHECK(d.violations == 0);
  CHECK(d.fitted_constant > 0.0);
  CHECK(d.max_ratio <= d.fitted_constant * (1.0 + 1e-12));
}

TEST_CASE("level integrals") {
  // \int (1 - |z|)^{-1/2} dA over the bands converges; (1 - |z|)^{-1} diverges.
  const RadialFn one = [](double, double) { return 1.0; };
  const LevelTrail a = level_integral([](double, double omr, double) { return std::pow(omr, -0.5); }, one, 14, true);
  CHECK(a.verdict == TrailVerdict::converging);
  CHECK(a.value() == Approx(8.0 / 3.0).epsilon(0.02));
  const LevelTrail b = level_integral([](double, double omr, double) { return 1.0 / omr; }, one, 14, true);
  CHECK(b.diverging());
}
