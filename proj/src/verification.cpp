#include "bergman/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "bergman/composition.hpp"
#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/measures.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Accumulates a detail string and an overall verdict.
struct Outcome {
  bool passed = true;
  std::string detail;

  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
  void require(bool ok, const std::string& s) {
    passed = passed && ok;
    note(std::string(ok ? "" : "FAIL ") + s);
  }
};

CheckResult timed(std::string id, std::string description, const std::function<Outcome()>& body) {
  CheckResult res;
  res.id = std::move(id);
  res.description = std::move(description);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = body();
    res.passed = o.passed;
    res.detail = std::move(o.detail);
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

void require_runtime(Outcome& o, double limit_seconds, std::chrono::steady_clock::time_point t0) {
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(s < limit_seconds, "runtime " + num(s) + " s < " + num(limit_seconds) + " s");
}

Measure weighted_power(const RadialWeight& w, double exponent) {
  return Measure::weighted_by(
      w, [exponent](double, double omr) { return std::pow(omr, exponent); },
      "(1-|z|)^" + num(exponent) + "*" + w.label());
}

Measure dyadic_atoms(double decay) {
  std::vector<Atom> atoms;
  for (int j = 1; j <= 40; ++j) atoms.push_back({Complex(1.0 - std::ldexp(1.0, -j), 0.0), std::pow(2.0, -decay * j)});
  return Measure::point_masses(std::move(atoms));
}

// ---------------------------------------------------------------- criteria

Outcome criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit;
  auto point = [&] { return std::polar(0.95 * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng)); };
  for (double alpha : {0.0, 1.0, 2.5}) {
    const RadialWeight w = RadialWeight::standard(alpha);
    const KernelSeries kernel(w);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      const Complex z = point(), zeta = point();
      const Complex exact = (alpha + 1.0) * std::pow(1.0 - std::conj(z) * zeta, -(2.0 + alpha));
      worst = std::max(worst, std::abs(kernel.eval(z, zeta).value - exact) / std::abs(exact));
    }
    o.require(worst < 1e-8, "standard(" + num(alpha) + ") max rel err " + num(worst));
  }
  require_runtime(o, 10.0, t0);
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const std::vector<RadialWeight> weights{RadialWeight::standard(1.0), RadialWeight::log_weight(3.0),
                                          regularize(RadialWeight::log_weight(3.0))};
  CenterGrid grid;
  grid.j_max = 12;
  // The exponential weight only enters the matrix test: its kernel series
  // needs more than 2^24 terms at depth 12.
  const RadialWeight e = RadialWeight::exponential(1.0);
  const bool exact_e = toeplitz_matrix(Measure::weighted(e), e, 128).entries == Eigen::MatrixXcd::Identity(128, 128);
  o.require(exact_e, e.label() + " T == I exactly: " + (exact_e ? "yes" : "no"));
  for (const RadialWeight& w : weights) {
    const Measure mu = Measure::weighted(w);
    const OperatorMatrix T = toeplitz_matrix(mu, w, 128);
    const bool exact = T.entries == Eigen::MatrixXcd::Identity(128, 128);
    o.require(exact, w.label() + " T == I exactly: " + (exact ? "yes" : "no"));
    BerezinField field = berezin_field(mu, w, grid);
    double worst = 0.0;
    for (double v : field.values) worst = std::max(worst, std::abs(v - 1.0));
    o.require(worst <= 1e-8, w.label() + " max |berezin - 1| " + num(worst) + " over " +
                                 std::to_string(field.values.size()) + " centers");
  }
  return o;
}

Outcome criterion_3() {
  Outcome o;
  const RadialWeight w = RadialWeight::standard(0.0);
  const Measure mu = Measure::point_mass(Complex(0.5, 0.0));
  const OperatorMatrix T = toeplitz_matrix(mu, w, 128);
  const double exact = 16.0 / 9.0;
  for (double p : {0.5, 1.0, 2.0, 4.0}) {
    const double v = schatten_norm(T, p).value;
    o.require(std::abs(v - exact) / exact < 0.01, "p=" + num(p) + " |T|_p=" + num(v));
  }
  const TraceCheck tc = trace_check(mu, w, 128);
  o.require(tc.relative_gap < 1e-4, "trace gap " + num(tc.relative_gap) + " (matrix " + num(tc.trace_matrix) +
                                        ", integral " + num(tc.trace_integral) + ")");
  return o;
}

Outcome criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const RadialWeight w = RadialWeight::standard(0.0);
  for (double c : {0.3, 0.5, 0.7}) {
    for (double p : {1.0, 2.0, 4.0}) {
      const CompositionSchatten s = schatten_composition(Symbol::polynomial({0.0, c}), w, p, 256);
      const double exact = std::pow(1.0 - std::pow(c, p), -1.0 / p);
      const double rel = std::abs(s.composition.value - exact) / exact;
      o.require(rel < 0.01, "c=" + num(c) + " p=" + num(p) + " rel err " + num(rel));
    }
  }
  require_runtime(o, 60.0, t0);
  return o;
}

Outcome criterion_5() {
  Outcome o;
  const std::vector<RadialWeight> weights{RadialWeight::standard(0.0), RadialWeight::standard(2.5),
                                          regularize(RadialWeight::log_weight(3.0))};
  for (const RadialWeight& w : weights) {
    const KernelSeries kernel(w);
    double lo = INFINITY, hi = 0.0;
    for (int j = 2; j <= 12; ++j) {
      const double r = 1.0 - std::ldexp(1.0, -j);
      const double ratio = kernel.diag(r) * w.box_mass(r);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    o.require(hi / lo <= 20.0, w.label() + " ratio in [" + num(lo) + ", " + num(hi) + "], range " + num(hi / lo));
  }
  return o;
}

struct Config6 {
  Measure mu;
  RadialWeight w;
  ExponentPair pq;
  bool bounded;
};

Outcome criterion_6() {
  Outcome o;
  const RadialWeight s0 = RadialWeight::standard(0.0), s1 = RadialWeight::standard(1.0);
  const std::vector<Config6> configs{
      {Measure::weighted(s0), s0, {2.0, 2.0}, true},
      {dyadic_atoms(2.0), s0, {2.0, 2.0}, true},
      {weighted_power(s1, 1.0), s1, {2.0, 3.0}, true},
      {weighted_power(s0, -0.5), s0, {2.0, 2.0}, false},
      {dyadic_atoms(1.0), s0, {2.0, 2.0}, false},
      {Measure::weighted(s0), s1, {2.0, 2.0}, false},
  };
  for (const Config6& c : configs) {
    const CriterionReport rep = criteria_report_pq(c.mu, c.w, c.pq, 0.5);
    const std::string expected = c.bounded ? "bounded" : "unbounded";
    o.require(rep.bounded_verdict == expected,
              c.mu.label() + " / " + c.w.label() + " (p=" + num(c.pq.p) + ", q=" + num(c.pq.q) + "): " +
                  rep.bounded_verdict + " [berezin " + to_string(rep.berezin_sup.verdict) + ", carleson " +
                  to_string(rep.carleson_sup.verdict) + "], expected " + expected);
  }
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const RadialWeight s0 = RadialWeight::standard(0.0), s1 = RadialWeight::standard(1.0);
  const std::vector<Config6> configs{
      {weighted_power(s0, 1.0), s0, {3.0, 2.0}, true},
      {Measure::weighted(s1, 1.0, 0.5), s1, {4.0, 2.0}, true},
      {weighted_power(s0, -0.5), s0, {3.0, 2.0}, false},
      {weighted_power(s1, -0.4), s1, {3.0, 2.0}, false},
  };
  for (const Config6& c : configs) {
    const std::string label = c.mu.label() + " / " + c.w.label() + " (p=" + num(c.pq.p) + ", q=" + num(c.pq.q) + ")";
    std::vector<double> ratios;
    for (double r : {0.2, 0.4}) {
      const CriterionReport rep = criteria_report_pq(c.mu, c.w, c.pq, r);
      const std::string expected = c.bounded ? "finite" : "diverging";
      o.require(rep.dual_verdict == expected, label + " r=" + num(r) + ": " + rep.dual_verdict + " [mu_hat " +
                                                  to_string(rep.mu_hat_norm->verdict) + ", berezin " +
                                                  to_string(rep.berezin_norm->verdict) + "], expected " + expected);
      if (rep.norm_ratio) ratios.push_back(*rep.norm_ratio);
    }
    if (c.bounded) {
      const bool have = ratios.size() == 2;
      const double range = have ? std::max(ratios[0], ratios[1]) / std::min(ratios[0], ratios[1]) : INFINITY;
      o.require(have && range <= 1e3, label + " ratio range " + num(range));
    }
  }
  return o;
}

Outcome criterion_8() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  const RadialWeight w = RadialWeight::log_weight(2.0);
  const double p = 2.0, beta = 0.25, alpha = 2.0;
  // v = (1-r)^{-1+1/p} (log(e/(1-r)))^{1-alpha-beta}
  const Measure mu = Measure::radial_density(
      [=](double, double omr) { return std::pow(omr, -1.0 + 1.0 / p) * std::pow(1.0 - std::log(omr), 1.0 - alpha - beta); },
      "counterexample_p2");
  SchattenReportOptions opt;
  opt.j_max = 14;
  const SchattenReport rep = schatten_report(mu, w, p, opt);
  const auto& b = rep.berezin_integral.trail;
  const double step = b.size() >= 2 ? (b.back() - b[b.size() - 2]) / b.back() : INFINITY;
  o.require(step < 0.01, "Berezin L^2_{omega/omega*} last relative step " + num(step) + " at j=14 (partial " +
                             num(b.back()) + ")");
  o.require(rep.pseudo_integral.verdict == TrailVerdict::diverging,
            "pseudo-disc integral " + std::string(to_string(rep.pseudo_integral.verdict)) + " (partial " +
                num(rep.pseudo_integral.value) + ")");
  require_runtime(o, 300.0, t0);
  return o;
}

Outcome criterion_9() {
  Outcome o;
  const RadialWeight w = RadialWeight::log_weight(3.0);
  const double alpha = 3.0, beta = 0.5;
  const Measure mu = Measure::radial_density(
      [=](double, double omr) { return std::pow(1.0 - std::log(omr), -beta - alpha); }, "counterexample_trace");
  SchattenReportOptions opt;
  opt.j_max = 14;
  const SchattenReport rep = schatten_report(mu, w, 1.0, opt);
  o.require(rep.berezin_integral.finite(), "Berezin L^1_{omega/omega*} " +
                                               std::string(to_string(rep.berezin_integral.verdict)) + " (partial " +
                                               num(rep.berezin_integral.value) + ")");
  const CriterionQuantity h = berezin_hyperbolic_integral(mu, w, 14);
  o.require(h.verdict == TrailVerdict::diverging,
            "Berezin L^1(dA/(1-|z|)^2) " + std::string(to_string(h.verdict)) + " (partial " + num(h.value) + ")");
  return o;
}

Outcome criterion_10() {
  Outcome o;
  const RadialWeight w = RadialWeight::standard(0.0);
  std::mt19937_64 rng(99);
  double parseval = 0.0, adjoint = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Symbol phi = random_polynomial_symbol(1 + i % 3, rng);
    parseval = std::max(parseval, parseval_gap(phi, w, 64));
    adjoint = std::max(adjoint, adjoint_identity(phi, w, 64, 20, 0.6, 100u + static_cast<unsigned>(i)).max_error);
  }
  o.require(parseval < 1e-6, "max ||C^H C - T_pullback||_max " + num(parseval));
  o.require(adjoint < 1e-6, "adjoint identity max error " + num(adjoint));
  return o;
}

Outcome criterion_11() {
  Outcome o;
  auto verdict = [](const WeightClassReport& r) {
    return std::string("Dhat=") + (r.in_Dhat ? "1" : "0") + " regular=" + (r.regular ? "1" : "0");
  };
  for (double a : {0.0, 1.0, 2.5}) {
    const WeightClassReport r = classify(RadialWeight::standard(a));
    o.require(r.in_Dhat && r.regular, "standard(" + num(a) + ") " + verdict(r));
  }
  for (double a : {2.0, 3.0}) {
    const WeightClassReport r = classify(RadialWeight::log_weight(a));
    o.require(r.in_Dhat && !r.regular, "log(" + num(a) + ") " + verdict(r));
  }
  const WeightClassReport e = classify(RadialWeight::exponential(1.0));
  o.require(!e.in_Dhat, "exponential(1) " + verdict(e));
  const WeightClassReport g = classify(regularize(RadialWeight::log_weight(3.0)));
  o.require(g.regular, "regularize(log(3)) " + verdict(g) + " (regularity slope " + num(g.regularity_test.trend_slope) +
                           ", range [" + num(g.regularity_min) + ", " + num(g.regularity_max) + "])");
  return o;
}

Outcome criterion_12() {
  Outcome o;
  const RadialWeight s0 = RadialWeight::standard(0.0), s1 = RadialWeight::standard(1.0);
  const std::vector<std::pair<Measure, RadialWeight>> configs{{weighted_power(s0, 0.5), s0},
                                                              {Measure::weighted(s1, 1.0, 0.5), s1}};
  for (const auto& [mu, w] : configs) {
    const DominationCheck d = domination_check(mu, w, 0.3, 32, 100);
    o.require(d.violations == 0, mu.label() + ": C=" + num(d.fitted_constant) + " max ratio " + num(d.max_ratio) +
                                     ", violations " + std::to_string(d.violations) + "/" + std::to_string(d.vectors));
  }
  return o;
}

const char* criterion_description(int k) {
  switch (k) {
    case 1: return "kernel series matches the standard-weight closed form";
    case 2: return "Toeplitz matrix of omega dA is the identity; its Berezin transform is 1";
    case 3: return "Schatten norms and trace of the rank-one Toeplitz operator of delta_0.5";
    case 4: return "Schatten norms of diagonal composition operators";
    case 5: return "kernel norm times box mass stays in a bounded bracket";
    case 6: return "Berezin and Carleson quantities agree on boundedness (q >= p)";
    case 7: return "L^s norms of mu_hat_r and the Berezin transform agree (q < p)";
    case 8: return "Berezin integral converges while the pseudo-disc integral diverges (log weight, p = 2)";
    case 9: return "trace-class Berezin integral converges while the hyperbolic one diverges (log weight)";
    case 10: return "Parseval and adjoint identities for composition operators";
    case 11: return "weight classifier truth table";
    case 12: return "quadratic-form domination by the averaged measure";
  }
  return "";
}

// ---------------------------------------------------------- module checks

std::vector<CheckResult> kernel_checks() {
  std::vector<CheckResult> out;
  out.push_back(timed("kernels.standard_oracle", "B_z(zeta) for standard(0) at z = zeta = 0.5 equals 16/9", [] {
    Outcome o;
    const double v = kernel_eval(RadialWeight::standard(0.0), 0.5, 0.5).value.real();
    o.require(std::abs(v - 16.0 / 9.0) < 1e-12, "value " + num(v));
    return o;
  }));
  out.push_back(timed("kernels.reproducing", "<B_z, B_zeta> equals B_z(zeta) through the moment series", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::log_weight(3.0);
    const KernelSeries k(w);
    const Complex z(0.3, 0.4), zeta(-0.5, 0.2);
    const std::vector<Complex> a = k.basis_coefficients(z, 400), b = k.basis_coefficients(zeta, 400);
    Complex inner(0.0, 0.0);
    for (std::size_t n = 0; n < a.size(); ++n) inner += b[n] * std::conj(a[n]);
    const Complex direct = k.eval(z, zeta).value;
    o.require(std::abs(inner - direct) < 1e-10 * std::abs(direct), "gap " + num(std::abs(inner - direct)));
    return o;
  }));
  return out;
}

std::vector<CheckResult> weight_checks() {
  std::vector<CheckResult> out;
  out.push_back(timed("weights.moment_closed_form", "omega_1 of standard(1) equals 1/4", [] {
    Outcome o;
    const double v = RadialWeight::standard(1.0).moment(1);
    o.require(std::abs(v - 0.25) < 1e-13, "omega_1 " + num(v));
    return o;
  }));
  out.push_back(timed("weights.star_closed_form", "omega_star(1/2) for standard(0)", [] {
    Outcome o;
    const double exact = 0.5 * std::log(2.0) - 0.25 * 0.75;
    const double v = RadialWeight::standard(0.0).star(0.5);
    o.require(std::abs(v - exact) < 1e-12, "value " + num(v) + " vs " + num(exact));
    return o;
  }));
  return out;
}

std::vector<CheckResult> toeplitz_checks() {
  std::vector<CheckResult> out;
  out.push_back(timed("toeplitz.berezin_consistency", "direct and matrix Berezin transforms of delta_0 at 0.5", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::standard(0.0);
    const Measure mu = Measure::point_mass(0.0);
    const double direct = berezin(mu, w, 0.5);
    const double matrix = berezin_of_matrix(toeplitz_matrix(mu, w, 128), w, 0.5);
    o.require(std::abs(direct - 0.5625) < 1e-12 && std::abs(matrix - 0.5625) < 1e-10,
              "direct " + num(direct) + ", matrix " + num(matrix) + ", exact 0.5625");
    return o;
  }));
  out.push_back(timed("toeplitz.maximal_projection", "P+ of the constant 1 at the origin", [] {
    Outcome o;
    const double v = maximal_projection([](Complex) { return 1.0; }, RadialWeight::standard(0.0), 0.0).value;
    o.require(std::abs(v - 1.0) < 1e-8, "value " + num(v));
    return o;
  }));
  return out;
}

std::vector<CheckResult> composition_checks() {
  std::vector<CheckResult> out;
  out.push_back(timed("composition.mobius_coefficients", "Taylor coefficients of (z + 1/2)/(1 + z/2)", [] {
    Outcome o;
    const std::vector<Complex> c = power_coeffs(Symbol::blaschke({Complex(-0.5, 0.0)}), 1, 2);
    const double err = std::max({std::abs(c[0] - 0.5), std::abs(c[1] - 0.75), std::abs(c[2] + 0.375)});
    o.require(err < 1e-14, "max error " + num(err));
    return o;
  }));
  out.push_back(timed("composition.z_squared", "C_{z^2} is bounded but not compact on A^2", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::standard(0.0);
    const OperatorMatrix C = composition_matrix(Symbol::polynomial({0.0, 0.0, 1.0}), w, 128);
    double worst = 0.0;
    for (int n = 0; n < 128; ++n) {
      const double exact = std::sqrt((n + 1.0) / (2.0 * n + 1.0));
      worst = std::max(worst, std::abs(C.entries(2 * n, n) - exact));
    }
    o.require(worst < 1e-12, "entry error " + num(worst));
    const CompositionSchatten s = schatten_composition(Symbol::polynomial({0.0, 0.0, 1.0}), w, 2.0, 128);
    o.require(!s.composition.converged, std::string("Hilbert-Schmidt estimate flagged as not converged: ") +
                                            (s.composition.converged ? "no" : "yes"));
    return o;
  }));
  out.push_back(timed("composition.action_identity", "(C f)(z) = f(phi(z)) for random polynomials", [] {
    Outcome o;
    std::mt19937_64 rng(5);
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      worst = std::max(worst, action_identity(random_polynomial_symbol(3, rng), RadialWeight::standard(1.0), 64, 20).max_error);
    }
    worst = std::max(worst, action_identity(Symbol::blaschke({Complex(0.3, 0.2), Complex(-0.4, 0.1)}),
                                            RadialWeight::standard(0.0), 64, 20).max_error);
    o.require(worst < 1e-8, "max error " + num(worst));
    return o;
  }));
  out.push_back(timed("composition.counting_function", "counting functions of z^2 and cz", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::standard(0.0);
    const double a = counting_function(Symbol::polynomial({0.0, 0.0, 1.0}), w, 0.25).value;
    const double b = counting_function(Symbol::polynomial({0.0, 0.5}), w, 0.25).value;
    const double c = counting_function(Symbol::polynomial({0.0, 0.5}), w, 0.6).value;
    o.require(std::abs(a - 2.0 * w.star(0.5)) < 1e-12 && std::abs(b - w.star(0.5)) < 1e-12 && c == 0.0,
              "N_{z^2}(1/4) " + num(a) + ", N_{z/2}(1/4) " + num(b) + ", N_{z/2}(0.6) " + num(c));
    return o;
  }));
  out.push_back(timed("composition.condition_integrals", "condition integrals for cz and the identity", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::standard(0.0);
    const ConditionIntegrals cz = condition_integrals(Symbol::polynomial({0.0, 0.5}), w, 4.0);
    o.require(cz.star_ratio.finite() && cz.derivative.finite() && cz.counting.finite(),
              "cz: star-ratio " + num(cz.star_ratio.value) + ", derivative " + num(cz.derivative.value) + ", counting " + num(cz.counting.value));
    const ConditionIntegrals id = condition_integrals(Symbol::identity(), w, 4.0);
    o.require(id.star_ratio.verdict == TrailVerdict::diverging, std::string("identity: star-ratio ") + to_string(id.star_ratio.verdict));
    o.require(cz.schwarz_pick_violations == 0 && id.schwarz_pick_violations == 0, "Schwarz-Pick violations " +
                                                                                     std::to_string(cz.schwarz_pick_violations + id.schwarz_pick_violations));
    return o;
  }));
  return out;
}

std::vector<CheckResult> geometry_checks() {
  std::vector<CheckResult> out;
  out.push_back(timed("geometry.mobius", "phi_a is an involution and preserves pseudo-distance", [] {
    Outcome o;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> rad(0.0, 0.99), ang(0.0, 2.0 * kPi);
    double inv = 0.0, iso = 0.0, sym = 0.0;
    for (int i = 0; i < 500; ++i) {
      const Complex a = std::polar(rad(rng), ang(rng)), z = std::polar(rad(rng), ang(rng)), w = std::polar(rad(rng), ang(rng));
      inv = std::max(inv, std::abs(mobius(a, mobius(a, z)) - z));
      iso = std::max(iso, std::abs(pseudo_distance(mobius(a, z), mobius(a, w)) - pseudo_distance(z, w)));
      sym = std::max(sym, std::abs(pseudo_distance(a, z) - pseudo_distance(z, a)));
    }
    o.require(inv < 1e-12, "involution error " + num(inv));
    o.require(iso < 1e-10, "isometry error " + num(iso));
    o.require(sym < 1e-15, "symmetry error " + num(sym));
    return o;
  }));
  out.push_back(timed("geometry.pseudo_disc", "boundary of Delta(a, r) sits at pseudo-distance r", [] {
    Outcome o;
    double worst = 0.0;
    for (double m : {0.0, 0.5, 0.9, 0.999}) {
      for (double r : {0.1, 0.5, 0.8}) {
        const Complex a = std::polar(m, 1.0);
        const PseudoDisc d = pseudo_disc(a, r);
        for (int k = 0; k < 64; ++k) {
          const Complex b = d.euclid_center + std::polar(d.euclid_radius, 2.0 * kPi * k / 64.0);
          worst = std::max(worst, std::abs(pseudo_distance(a, b) - r));
        }
      }
    }
    o.require(worst < 1e-9, "max deviation " + num(worst));
    return o;
  }));
  out.push_back(timed("geometry.dyadic_cover", "dyadic cells tile the disc and locate their points", [] {
    Outcome o;
    double area = 0.0;
    for (const DyadicRectangle& R : dyadic_rectangles(6)) area += region_area(R);
    const double exact = std::pow(1.0 - std::ldexp(1.0, -7), 2);
    o.require(std::abs(area - exact) < 1e-13, "area of levels 0..6 " + num(area) + " vs " + num(exact));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> rad(0.0, 0.9999), ang(-kPi, kPi);
    int misses = 0;
    for (int i = 0; i < 2000; ++i) {
      const Complex z = std::polar(rad(rng), ang(rng));
      misses += dyadic_cell(z).contains(z) ? 0 : 1;
    }
    o.require(misses == 0, "points outside their cell " + std::to_string(misses));
    return o;
  }));
  out.push_back(timed("geometry.carleson_area", "area of S(a) matches the box mass of the unweighted measure", [] {
    Outcome o;
    const RadialWeight w = RadialWeight::standard(0.0);
    double worst = 0.0;
    for (double m : {0.1, 0.5, 0.9, 0.999}) {
      const Complex a = std::polar(m, 2.0);
      worst = std::max(worst, std::abs(region_area(carleson_square(a)) - box_mass(w, a)) / box_mass(w, a));
    }
    o.require(worst < 1e-10, "max relative gap " + num(worst));
    return o;
  }));
  out.push_back(timed("geometry.lattice", "delta-lattices are separated and cover the disc", [] {
    Outcome o;
    for (double delta : {0.1, 0.2, 0.4}) {
      const Lattice L = delta_lattice(delta, 6);
      o.require(L.min_separation >= 0.5 * delta && L.covering_bound <= 1.1 * delta,
                "delta " + num(delta) + ": separation " + num(L.min_separation) + ", covering " + num(L.covering_bound));
    }
    return o;
  }));
  return out;
}

std::vector<CheckResult> criteria(std::initializer_list<int> ks) {
  std::vector<CheckResult> out;
  for (int k : ks) out.push_back(run_criterion(k));
  return out;
}

void append(std::vector<CheckResult>& a, std::vector<CheckResult> b) {
  for (auto& c : b) a.push_back(std::move(c));
}

}  // namespace

bool SuiteResult::passed() const { return failures() == 0; }

int SuiteResult::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

CheckResult run_criterion(int k) {
  static const std::function<Outcome()> bodies[] = {criterion_1, criterion_2, criterion_3,  criterion_4,
                                                    criterion_5, criterion_6, criterion_7,  criterion_8,
                                                    criterion_9, criterion_10, criterion_11, criterion_12};
  if (k < 1 || k > kCriterionCount) throw std::invalid_argument("criterion index must lie in [1, 12]");
  return timed("C" + std::to_string(k), criterion_description(k), bodies[k - 1]);
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"kernels", "weights", "toeplitz", "schatten", "composition", "all"};
  return names;
}

bool is_suite(const std::string& name) {
  const auto& n = suite_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

SuiteResult run_suite(const std::string& name) {
  if (!is_suite(name)) throw std::invalid_argument("unknown suite '" + name + "'");
  SuiteResult out;
  out.name = name;
  if (name == "kernels") {
    out.checks = kernel_checks();
    append(out.checks, criteria({1, 5}));
  } else if (name == "weights") {
    out.checks = weight_checks();
    append(out.checks, criteria({11}));
  } else if (name == "toeplitz") {
    out.checks = toeplitz_checks();
    append(out.checks, criteria({2, 3, 6, 7, 12}));
  } else if (name == "schatten") {
    out.checks = criteria({3, 8, 9});
  } else if (name == "composition") {
    out.checks = composition_checks();
    append(out.checks, criteria({4, 10}));
  } else {
    for (int k = 1; k <= kCriterionCount; ++k) out.checks.push_back(run_criterion(k));
  }
  return out;
}

SuiteResult geometry_suite() {
  SuiteResult out;
  out.name = "geometry";
  out.checks = geometry_checks();
  return out;
}

}  // namespace bergman
