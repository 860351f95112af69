#include "doctest.h"

#include <cmath>
#include <random>

#include "bergman/composition.hpp"

using namespace bergman;
using doctest::Approx;

TEST_CASE("Taylor coefficients of powers of phi") {
  const Symbol cz = Symbol::polynomial({0.0, 0.5});
  for (int n = 0; n < 6; ++n) {
    const std::vector<Complex> c = power_coeffs(cz, n, 8);
    for (int m = 0; m <= 8; ++m) CHECK(std::abs(c[m] - (m == n ? std::pow(0.5, n) : 0.0)) < 1e-15);
  }
  const Symbol z2 = Symbol::polynomial({0.0, 0.0, 1.0});
  const std::vector<Complex> c3 = power_coeffs(z2, 3, 8);
  for (int m = 0; m <= 8; ++m) CHECK(std::abs(c3[m] - (m == 6 ? 1.0 : 0.0)) < 1e-15);
  // (z + 1/2) / (1 + z/2) = 1/2 + 3/4 z - 3/8 z^2 + ...
  const std::vector<Complex> mob = power_coeffs(Symbol::blaschke({Complex(-0.5, 0.0)}), 1, 2);
  CHECK(std::abs(mob[0] - 0.5) < 1e-15);
  CHECK(std::abs(mob[1] - 0.75) < 1e-15);
  CHECK(std::abs(mob[2] + 0.375) < 1e-15);
}

TEST_CASE("composition matrices") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const OperatorMatrix C = composition_matrix(Symbol::polynomial({0.0, Complex(0.3, 0.4)}), s0, 32);
  for (int n = 0; n < 32; ++n) CHECK(std::abs(C.entries(n, n) - std::pow(Complex(0.3, 0.4), n)) < 1e-14);
  const Eigen::VectorXd sv = singular_values(C.entries);
  CHECK(sv(5) == Approx(std::pow(0.5, 5)).epsilon(1e-12));

  const OperatorMatrix Z = composition_matrix(Symbol::polynomial({0.0, 0.0, 1.0}), s0, 64);
  CHECK(Z.rows() == 2 * 64 + 1);
  for (int n = 0; n < 64; ++n) CHECK(std::abs(Z.entries(2 * n, n) - std::sqrt((n + 1.0) / (2.0 * n + 1.0))) < 1e-13);
  CHECK(singular_values(Z.entries)(63) == Approx(std::sqrt(64.0 / 127.0)).epsilon(1e-12));

  const OperatorMatrix I = composition_matrix(Symbol::identity(), RadialWeight::log_weight(3.0), 16);
  CHECK((I.entries - Eigen::MatrixXcd::Identity(I.rows(), 16)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(I.provenance == Provenance::composition);
}

TEST_CASE("pullback measures") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const OperatorMatrix T = toeplitz_matrix(pullback_measure(Symbol::identity(), s0), s0, 32);
  CHECK((T.entries - Eigen::MatrixXcd::Identity(32, 32)).cwiseAbs().maxCoeff() < 1e-8);

  const Symbol cz = Symbol::polynomial({0.0, 0.6});
  const OperatorMatrix Tc = toeplitz_matrix(pullback_measure(cz, s0), s0, 32);
  const OperatorMatrix C = composition_matrix(cz, s0, 32);
  for (int n = 0; n < 32; ++n) CHECK(std::abs(Tc.entries(n, n) - std::pow(0.36, n)) < 1e-8);
  CHECK((Tc.entries - C.entries.adjoint() * C.entries).cwiseAbs().maxCoeff() < 1e-8);

  std::mt19937_64 rng(21);
  const Symbol phi = random_polynomial_symbol(3, rng);
  CHECK(phi.sup_norm_certificate() <= 0.9 + 1e-12);
  CHECK(parseval_gap(phi, s0, 64) < 1e-6);
}

TEST_CASE("counting functions") {
  const RadialWeight w = RadialWeight::standard(1.0);
  const Complex z(0.2, -0.3);
  CHECK(counting_function(Symbol::identity(), w, z).value == Approx(w.star(std::abs(z))).epsilon(1e-12));
  const CountingValue two = counting_function(Symbol::polynomial({0.0, 0.0, 1.0}), w, z);
  CHECK(two.preimages.size() == 2);
  CHECK(two.value == Approx(2.0 * w.star(std::sqrt(std::abs(z)))).epsilon(1e-12));
  const Symbol cz = Symbol::polynomial({0.0, 0.5});
  CHECK(counting_function(cz, w, 0.3).value == Approx(w.star(0.6)).epsilon(1e-12));
  CHECK(counting_function(cz, w, 0.5).value == 0.0);
  // Points within 1e-3 of phi(0) are outside the domain of N.
  CHECK_THROWS_AS(counting_function(cz, w, 1e-4), DomainError);
}

TEST_CASE("condition integrals") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const ConditionIntegrals cz = condition_integrals(Symbol::polynomial({0.0, 0.5}), s0, 4.0);
  CHECK(cz.star_ratio.finite());
  CHECK(cz.derivative.finite());
  CHECK(cz.counting.finite());
  CHECK(cz.schwarz_pick_violations == 0);
  CHECK(cz.schwarz_pick_max <= 1.0);
  const ConditionIntegrals id = condition_integrals(Symbol::identity(), s0, 2.0);
  CHECK(id.star_ratio.verdict == TrailVerdict::diverging);
  CHECK(id.schwarz_pick_max == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Schatten norms of composition operators") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  const CompositionSchatten two = schatten_composition(Symbol::polynomial({0.0, 0.5}), s0, 2.0, 64);
  CHECK(two.composition.value * two.composition.value == Approx(4.0 / 3.0).epsilon(1e-10));
  CHECK(two.relative_gap < 1e-6);
  const CompositionSchatten three = schatten_composition(Symbol::polynomial({0.0, 0.5}), s0, 3.0, 64);
  CHECK(std::pow(three.composition.value, 3.0) == Approx(8.0 / 7.0).epsilon(1e-10));
  const CompositionSchatten z2 = schatten_composition(Symbol::polynomial({0.0, 0.0, 1.0}), s0, 2.0, 64);
  CHECK_FALSE(z2.composition.converged);
}

TEST_CASE("action and adjoint identities") {
  const RadialWeight w = RadialWeight::log_weight(3.0);
  std::mt19937_64 rng(8);
  const Symbol phi = random_polynomial_symbol(2, rng);
  CHECK(action_identity(phi, w, 48, 10).max_error < 1e-8);
  CHECK(adjoint_identity(phi, w, 64, 10).max_error < 1e-6);
  const Symbol b = Symbol::blaschke({Complex(0.2, 0.3)}, 0.7);
  CHECK(action_identity(b, RadialWeight::standard(1.0), 64, 10).max_error < 1e-8);
}

TEST_CASE("non-univalent change of variables") {
  QuadSpec spec;
  spec.relative_tolerance = 1e-6;
  const ChangeOfVariables c = counting_change_of_variables(Symbol::polynomial({0.0, 0.0, 0.8}), RadialWeight::standard(0.0),
                                                           [](double r) { return 1.0 + r * r; }, spec);
  CHECK(c.relative_gap < 1e-4);
  CHECK(c.direct > 0.0);
}

TEST_CASE("basis series evaluation") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(4);
  a(1) = 1.0;  // e_1 = z / sqrt(2 omega_3) = sqrt(2) z
  CHECK(std::abs(evaluate_basis_series(s0, a, 0.5) - std::sqrt(2.0) * 0.5) < 1e-15);
}
