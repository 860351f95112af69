#pragma once

#include <Eigen/Dense>
#include <random>
#include <vector>

#include "bergman/measures.hpp"
#include "bergman/symbol.hpp"
#include "bergman/toeplitz.hpp"
#include "bergman/weights.hpp"

namespace bergman {

// Taylor coefficients c_{n,0..M} of phi^n. Exact for polynomials; for
// Blaschke products the truncated products are exact in the retained range.
std::vector<Complex> power_coeffs(const Symbol& phi, int n, int M);

// Rows used by default for a composition matrix with N columns.
int default_rows(const Symbol& phi, int N);

// C(m, n) = c_{n,m} sqrt(omega_{2m+1} / omega_{2n+1}) for m < M, n < N.
// Columns whose neglected norm (rows >= M) exceeds 1e-10 of the column norm
// are flagged at (M - 1, n).
OperatorMatrix composition_matrix(const Symbol& phi, const RadialWeight& w, int N, int M = 0);

Measure pullback_measure(const Symbol& phi, const RadialWeight& w);

struct CountingValue {
  double value = 0.0;
  std::vector<Complex> preimages;
  int boundary_cases = 0;  // roots within 1e-12 of the unit circle
};

// N_{phi, omega_star}(z): sum of omega_star over the preimages of z. Points
// within pseudohyperbolic distance 1e-3 of phi(0) are excluded.
CountingValue counting_function(const Symbol& phi, const RadialWeight& w, Complex z);

struct ConditionIntegrals {
  double p = 2.0;
  CriterionQuantity star_ratio;  // \int (w*(z)/w*(phi(z)))^{p/2} omega/omega_star dA
  CriterionQuantity derivative;  // \int (w*(z)/w*(phi(z)))^{p/2} |phi'|^p (1-|z|^2)^{p-2} / (1-|phi|^2)^p dA
  CriterionQuantity counting;  // \int (N_{phi,w*}/w*)^{p/2} dA / (1-|z|)^2
  // Pointwise comparison of the second integrand with
  // (w*(z)/w*(phi(z)))^{p/2} (1-|z|^2)^{-2} on every sample.
  double schwarz_pick_max = 0.0;    // max |phi'| (1-|z|^2) / (1-|phi|^2)
  long long schwarz_pick_violations = 0;
  long long samples = 0;
  double ratio_max = 0.0;  // max ratio of the two integrands
  Warnings warnings;
};

ConditionIntegrals condition_integrals(const Symbol& phi, const RadialWeight& w, double p, int j_max = 14);

struct CompositionSchatten {
  SchattenEstimate composition;  // |C_phi|_p
  SchattenEstimate pullback;     // |T_mu|_{p/2}, mu the pullback measure
  std::vector<double> gap_trail;  // | |C|_p^2 - |T|_{p/2} | / |T|_{p/2} per size
  double relative_gap = 0.0;
  int rows = 0;
  Warnings warnings;
};

CompositionSchatten schatten_composition(const Symbol& phi, const RadialWeight& w, double p, int N,
                                         std::vector<int> schedule = {});

// sum_n a_n e_n(z) for coefficients in the e_n basis.
Complex evaluate_basis_series(const RadialWeight& w, const Eigen::VectorXcd& a, Complex z);

struct IdentityCheck {
  double max_error = 0.0;
  int samples = 0;
};

// (C f)(z) against f(phi(z)) for random polynomials of degree <= N/2 and
// random |z| <= 0.8. Errors are relative to max(1, |f(phi(z))|).
IdentityCheck action_identity(const Symbol& phi, const RadialWeight& w, int N, int samples, unsigned seed = 7);
// max | C^H C - T_pullback | at size N.
double parseval_gap(const Symbol& phi, const RadialWeight& w, int N);
// C^H b_z against the coefficients of B_{phi(z)} / ||B_z|| for random
// |z| <= max_modulus; errors relative to the sup norm of the expected vector.
IdentityCheck adjoint_identity(const Symbol& phi, const RadialWeight& w, int N, int points, double max_modulus = 0.6,
                               unsigned seed = 11);

struct ChangeOfVariables {
  double direct = 0.0;    // \int g(phi) |phi'|^2 omega_star dA
  double counting = 0.0;  // \int g N_{phi, omega_star} dA
  double relative_gap = 0.0;
};

// Both sides of the non-univalent change of variables for a radial test
// function g(|w|).
ChangeOfVariables counting_change_of_variables(const Symbol& phi, const RadialWeight& w, const RealFn& g,
                                               const QuadSpec& spec = {});

// Random polynomial symbol of the given degree with boundary sup at most
// `sup` (coefficients drawn in the disc and rescaled).
Symbol random_polynomial_symbol(int degree, std::mt19937_64& rng, double sup = 0.9);

}  // namespace bergman
