#include "bergman/composition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"
#include "bergman/region_quadrature.hpp"

namespace bergman {

namespace {

constexpr double kTailTolerance = 1e-10;
constexpr double kExclusionRadius = 1e-3;

void check_sizes(int N, int M) {
  if (N < 1 || M < 1) throw DomainError("composition matrix sizes must be positive");
  if (N > 8192 || M > 1 << 16) throw ResourceError("composition matrix too large");
}

// Multiplier used to advance phi^n to phi^{n+1}.
std::vector<Complex> multiplier(const Symbol& phi, int M) {
  if (phi.form() == Symbol::Form::polynomial) {
    std::vector<Complex> c = phi.coefficients();
    if (static_cast<int>(c.size()) > M + 1) c.resize(static_cast<std::size_t>(M) + 1);
    return c;
  }
  return phi.taylor(static_cast<std::size_t>(M));
}

// phi(e^{i theta}) is a rotation times z^k: |phi| and the counting function
// depend only on |z|.
bool rotation_invariant(const Symbol& phi) {
  if (phi.form() == Symbol::Form::blaschke) {
    return std::all_of(phi.zeros().begin(), phi.zeros().end(), [](Complex a) { return a == Complex(0.0, 0.0); });
  }
  const auto& c = phi.coefficients();
  return std::count_if(c.begin(), c.end(), [](Complex v) { return v != Complex(0.0, 0.0); }) == 1;
}

// 1 - |phi(z)|^2 with 1 - |z| supplied separately. Blaschke factors use
// 1 - |b_a(z)|^2 = (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2.
double one_minus_modulus_sq(const Symbol& phi, Complex z, double omr) {
  if (phi.form() == Symbol::Form::polynomial) return 1.0 - std::norm(phi(z));
  const double omz2 = omr * (2.0 - omr);
  double log_prod = 0.0;
  for (Complex a : phi.zeros()) {
    const double u = (1.0 - std::norm(a)) * omz2 / std::norm(1.0 - std::conj(a) * z);
    log_prod += std::log1p(-std::min(u, 1.0));
  }
  return -std::expm1(log_prod);
}

// omega_star at a point with modulus m and 1 - m given; +inf at the origin.
double star_at(const RadialWeight& w, double m, double omm) {
  if (m <= 0.0) return std::numeric_limits<double>::infinity();
  if (omm <= 0.0) return 0.0;
  return w.star(m, omm);
}

double counting_sum(const Symbol& phi, const RadialWeight& w, Complex z, int* boundary,
                    std::vector<Complex>* roots = nullptr) {
  const std::vector<Complex> pre = phi.preimages(z, boundary);
  double sum = 0.0;
  for (Complex zeta : pre) {
    const double m = std::abs(zeta);
    sum += star_at(w, m, 1.0 - m);
  }
  if (roots) *roots = pre;
  return sum;
}

CriterionQuantity as_quantity(std::string name, const LevelTrail& t) {
  CriterionQuantity q;
  q.name = std::move(name);
  q.value = t.value();
  q.trail = t.partials;
  q.verdict = t.verdict;
  return q;
}

}  // namespace

std::vector<Complex> power_coeffs(const Symbol& phi, int n, int M) {
  if (n < 0 || M < 0) throw DomainError("power_coeffs requires n >= 0 and M >= 0");
  const std::vector<Complex> f = multiplier(phi, M);
  std::vector<Complex> out{Complex(1.0, 0.0)};
  for (int k = 0; k < n; ++k) out = series_multiply(out, f, static_cast<std::size_t>(M));
  out.resize(static_cast<std::size_t>(M) + 1, Complex(0.0, 0.0));
  return out;
}

int default_rows(const Symbol& phi, int N) {
  if (phi.form() == Symbol::Form::polynomial) return N * phi.degree() + 1;
  return 4 * N;
}

OperatorMatrix composition_matrix(const Symbol& phi, const RadialWeight& w, int N, int M) {
  if (M == 0) M = default_rows(phi, N);
  check_sizes(N, M);
  if (M < N) throw DomainError("composition_matrix requires M >= N");
  OperatorMatrix out;
  out.provenance = Provenance::composition;
  out.label = "C_phi";
  out.entries = Eigen::MatrixXcd::Zero(M, N);

  std::vector<double> s(static_cast<std::size_t>(M) + 1);
  for (int m = 0; m <= M; ++m) s[static_cast<std::size_t>(m)] = std::sqrt(w.moment(2 * static_cast<std::size_t>(m) + 1));

  const std::vector<Complex> f = multiplier(phi, M - 1);
  const bool polynomial = phi.form() == Symbol::Form::polynomial;
  std::vector<Complex> power{Complex(1.0, 0.0)};
  int flagged = 0;
  for (int n = 0; n < N; ++n) {
    if (n > 0) power = series_multiply(power, f, static_cast<std::size_t>(M) - 1);
    double h2_kept = 0.0, col = 0.0;
    for (std::size_t m = 0; m < power.size(); ++m) {
      const Complex v = power[m] * (s[m] / s[static_cast<std::size_t>(n)]);
      out.entries(static_cast<Eigen::Index>(m), n) = v;
      h2_kept += std::norm(power[m]);
      col += std::norm(v);
    }
    // Neglected H^2 mass of phi^n, weighted by the largest remaining moment ratio.
    double h2_total;
    if (!polynomial) {
      h2_total = 1.0;
    } else if (static_cast<long long>(n) * phi.degree() < M) {
      h2_total = h2_kept;
    } else {
      long long K = 1;
      while (K <= static_cast<long long>(n) * phi.degree() + 1) K *= 2;
      double acc = 0.0;
      for (long long j = 0; j < K; ++j) acc += std::pow(std::norm(phi(std::polar(1.0, 2.0 * kPi * j / K))), n);
      h2_total = acc / static_cast<double>(K);
    }
    const double ratio = s[static_cast<std::size_t>(M)] / s[static_cast<std::size_t>(n)];
    const double neglected = std::max(0.0, h2_total - h2_kept) * ratio * ratio;
    if (neglected > kTailTolerance * col) {
      out.flagged.emplace_back(M - 1, n);
      ++flagged;
    }
  }
  if (flagged > 0) {
    out.warnings.push_back(std::to_string(flagged) + " column(s) not converged at " + std::to_string(M) + " rows");
  }
  return out;
}

Measure pullback_measure(const Symbol& phi, const RadialWeight& w) { return Measure::pullback(phi, w); }

CountingValue counting_function(const Symbol& phi, const RadialWeight& w, Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("counting_function requires |z| < 1");
  if (pseudo_distance(z, phi(Complex(0.0, 0.0))) < kExclusionRadius) {
    throw DomainError("counting_function is not evaluated near phi(0)");
  }
  CountingValue out;
  out.value = counting_sum(phi, w, z, &out.boundary_cases, &out.preimages);
  return out;
}

ConditionIntegrals condition_integrals(const Symbol& phi, const RadialWeight& w, double p, int j_max) {
  if (!(p > 0.0)) throw DomainError("condition_integrals requires p > 0");
  ConditionIntegrals out;
  out.p = p;
  const bool radial = rotation_invariant(phi);
  const Complex phi0 = phi(Complex(0.0, 0.0));

  struct Sample {
    double ratio;  // (w*(z) / w*(phi(z)))^{p/2}
    double sp;     // |phi'| (1 - |z|^2) / (1 - |phi|^2)
    double omz2;   // 1 - |z|^2
  };
  auto sample = [&](double r, double omr, double theta) {
    const Complex z = std::polar(r, theta);
    const double s = one_minus_modulus_sq(phi, z, omr);
    const double om_phi = s / (1.0 + std::sqrt(std::max(0.0, 1.0 - s)));
    const double st_phi = star_at(w, 1.0 - om_phi, om_phi);
    Sample out_s;
    out_s.omz2 = omr * (1.0 + r);
    out_s.ratio = std::isinf(st_phi) ? 0.0 : std::pow(w.star(r, omr) / st_phi, 0.5 * p);
    out_s.sp = std::abs(phi.derivative(z)) * out_s.omz2 / s;
    return out_s;
  };

  RadialFn one = [](double, double) { return 1.0; };
  RadialFn ratio_density = [&w](double r, double omr) { return w.density(r, omr) / w.star(r, omr); };
  PolarFn f_star = [&](double r, double omr, double theta) { return sample(r, omr, theta).ratio; };
  PolarFn f_deriv = [&](double r, double omr, double theta) {
    const Sample v = sample(r, omr, theta);
    if (v.ratio == 0.0) return 0.0;
    ++out.samples;
    out.schwarz_pick_max = std::max(out.schwarz_pick_max, v.sp);
    if (v.sp > 1.0 + 1e-9) ++out.schwarz_pick_violations;
    const double g_deriv = v.ratio * std::pow(v.sp, p) / (v.omz2 * v.omz2);
    const double g_star = v.ratio * w.density(r, omr) / w.star(r, omr);
    if (g_star > 0.0) out.ratio_max = std::max(out.ratio_max, g_deriv / g_star);
    return g_deriv;
  };
  out.star_ratio = as_quantity("star-ratio integral", level_integral(f_star, ratio_density, j_max, radial));
  out.derivative = as_quantity("derivative integral", level_integral(f_deriv, one, j_max, radial));

  RadialFn hyperbolic = [](double, double omr) { return 1.0 / (omr * omr); };
  long long boundary_total = 0;
  PolarFn fn = [&](double r, double omr, double theta) {
    const Complex z = std::polar(r, theta);
    if (pseudo_distance(z, phi0) < kExclusionRadius) return 0.0;
    int boundary = 0;
    const double n = counting_sum(phi, w, z, &boundary);
    boundary_total += boundary;
    return n == 0.0 ? 0.0 : std::pow(n / w.star(r, omr), 0.5 * p);
  };
  out.counting = as_quantity("counting", level_integral(fn, hyperbolic, j_max, radial));
  if (boundary_total > 0) {
    out.warnings.push_back(std::to_string(boundary_total) + " preimage(s) within 1e-12 of the unit circle");
  }
  if (out.schwarz_pick_violations > 0) out.warnings.push_back("Schwarz-Pick bound violated on some samples");
  return out;
}

CompositionSchatten schatten_composition(const Symbol& phi, const RadialWeight& w, double p, int N,
                                         std::vector<int> schedule) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be positive");
  if (schedule.empty()) schedule = default_schedule(N);
  CompositionSchatten out;
  // Blaschke rows start at 4N and double while columns remain unconverged.
  int M = default_rows(phi, N);
  OperatorMatrix C = composition_matrix(phi, w, N, M);
  if (phi.form() == Symbol::Form::blaschke) {
    const int cap = 16 * N * phi.degree();
    while (!C.flagged.empty() && 2 * M <= cap) {
      M *= 2;
      C = composition_matrix(phi, w, N, M);
    }
  }
  out.rows = M;
  out.warnings = C.warnings;
  out.composition = schatten_norm(C, p, schedule);
  const OperatorMatrix T = toeplitz_matrix(pullback_measure(phi, w), w, N);
  out.warnings.insert(out.warnings.end(), T.warnings.begin(), T.warnings.end());
  out.pullback = schatten_norm(T, 0.5 * p, schedule);
  for (std::size_t i = 0; i < out.composition.trail.size(); ++i) {
    const double c2 = out.composition.trail[i] * out.composition.trail[i];
    const double t = out.pullback.trail[i];
    out.gap_trail.push_back(t > 0.0 ? std::abs(c2 - t) / t : std::abs(c2));
  }
  out.relative_gap = out.gap_trail.empty() ? 0.0 : out.gap_trail.back();
  if (!out.composition.converged) out.warnings.push_back("Schatten estimate of C_phi not converged");
  return out;
}

Complex evaluate_basis_series(const RadialWeight& w, const Eigen::VectorXcd& a, Complex z) {
  Complex acc(0.0, 0.0), power(1.0, 0.0);
  for (Eigen::Index m = 0; m < a.size(); ++m) {
    acc += a(m) * power / std::sqrt(2.0 * w.moment(2 * static_cast<std::size_t>(m) + 1));
    power *= z;
  }
  return acc;
}

IdentityCheck action_identity(const Symbol& phi, const RadialWeight& w, int N, int samples, unsigned seed) {
  const OperatorMatrix C = composition_matrix(phi, w, N);
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;
  IdentityCheck out;
  const int degree = std::max(0, N / 2);
  for (int i = 0; i < samples; ++i) {
    std::vector<Complex> coeffs(static_cast<std::size_t>(degree) + 1);
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(N);
    for (int k = 0; k <= degree; ++k) {
      coeffs[static_cast<std::size_t>(k)] = Complex(normal(rng), normal(rng));
      a(k) = coeffs[static_cast<std::size_t>(k)] * std::sqrt(2.0 * w.moment(2 * static_cast<std::size_t>(k) + 1));
    }
    const Complex z = std::polar(0.8 * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
    const Complex expected = polynomial_eval(coeffs, phi(z));
    const Complex got = evaluate_basis_series(w, C.entries * a, z);
    out.max_error = std::max(out.max_error, std::abs(got - expected) / std::max(1.0, std::abs(expected)));
    ++out.samples;
  }
  return out;
}

double parseval_gap(const Symbol& phi, const RadialWeight& w, int N) {
  const OperatorMatrix C = composition_matrix(phi, w, N);
  const OperatorMatrix T = toeplitz_matrix(pullback_measure(phi, w), w, N);
  return (C.entries.adjoint() * C.entries - T.entries).cwiseAbs().maxCoeff();
}

IdentityCheck adjoint_identity(const Symbol& phi, const RadialWeight& w, int N, int points, double max_modulus,
                               unsigned seed) {
  if (!(max_modulus > 0.0 && max_modulus < 1.0)) throw DomainError("adjoint_identity: modulus must lie in (0, 1)");
  const OperatorMatrix C = composition_matrix(phi, w, N);
  const KernelSeries kernel(w);
  const Eigen::Index M = C.rows();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit;
  IdentityCheck out;
  for (int i = 0; i < points; ++i) {
    const Complex z = std::polar(max_modulus * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng));
    const double norm = std::sqrt(kernel.diag(std::abs(z)));
    const std::vector<Complex> bz = kernel.basis_coefficients(z, static_cast<std::size_t>(M));
    const std::vector<Complex> bphi = kernel.basis_coefficients(phi(z), static_cast<std::size_t>(N));
    Eigen::VectorXcd b(M);
    for (Eigen::Index m = 0; m < M; ++m) b(m) = bz[static_cast<std::size_t>(m)] / norm;
    const Eigen::VectorXcd got = C.entries.adjoint() * b;
    double scale = 0.0, err = 0.0;
    for (int n = 0; n < N; ++n) {
      const Complex expected = bphi[static_cast<std::size_t>(n)] / norm;
      scale = std::max(scale, std::abs(expected));
      err = std::max(err, std::abs(got(n) - expected));
    }
    out.max_error = std::max(out.max_error, err / std::max(scale, std::numeric_limits<double>::min()));
    ++out.samples;
  }
  return out;
}

ChangeOfVariables counting_change_of_variables(const Symbol& phi, const RadialWeight& w, const RealFn& g,
                                               const QuadSpec& spec) {
  ChangeOfVariables out;
  DiscFn direct = [&](Complex zeta) {
    const double m = std::abs(zeta);
    if (m == 0.0) return 0.0;
    const double d = std::abs(phi.derivative(zeta));
    return g(std::abs(phi(zeta))) * d * d * star_at(w, m, 1.0 - m);
  };
  DiscFn counted = [&](Complex z) {
    int boundary = 0;
    const double n = counting_sum(phi, w, z, &boundary);
    return n == 0.0 || std::isinf(n) ? 0.0 : g(std::abs(z)) * n;
  };
  out.direct = integrate_region(direct, FullDisc{}, std::nullopt, spec).value;
  out.counting = integrate_region(counted, FullDisc{}, std::nullopt, spec).value;
  out.relative_gap = std::abs(out.direct - out.counting) / std::max(std::abs(out.direct), std::numeric_limits<double>::min());
  return out;
}

Symbol random_polynomial_symbol(int degree, std::mt19937_64& rng, double sup) {
  if (degree < 1) throw DomainError("random symbol degree must be positive");
  if (!(sup > 0.0 && sup < 1.0)) throw DomainError("random symbol sup must lie in (0, 1)");
  std::normal_distribution<double> normal;
  std::vector<Complex> c(static_cast<std::size_t>(degree) + 1);
  double total = 0.0;
  for (Complex& v : c) {
    v = Complex(normal(rng), normal(rng));
    total += std::abs(v);
  }
  // sum |c_k| bounds the boundary modulus.
  for (Complex& v : c) v *= sup / total;
  return Symbol::polynomial(std::move(c));
}

}  // namespace bergman
