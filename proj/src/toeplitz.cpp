#include "bergman/toeplitz.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "bergman/geometry.hpp"
#include "bergman/region_quadrature.hpp"
#include "fft.hpp"

namespace bergman {

namespace {

constexpr int kMaxDimension = 4096;
constexpr std::size_t kMaxSeriesTerms = std::size_t{1} << 24;
constexpr int kMaxFft = 1 << 16;

int next_pow2(long long n) {
  int k = 1;
  while (k < n && k < (1 << 30)) k *= 2;
  return k;
}

// sqrt(2 omega_{2n+1}) for n < count.
std::vector<double> basis_norms(const RadialWeight& w, int count) {
  std::vector<double> s(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) s[static_cast<std::size_t>(n)] = std::sqrt(2.0 * w.moment(2 * static_cast<std::size_t>(n) + 1));
  return s;
}

void symmetrize(Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  m = std::move(h);
}

Eigen::MatrixXcd point_mass_matrix(const Measure& mu, const std::vector<double>& s, int N) {
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N, N);
  for (const Atom& a : mu.atoms()) {
    Eigen::VectorXcd u(N);
    Complex power(1.0, 0.0);
    for (int n = 0; n < N; ++n) {
      u(n) = power / s[static_cast<std::size_t>(n)];
      power *= a.location;
    }
    // T(m, n) = mass * conj(u_m) u_n
    T.noalias() += a.mass * (u.conjugate() * u.transpose());
  }
  return T;
}

Eigen::MatrixXcd area_density_matrix(const Measure& mu, const std::vector<double>& s, int N) {
  const double support = mu.support_radius();
  const RadialRule rule = support < 1.0 ? RadialRule::log_mapped(0.0, 40.0, 0.5, 16, support)
                                        : RadialRule::log_mapped(0.0, 60.0, 0.5, 16);
  const int K = std::max(64, next_pow2(4LL * N));
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(N, N);
  std::vector<Complex> samples(static_cast<std::size_t>(K));
  Eigen::VectorXd powers(N);
  for (const RadialNode& node : rule.nodes()) {
    if (node.r == 0.0) continue;
    for (int j = 0; j < K; ++j) samples[static_cast<std::size_t>(j)] = mu.area_density_at(std::polar(node.r, 2.0 * kPi * j / K));
    detail::fft_inplace(samples, true);
    for (int n = 0; n < N; ++n) powers(n) = std::exp(node.log_r * n);
    // \int zeta^n conj(zeta)^m v dA = 2 \int r^{n+m+1} F_{m-n}(r) dr
    const double base = 2.0 * node.weight * node.r / K;
    for (int n = 0; n < N; ++n) {
      for (int m = 0; m < N; ++m) {
        const int k = ((m - n) % K + K) % K;
        T(m, n) += base * powers(n) * powers(m) * samples[static_cast<std::size_t>(k)];
      }
    }
  }
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m) T(m, n) /= s[static_cast<std::size_t>(n)] * s[static_cast<std::size_t>(m)];
  return T;
}

// Coefficients of phi^n from boundary samples, scaled into the e_k basis:
// G(k, n) = [z^k] phi^n * sqrt(omega_{2k+1} / omega_{2n+1}). Then T = G^H G.
Eigen::MatrixXcd pullback_matrix(const Symbol& phi, const RadialWeight& w, int N, Warnings& warnings) {
  long long want = 64;
  if (phi.form() == Symbol::Form::polynomial) {
    want = std::max<long long>(want, 2LL * ((N - 1LL) * phi.degree() + 1));
  } else {
    double rho = 0.0;
    for (Complex a : phi.zeros()) rho = std::max(rho, std::abs(a));
    const double decay = rho > 0.0 ? 40.0 / -std::log(rho) : 0.0;
    want = std::max<long long>(want, 4LL * N * phi.degree() + static_cast<long long>(4.0 * decay));
  }
  int K = next_pow2(want);
  if (K > kMaxFft) {
    K = kMaxFft;
    warnings.push_back("pullback coefficients truncated to 65536 boundary samples");
  }
  std::vector<Complex> boundary(static_cast<std::size_t>(K));
  for (int j = 0; j < K; ++j) boundary[static_cast<std::size_t>(j)] = phi(std::polar(1.0, 2.0 * kPi * j / K));
  std::vector<double> sk(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) sk[static_cast<std::size_t>(k)] = std::sqrt(w.moment(2 * static_cast<std::size_t>(k) + 1));
  Eigen::MatrixXcd G(K, N);
  std::vector<Complex> power(static_cast<std::size_t>(K), Complex(1.0, 0.0));
  std::vector<Complex> buffer;
  for (int n = 0; n < N; ++n) {
    buffer = power;
    detail::fft_inplace(buffer, true);
    for (int k = 0; k < K; ++k) G(k, n) = buffer[static_cast<std::size_t>(k)] / static_cast<double>(K) * (sk[static_cast<std::size_t>(k)] / sk[static_cast<std::size_t>(n)]);
    for (int j = 0; j < K; ++j) power[static_cast<std::size_t>(j)] *= boundary[static_cast<std::size_t>(j)];
  }
  return G.adjoint() * G;
}

}  // namespace

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::toeplitz: return "toeplitz";
    case Provenance::composition: return "composition";
    case Provenance::product: return "product";
  }
  return "unknown";
}

OperatorMatrix OperatorMatrix::operator+(const OperatorMatrix& other) const {
  if (rows() != other.rows() || cols() != other.cols()) throw DomainError("operator matrices differ in shape");
  OperatorMatrix out;
  out.entries = entries + other.entries;
  out.provenance = provenance == other.provenance ? provenance : Provenance::product;
  out.label = label + " + " + other.label;
  out.flagged = flagged;
  out.flagged.insert(out.flagged.end(), other.flagged.begin(), other.flagged.end());
  return out;
}

OperatorMatrix OperatorMatrix::operator*(const OperatorMatrix& other) const {
  if (cols() != other.rows()) throw DomainError("operator matrices are not composable");
  OperatorMatrix out;
  out.entries = entries * other.entries;
  out.provenance = Provenance::product;
  out.label = "(" + label + ")(" + other.label + ")";
  return out;
}

OperatorMatrix toeplitz_matrix(const Measure& mu, const RadialWeight& w, int N, const QuadSpec& spec) {
  (void)spec;
  if (N < 1 || N > kMaxDimension) throw DomainError("toeplitz_matrix: N must lie in [1, 4096]");
  OperatorMatrix out;
  out.provenance = Provenance::toeplitz;
  out.label = "toeplitz(" + mu.label() + ")";
  const std::vector<double> s = basis_norms(w, N);
  switch (mu.kind()) {
    case Measure::Kind::point_masses:
      out.entries = point_mass_matrix(mu, s, N);
      break;
    case Measure::Kind::radial_density: {
      out.entries = Eigen::MatrixXcd::Zero(N, N);
      const auto multiple = mu.weight_multiple();
      for (int n = 0; n < N; ++n) {
        const std::size_t k = 2 * static_cast<std::size_t>(n) + 1;
        double value;
        if (multiple && multiple->first.equivalent(w)) {
          // Moment-ratio path: the same numbers appear above and below.
          value = multiple->second * (multiple->first.moment(k) / w.moment(k));
        } else {
          value = mu.radial_moments()[k] / w.moment(k);
        }
        if (!std::isfinite(value)) out.flagged.emplace_back(n, n);
        out.entries(n, n) = value;
      }
      break;
    }
    case Measure::Kind::area_density:
      out.entries = area_density_matrix(mu, s, N);
      symmetrize(out.entries);
      break;
    case Measure::Kind::pullback:
      out.entries = pullback_matrix(mu.symbol(), mu.base_weight(), N, out.warnings);
      if (!mu.base_weight().equivalent(w)) {
        // Entries of the pullback of omega_base, expressed in the e_n basis of w.
        const std::vector<double> sb = basis_norms(mu.base_weight(), N);
        for (int n = 0; n < N; ++n)
          for (int m = 0; m < N; ++m)
            out.entries(m, n) *= sb[static_cast<std::size_t>(n)] * sb[static_cast<std::size_t>(m)] /
                                 (s[static_cast<std::size_t>(n)] * s[static_cast<std::size_t>(m)]);
      }
      symmetrize(out.entries);
      break;
  }
  for (int n = 0; n < N; ++n)
    for (int m = 0; m < N; ++m)
      if (!std::isfinite(std::abs(out.entries(m, n))) && mu.kind() != Measure::Kind::radial_density) out.flagged.emplace_back(m, n);
  if (!out.flagged.empty()) out.warnings.push_back("divergent moment integrals in " + std::to_string(out.flagged.size()) + " entries");
  return out;
}

namespace {

// sum_n x^n m_{2n+1} / (2 omega_{2n+1}^2): ||B_z||^2_{L^2_mu} for radial mu.
double radial_berezin_numerator(const Measure& mu, const RadialWeight& w, double x, bool& converged,
                                std::size_t& terms) {
  const MomentSequence& mm = mu.radial_moments();
  const auto multiple = mu.weight_multiple();
  const bool same = multiple && multiple->first.equivalent(w);
  const double log_x = x > 0.0 ? std::log(x) : 0.0;
  double sum = 0.0, prev = 0.0, power = 1.0;
  converged = false;
  for (std::size_t n = 0; n < kMaxSeriesTerms; ++n) {
    if (n % 256 == 0 && n > 0) power = std::exp(log_x * static_cast<double>(n));
    const std::size_t k = 2 * n + 1;
    const double wk = w.moment(k);
    const double mk = same ? multiple->second * multiple->first.moment(k) : mm[k];
    const double term = power * (mk / wk) / (2.0 * wk);
    sum += term;
    if (x == 0.0 && n >= 1) {
      converged = true;
      terms = n + 1;
      return sum;
    }
    if (n >= 4 && prev > 0.0) {
      const double q = std::max(term / prev, x);
      if (q < 1.0 && term * q / (1.0 - q) <= 1e-13 * sum) {
        converged = true;
        terms = n + 1;
        return sum;
      }
    }
    if (term == 0.0 && n >= 4) {
      converged = true;
      terms = n + 1;
      return sum;
    }
    prev = term;
    power *= x;
  }
  terms = kMaxSeriesTerms;
  return sum;
}

}  // namespace

BerezinValue berezin_numerator(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec) {
  if (!(std::abs(z) < 1.0)) throw DomainError("berezin requires |z| < 1");
  const KernelSeries kernel(w);
  BerezinValue out;
  switch (mu.kind()) {
    case Measure::Kind::point_masses: {
      for (const Atom& a : mu.atoms()) out.numerator += a.mass * std::norm(kernel.value(z, a.location));
      out.terms = mu.atoms().size();
      break;
    }
    case Measure::Kind::radial_density: {
      const double m = std::abs(z);
      out.numerator = radial_berezin_numerator(mu, w, m * m, out.converged, out.terms);
      break;
    }
    case Measure::Kind::area_density: {
      DiscFn g = [&](Complex zeta) {
        const double v = mu.area_density_at(zeta);
        return v == 0.0 ? 0.0 : v * std::norm(kernel.value(z, zeta));
      };
      const double R = mu.support_radius();
      const Region region = R < 1.0 ? Region{Annulus{0.0, R}} : Region{FullDisc{}};
      QuadResult q = integrate_region(g, region, std::nullopt, spec);
      out.numerator = q.value;
      out.converged = q.converged;
      break;
    }
    case Measure::Kind::pullback: {
      const Symbol& phi = mu.symbol();
      DiscFn g = [&](Complex u) { return std::norm(kernel.value(z, phi(u))); };
      QuadResult q = integrate_region(g, FullDisc{}, mu.base_weight(), spec);
      out.numerator = q.value;
      out.converged = q.converged;
      break;
    }
  }
  return out;
}

BerezinValue berezin_value(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec) {
  BerezinValue out = berezin_numerator(mu, w, z, spec);
  out.kernel_diag = KernelSeries(w).diag_value(std::abs(z));
  out.value = out.numerator / out.kernel_diag;
  return out;
}

double berezin(const Measure& mu, const RadialWeight& w, Complex z, const QuadSpec& spec) {
  return berezin_value(mu, w, z, spec).value;
}

int berezin_size_for(const RadialWeight& w, double modulus, double tail_tol) {
  const double x = modulus * modulus;
  const double total = KernelSeries(w).diag(modulus);
  double partial = 0.0, power = 1.0;
  for (int n = 0; n < (1 << 24); ++n) {
    partial += power / (2.0 * w.moment(2 * static_cast<std::size_t>(n) + 1));
    power *= x;
    if (total - partial <= tail_tol * total) return n + 1;
  }
  throw PrecisionError("berezin_size_for: kernel tail does not fall below tolerance");
}

double berezin_of_matrix(const OperatorMatrix& T, const RadialWeight& w, Complex z, double tail_tol) {
  if (T.rows() != T.cols()) throw DomainError("berezin_of_matrix requires a square matrix");
  if (!(std::abs(z) < 1.0)) throw DomainError("berezin_of_matrix requires |z| < 1");
  const int N = static_cast<int>(T.cols());
  const double diag = KernelSeries(w).diag(std::abs(z));
  Eigen::VectorXcd beta(N);
  Complex power(1.0, 0.0);
  const Complex zbar = std::conj(z);
  double captured = 0.0;
  for (int n = 0; n < N; ++n) {
    beta(n) = power / std::sqrt(2.0 * w.moment(2 * static_cast<std::size_t>(n) + 1) * diag);
    captured += std::norm(beta(n));
    power *= zbar;
  }
  if (1.0 - captured > tail_tol) {
    std::ostringstream os;
    os << "berezin_of_matrix: truncated kernel misses " << (1.0 - captured) << " of ||b_z||^2 at |z| = " << std::abs(z)
       << "; use N >= " << berezin_size_for(w, std::abs(z), tail_tol);
    throw PrecisionError(os.str());
  }
  return (beta.adjoint() * T.entries * beta)(0, 0).real();
}

BerezinField berezin_field(const Measure& mu, const RadialWeight& w, const CenterGrid& grid, const QuadSpec& spec) {
  BerezinField out;
  out.weight = w.label();
  out.measure = mu.label();
  for (const auto& [level, a] : grid_centers(grid, mu.is_radial())) {
    BerezinValue v = berezin_value(mu, w, a, spec);
    out.levels.push_back(level);
    out.points.push_back(a);
    out.values.push_back(v.value);
    out.converged.push_back(v.converged);
  }
  return out;
}

std::vector<int> default_schedule(int N) {
  if (N < 1) throw DomainError("truncation size must be positive");
  std::vector<int> s{std::max(1, N / 2), std::max(1, (3 * N) / 4), N};
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& block) {
  if (block.size() == 0) return {};
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(block);
  return svd.singularValues();
}

double schatten_from_singular_values(const Eigen::VectorXd& sigma, double p) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be positive");
  if (sigma.size() == 0) return 0.0;
  const double smax = sigma.maxCoeff();
  const double cutoff = smax * std::numeric_limits<double>::epsilon() * static_cast<double>(sigma.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (sigma(i) > cutoff) acc += std::pow(sigma(i) / smax, p);
  }
  return smax * std::pow(acc, 1.0 / p);
}

SchattenEstimate schatten_norm(const OperatorMatrix& T, double p, std::vector<int> schedule) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be positive");
  const int cols = static_cast<int>(T.cols());
  if (schedule.empty()) schedule = default_schedule(cols);
  SchattenEstimate out;
  out.p = p;
  for (int n : schedule) {
    if (n < 1 || n > cols) throw DomainError("truncation size exceeds the matrix");
    int r = n;
    if (T.rows() != T.cols()) {
      r = static_cast<int>(std::min<long long>(T.rows(), (static_cast<long long>(T.rows()) * n + cols - 1) / cols));
    }
    Eigen::VectorXd sigma = singular_values(T.entries.topLeftCorner(r, n));
    out.sizes.push_back(n);
    out.trail.push_back(schatten_from_singular_values(sigma, p));
    if (n == schedule.back()) out.singular_values.assign(sigma.data(), sigma.data() + sigma.size());
  }
  out.value = out.trail.back();
  if (out.trail.size() >= 2) {
    const double prev = out.trail[out.trail.size() - 2];
    out.last_step = out.value > 0.0 ? std::abs(out.value - prev) / out.value : 0.0;
    out.converged = out.last_step < 0.01;
  } else {
    out.converged = false;
  }
  return out;
}

TraceCheck trace_check(const Measure& mu, const RadialWeight& w, int N, const QuadSpec& spec) {
  if (!mu.compactly_supported()) throw DomainError("trace_check requires a compactly supported measure");
  TraceCheck out;
  const OperatorMatrix T = toeplitz_matrix(mu, w, N, spec);
  out.trace_matrix = T.entries.trace().real();
  // tr(T) = \int ||B_z||^2_{L^2_mu} omega(z) dA(z)
  bool ok = true;
  QuadResult q;
  if (mu.is_radial()) {
    RadialFn f = [&](double r, double omr) {
      const double d = w.density(r, omr);
      if (d == 0.0) return 0.0;
      // Beyond 1 - 1e-12 the integrand is frozen; the omitted mass is below 1e-12.
      BerezinValue b = berezin_numerator(mu, w, Complex(omr < 1e-12 ? 1.0 - 1e-12 : r, 0.0), spec);
      ok = ok && b.converged;
      return 2.0 * b.numerator * d * r;
    };
    q = integrate_radial(f, 0.0, spec);
  } else {
    DiscFn g = [&](Complex z) {
      const double m = std::abs(z);
      if (m > 1.0 - 1e-12) z *= (1.0 - 1e-12) / m;
      BerezinValue b = berezin_numerator(mu, w, z, spec);
      ok = ok && b.converged;
      return b.numerator;
    };
    q = integrate_region(g, FullDisc{}, w, spec);
  }
  out.trace_integral = q.value;
  out.converged = ok && q.converged;
  out.relative_gap = std::abs(out.trace_matrix - out.trace_integral) /
                     std::max(std::abs(out.trace_integral), std::numeric_limits<double>::min());
  return out;
}

ExponentPair::ExponentPair(double p_, double q_) : p(p_), q(q_) {
  if (!(p > 1.0 && q > 1.0 && std::isfinite(p) && std::isfinite(q))) throw DomainError("exponents must lie in (1, inf)");
}

double ExponentPair::schatten_dual_exponent() const {
  if (!(q < p)) throw DomainError("schatten_dual_exponent requires q < p");
  return p * q / (p - q);
}

LevelTrail level_integral(const PolarFn& f, const RadialFn& density, int j_max, bool radial, const TrailRule& rule) {
  if (j_max < 1 || j_max > 40) throw DomainError("level_integral: j_max must lie in [1, 40]");
  const GaussRule& gl = gauss_legendre(16);
  LevelTrail out;
  double acc = 0.0;
  for (int j = 1; j <= j_max; ++j) {
    const double t0 = (j - 1) * std::log(2.0);
    const double t1 = j * std::log(2.0);
    const int angles = radial ? 1 : std::clamp(1 << std::min(j + 4, 12), 64, 4096);
    double band = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
      const double t = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * gl.nodes[i];
      const double omr = std::exp(-t);
      const double r = -std::expm1(-t);
      const double d = density(r, omr);
      if (d == 0.0) continue;
      double mean = 0.0;
      for (int k = 0; k < angles; ++k) mean += f(r, omr, 2.0 * kPi * (k + 0.5) / angles);
      mean /= angles;
      // dA = r dr dtheta / pi, dr = (1 - r) dt
      band += gl.weights[i] * 0.5 * (t1 - t0) * 2.0 * mean * d * r * omr;
    }
    if (!std::isfinite(band)) out.converged = false;
    acc += band;
    out.levels.push_back(j);
    out.partials.push_back(acc);
  }
  out.verdict = classify_trail(out.partials, rule);
  return out;
}

namespace {

// Running maximum over levels of per-level values.
std::vector<double> running_max(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double m = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = m = std::max(m, v[i]);
  return out;
}

std::vector<double> tail_sup(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double m = 0.0;
  for (std::size_t i = v.size(); i-- > 0;) out[i] = m = std::max(m, v[i]);
  return out;
}

// Tails vanish operationally when they reach zero or shrink by at least 5%
// per level over the last four levels.
bool tails_vanish(const std::vector<double>& tail) {
  if (tail.empty()) return false;
  if (tail.back() == 0.0) return true;
  if (tail.size() < 5) return false;
  for (std::size_t i = tail.size() - 4; i < tail.size(); ++i) {
    if (!(tail[i] <= 0.95 * tail[i - 1])) return false;
  }
  return true;
}

std::string pattern(bool a, bool b, const char* yes, const char* no) {
  if (a && b) return yes;
  if (!a && !b) return no;
  return "mixed";
}

// mu_hat_r with the denominator cached per radius; non-radial measures take
// the numerator from their region mass.
class MuHat {
 public:
  MuHat(const Measure& mu, const RadialWeight& w, double r, const QuadSpec& spec) : mu_(mu), w_(w), r_(r), spec_(spec) {}

  double operator()(double rho, double omr, double theta) {
    if (mu_.is_radial() && mu_.kind() == Measure::Kind::radial_density) return mu_hat_r_radial(mu_, w_, rho, omr, r_, spec_);
    if (rho != last_rho_) {
      RadialFn wd = [this](double s, double oms) { return w_.density(s, oms); };
      denom_ = pseudo_disc_radial_integral(wd, rho, omr, r_, spec_).value;
      last_rho_ = rho;
    }
    if (!(denom_ > 0.0)) throw PrecisionError("mu_hat_r: omega(Delta(z, r)) vanishes");
    return mu_.mass(Region{pseudo_disc(std::polar(rho, theta), r_)}, spec_).value / denom_;
  }

 private:
  const Measure& mu_;
  const RadialWeight& w_;
  double r_;
  QuadSpec spec_;
  double last_rho_ = -1.0;
  double denom_ = 0.0;
};

CriterionQuantity quantity(std::string name, const LevelTrail& t, double root = 1.0) {
  CriterionQuantity q;
  q.name = std::move(name);
  q.trail = t.partials;
  q.verdict = t.verdict;
  q.value = root == 1.0 ? t.value() : std::pow(t.value(), 1.0 / root);
  return q;
}

}  // namespace

CriterionReport criteria_report_pq(const Measure& mu, const RadialWeight& w, const ExponentPair& pq, double r,
                                   const CenterGrid& grid, const QuadSpec& spec) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("pseudohyperbolic radius must lie in (0, 1)");
  grid.validate();
  CriterionReport rep;
  rep.exponents = pq;
  rep.r = r;
  rep.weight = w.label();
  rep.measure = mu.label();
  for (int j = grid.j_min; j <= grid.j_max; ++j) rep.levels.push_back(j);

  // (a) Berezin transform against omega(S)^{berezin_exponent}.
  const double be = pq.berezin_exponent();
  std::vector<double> level_sup(rep.levels.size(), 0.0);
  double sup = 0.0;
  for (const auto& [level, a] : grid_centers(grid, mu.is_radial())) {
    const double v = berezin(mu, w, a, spec) / std::pow(w.box_mass(std::abs(a)), be);
    auto& slot = level_sup[static_cast<std::size_t>(level - grid.j_min)];
    slot = std::max(slot, v);
    sup = std::max(sup, v);
  }
  rep.berezin_sup.name = "berezin_sup";
  rep.berezin_sup.trail = running_max(level_sup);
  rep.berezin_sup.value = sup;
  rep.berezin_sup.verdict = classify_trail(rep.berezin_sup.trail);
  rep.berezin_vanishing_tail = tail_sup(level_sup);

  // (b) Carleson ratio at the carleson exponent.
  rep.carleson = carleson_constant(mu, w, pq.carleson_exponent(), grid, spec);
  rep.carleson_sup.name = "carleson_sup";
  rep.carleson_sup.trail = running_max(rep.carleson.level_sup);
  rep.carleson_sup.value = rep.carleson.sup_value;
  rep.carleson_sup.verdict = classify_trail(rep.carleson_sup.trail);

  rep.bounded_verdict = pattern(rep.berezin_sup.finite(), rep.carleson_sup.finite(), "bounded", "unbounded");
  if (rep.bounded_verdict == "mixed") rep.warnings.push_back("Berezin and Carleson quantities disagree on finiteness");
  rep.compact_verdict =
      pattern(tails_vanish(rep.berezin_vanishing_tail), tails_vanish(rep.carleson.vanishing_tail), "compact", "not compact");
  if (rep.compact_verdict == "mixed") rep.warnings.push_back("vanishing tails disagree");

  // (c) q < p: L^s_omega norms with s = pq / (p - q).
  rep.dual_verdict = "n/a";
  if (pq.q < pq.p) {
    const double s = pq.schatten_dual_exponent();
    const bool radial = mu.is_radial();
    RadialFn wd = [&w](double x, double omx) { return w.density(x, omx); };
    MuHat muhat(mu, w, r, spec);
    PolarFn fm = [&](double rho, double omr, double theta) { return std::pow(muhat(rho, omr, theta), s); };
    PolarFn fb = [&](double rho, double, double theta) {
      return std::pow(berezin(mu, w, std::polar(rho, theta), spec), s);
    };
    rep.mu_hat_norm = quantity("mu_hat_norm", level_integral(fm, wd, grid.j_max, radial), s);
    rep.berezin_norm = quantity("berezin_norm", level_integral(fb, wd, grid.j_max, radial), s);
    rep.dual_verdict = pattern(rep.mu_hat_norm->finite(), rep.berezin_norm->finite(), "finite", "diverging");
    if (rep.dual_verdict == "mixed") rep.warnings.push_back("L^s norms of mu_hat_r and the Berezin transform disagree");
    if (rep.dual_verdict == "finite" && rep.berezin_norm->value > 0.0)
      rep.norm_ratio = rep.mu_hat_norm->value / rep.berezin_norm->value;
  }
  return rep;
}

namespace {

// Dyadic sum per level for radial densities: 2^n cells share the ring mass.
std::vector<double> dyadic_levels_radial(const Measure& mu, const RadialWeight& w, double p, int n_max,
                                         const QuadSpec& spec) {
  std::vector<double> out;
  for (int n = 0; n <= n_max; ++n) {
    const DyadicRectangle cell = dyadic_rectangle(n, 0);
    const double ring = mu.mass(Region{Annulus{cell.r_inner, cell.r_outer}}, spec).value;
    const double cells = n == 0 ? 1.0 : std::ldexp(1.0, n);
    const double zm = std::abs(cell.center);
    out.push_back(cells * std::pow(ring / cells / w.star(zm), p));
  }
  return out;
}

std::vector<double> dyadic_levels_general(const Measure& mu, const RadialWeight& w, double p, int n_max,
                                          const QuadSpec& spec, Warnings& warnings) {
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (mu.kind() == Measure::Kind::point_masses) {
    std::map<std::pair<int, std::int64_t>, double> cells;
    for (const Atom& a : mu.atoms()) {
      const DyadicRectangle d = dyadic_cell(a.location);
      if (d.level <= n_max) cells[{d.level, d.index}] += a.mass;
    }
    for (const auto& [key, m] : cells) {
      const DyadicRectangle d = dyadic_rectangle(key.first, key.second);
      out[static_cast<std::size_t>(key.first)] += std::pow(m / w.star(std::abs(d.center)), p);
    }
    return out;
  }
  const int depth = std::min(n_max, 10);
  if (depth < n_max) warnings.push_back("dyadic sum for non-radial densities truncated at level 10");
  out.resize(static_cast<std::size_t>(depth) + 1);
  for (const DyadicRectangle& d : dyadic_rectangles(depth)) {
    const double m = mu.mass(Region{d}, spec).value;
    out[static_cast<std::size_t>(d.level)] += std::pow(m / w.star(std::abs(d.center)), p);
  }
  return out;
}

}  // namespace

SchattenReport schatten_report(const Measure& mu, const RadialWeight& w, double p, const SchattenReportOptions& opt,
                               const QuadSpec& spec) {
  if (!(p > 0.0)) throw DomainError("Schatten exponent must be positive");
  if (!(opt.r > 0.0 && opt.r < 1.0)) throw DomainError("pseudohyperbolic radius must lie in (0, 1)");
  SchattenReport rep;
  rep.p = p;
  rep.weight = w.label();
  rep.measure = mu.label();
  rep.cell_convention =
      "level 0 is the disc |z| < 1/2 with z = 1/2; level n >= 1 are the 2^n cells of the band "
      "1 - 2^-n <= |z| < 1 - 2^-(n+1), each with the midpoint of its inner edge as z";

  // (i) dyadic sum.
  const bool radial = mu.is_radial() && mu.kind() == Measure::Kind::radial_density;
  const std::vector<double> per_level =
      radial ? dyadic_levels_radial(mu, w, p, opt.n_max_dyadic, spec) : dyadic_levels_general(mu, w, p, opt.n_max_dyadic, spec, rep.warnings);
  rep.dyadic_sum.name = "dyadic_sum";
  double acc = 0.0;
  for (double v : per_level) rep.dyadic_sum.trail.push_back(acc += v);
  rep.dyadic_sum.value = acc;
  rep.dyadic_sum.verdict = classify_trail(rep.dyadic_sum.trail);

  // (ii) pseudohyperbolic averages against dA / (1 - |z|)^2.
  RadialFn weight_total = [](double, double omx) { return 1.0 / (omx * omx); };
  PolarFn fii = [&](double rho, double omr, double theta) {
    double num;
    if (radial) {
      num = pseudo_disc_radial_integral(mu.radial_density_fn(), rho, omr, opt.r, spec).value;
    } else {
      num = mu.mass(Region{pseudo_disc(std::polar(rho, theta), opt.r)}, spec).value;
    }
    return std::pow(num / w.star(rho, omr), p);
  };
  rep.pseudo_integral = quantity("pseudo_integral", level_integral(fii, weight_total, opt.j_max, mu.is_radial()));

  // (iii) Berezin transform in L^p_{omega / omega_star}.
  RadialFn ratio = [&w](double x, double omx) { return w.density(x, omx) / w.star(x, omx); };
  PolarFn fiii = [&](double rho, double, double theta) {
    return std::pow(berezin(mu, w, std::polar(rho, theta), spec), p);
  };
  rep.berezin_integral = quantity("berezin_integral", level_integral(fiii, ratio, opt.j_max, mu.is_radial()));

  // Cut-off weight (omega_star)^p / (1 - r)^2.
  try {
    RadialWeight cut = RadialWeight::user(
        [w, p](double x, double omx) {
          if (x <= 0.0) return 0.0;
          const double st = w.star(x, omx);
          return st > 0.0 ? std::exp(p * std::log(st) - 2.0 * std::log(omx)) : 0.0;
        },
        "cutoff(" + w.label() + ")");
    rep.cutoff_regular = classify(cut).regular;
  } catch (const std::exception& e) {
    rep.cutoff_regular = false;
    rep.warnings.push_back(std::string("cut-off weight could not be classified: ") + e.what());
  }
  rep.berezin_applicable = rep.cutoff_regular && classify(w).regular;
  if (!rep.berezin_applicable) rep.warnings.push_back("Berezin branch not applicable: weight or cut-off weight not regular");
  return rep;
}

CriterionQuantity berezin_hyperbolic_integral(const Measure& mu, const RadialWeight& w, int j_max, const QuadSpec& spec) {
  RadialFn weight_total = [](double, double omx) { return 1.0 / (omx * omx); };
  PolarFn f = [&](double rho, double, double theta) { return berezin(mu, w, std::polar(rho, theta), spec); };
  return quantity("berezin_hyperbolic_integral", level_integral(f, weight_total, j_max, mu.is_radial()));
}

QuadResult maximal_projection(const DiscFn& f, const RadialWeight& w, Complex z, const QuadSpec& spec) {
  if (!(std::abs(z) < 1.0)) throw DomainError("maximal_projection requires |z| < 1");
  const KernelSeries kernel(w);
  DiscFn g = [&](Complex zeta) {
    const double v = f(zeta);
    if (v < 0.0) throw DomainError("maximal_projection requires f >= 0");
    return v == 0.0 ? 0.0 : v * std::abs(kernel.value(z, zeta));
  };
  return integrate_region(g, FullDisc{}, w, spec);
}

Measure averaged_measure(const Measure& mu, const RadialWeight& w, double r, const QuadSpec& spec) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("pseudohyperbolic radius must lie in (0, 1)");
  const std::string label = "mu_hat_" + format_number(r) + "(" + mu.label() + ")";
  if (mu.is_radial() && mu.kind() == Measure::Kind::radial_density) {
    return Measure::radial_density(
        [mu, w, r, spec](double rho, double omr) {
          const double d = w.density(rho, omr);
          if (d == 0.0) return 0.0;
          // Pseudo-disc masses underflow deep in the boundary layer; the average is frozen there.
          const double o = std::max(omr, 1e-100);
          return mu_hat_r_radial(mu, w, 1.0 - o, o, r, spec) * d;
        },
        label);
  }
  return Measure::area_density([mu, w, r, spec](Complex z) { return mu_hat_r(mu, w, z, r, spec) * w.density(std::abs(z)); },
                               label);
}

double quadratic_form(const OperatorMatrix& T, const Eigen::VectorXcd& f) {
  if (T.rows() != T.cols() || T.cols() != f.size()) throw DomainError("quadratic_form: size mismatch");
  return (f.adjoint() * T.entries * f)(0, 0).real();
}

DominationCheck domination_check(const Measure& mu, const RadialWeight& w, double r, int N, int vectors, unsigned seed,
                                 const QuadSpec& spec) {
  const OperatorMatrix A = toeplitz_matrix(mu, w, N, spec);
  const OperatorMatrix B = toeplitz_matrix(averaged_measure(mu, w, r, spec), w, N, spec);
  DominationCheck out;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXcd> solver(A.entries, B.entries, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw PrecisionError("domination_check: averaged Toeplitz matrix is not positive definite");
  out.fitted_constant = solver.eigenvalues().maxCoeff();
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  for (int i = 0; i < vectors; ++i) {
    Eigen::VectorXcd f(N);
    for (int n = 0; n < N; ++n) f(n) = Complex(normal(rng), normal(rng));
    const double ratio = quadratic_form(A, f) / quadratic_form(B, f);
    out.max_ratio = std::max(out.max_ratio, ratio);
    if (ratio > out.fitted_constant * (1.0 + 1e-12)) ++out.violations;
    ++out.vectors;
  }
  return out;
}

}  // namespace bergman
