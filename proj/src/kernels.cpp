#include "bergman/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bergman/geometry.hpp"
#include "fft.hpp"

namespace bergman {

namespace {

constexpr std::size_t kResync = 256;
constexpr std::size_t kMinTerms = 4;

void check_modulus(double q) {
  if (!(q < 1.0 - KernelSeries::kBoundaryMargin)) {
    std::ostringstream os;
    os << "kernel series: |conj(z) zeta| = " << q << " is too close to the boundary";
    throw PrecisionError(os.str());
  }
}

// Whether the geometric tail bound after term n is below the target.
bool tail_small(double term, double ratio_q, double sum, double rtol) {
  if (!(ratio_q < 1.0)) return false;
  return term * ratio_q / (1.0 - ratio_q) <= rtol * sum;
}

}  // namespace

KernelSeries::KernelSeries(RadialWeight w) : w_(std::move(w)) {}

double KernelSeries::coefficient(std::size_t n) const { return 0.5 / w_.moment(2 * n + 1); }

std::vector<Complex> KernelSeries::basis_coefficients(Complex z, std::size_t count) const {
  std::vector<Complex> out(count);
  const Complex zc = std::conj(z);
  Complex power(1.0, 0.0);
  for (std::size_t n = 0; n < count; ++n) {
    if (n % kResync == 0 && n > 0) power = std::polar(std::pow(std::abs(z), static_cast<double>(n)), -std::arg(z) * n);
    out[n] = power / std::sqrt(2.0 * w_.moment(2 * n + 1));
    power *= zc;
  }
  return out;
}

double KernelSeries::positive_series(double x, double rtol, std::size_t* terms) const {
  if (!(x >= 0.0)) throw DomainError("positive_series requires x >= 0");
  check_modulus(x);
  double sum = 0.0;
  double power = 1.0;
  const double log_x = x > 0.0 ? std::log(x) : 0.0;
  for (std::size_t n = 0; n < kMaxTerms; ++n) {
    if (n % kResync == 0 && n > 0) power = std::exp(log_x * static_cast<double>(n));
    const double c = coefficient(n);
    const double term = c * power;
    sum += term;
    if (x == 0.0) {
      if (terms) *terms = 1;
      return sum;
    }
    if (n >= kMinTerms) {
      const double ratio = coefficient(n + 1) / c;
      if (tail_small(term, x * ratio, sum, rtol)) {
        if (terms) *terms = n + 1;
        return sum;
      }
    }
    power *= x;
  }
  throw PrecisionError("kernel series: term budget exhausted");
}

std::size_t KernelSeries::terms_for(double x, double rtol) const {
  std::size_t n = 0;
  positive_series(x, rtol, &n);
  return n;
}

KernelValue KernelSeries::eval(Complex z, Complex zeta, int order, double rtol) const {
  if (order != 0 && order != 1) throw DomainError("kernel_eval supports order 0 or 1");
  if (!(std::abs(z) < 1.0 && std::abs(zeta) < 1.0)) throw DomainError("kernel_eval requires points in the disc");
  const Complex w = std::conj(z) * zeta;
  const double q = std::abs(w);
  check_modulus(q);
  KernelValue out;
  if (q == 0.0) {
    out.value = order == 0 ? Complex(coefficient(0), 0.0) : std::conj(z) * coefficient(1);
    out.terms = 1;
    return out;
  }
  const double log_q = std::log(q);
  const double phase = std::arg(w);
  // order 0: sum c_n w^n;  order 1: conj(z) sum_{n>=1} n c_n w^{n-1}.
  Complex sum(0.0, 0.0);
  double abs_sum = 0.0;
  Complex power(1.0, 0.0);
  for (std::size_t m = 0; m < kMaxTerms; ++m) {
    if (m % kResync == 0 && m > 0) power = std::polar(std::exp(log_q * static_cast<double>(m)), phase * static_cast<double>(m));
    const std::size_t n = order == 0 ? m : m + 1;
    const double scale = order == 0 ? 1.0 : static_cast<double>(n);
    const double c = coefficient(n) * scale;
    const Complex term = c * power;
    sum += term;
    const double abs_term = std::abs(term);
    abs_sum += abs_term;
    if (m >= kMinTerms) {
      const double next_scale = order == 0 ? 1.0 : static_cast<double>(n + 1);
      const double ratio = coefficient(n + 1) * next_scale / c;
      const double rq = q * ratio;
      // Relative to |sum|, but never tighter than cancellation allows.
      const double target = std::max(std::abs(sum), 1e-3 * abs_sum);
      if (tail_small(abs_term, rq, target, rtol)) {
        out.value = order == 0 ? sum : std::conj(z) * sum;
        out.error_estimate = abs_term * rq / (1.0 - rq) * (order == 0 ? 1.0 : std::abs(z));
        out.terms = m + 1;
        return out;
      }
    }
    power *= w;
  }
  throw PrecisionError("kernel series: term budget exhausted");
}

Complex KernelSeries::eval_truncated(Complex z, Complex zeta, std::size_t n_terms, int order) const {
  const Complex w = std::conj(z) * zeta;
  Complex sum(0.0, 0.0);
  Complex power(1.0, 0.0);
  for (std::size_t m = 0; m < n_terms; ++m) {
    const std::size_t n = order == 0 ? m : m + 1;
    const double scale = order == 0 ? 1.0 : static_cast<double>(n);
    sum += coefficient(n) * scale * power;
    power *= w;
  }
  return order == 0 ? sum : std::conj(z) * sum;
}

double KernelSeries::diag(double modulus, double rtol) const {
  if (!(modulus >= 0.0 && modulus < 1.0)) throw DomainError("kernel_diag requires |z| < 1");
  return positive_series(modulus * modulus, rtol);
}

Complex KernelSeries::value(Complex z, Complex zeta) const {
  if (w_.family() != WeightFamily::standard) return eval(z, zeta).value;
  if (!(std::abs(z) < 1.0 && std::abs(zeta) < 1.0)) throw DomainError("kernel_eval requires points in the disc");
  const double a = w_.parameter();
  return (a + 1.0) * std::pow(1.0 - std::conj(z) * zeta, -(2.0 + a));
}

double KernelSeries::diag_value(double modulus) const {
  if (w_.family() != WeightFamily::standard) return diag(modulus);
  if (!(modulus >= 0.0 && modulus < 1.0)) throw DomainError("kernel_diag requires |z| < 1");
  const double a = w_.parameter();
  return (a + 1.0) * std::pow((1.0 - modulus) * (1.0 + modulus), -(2.0 + a));
}

KernelValue kernel_eval(const RadialWeight& w, Complex z, Complex zeta, int order, double rtol) {
  return KernelSeries(w).eval(z, zeta, order, rtol);
}

double kernel_diag(const RadialWeight& w, Complex z) { return KernelSeries(w).diag(std::abs(z)); }

double angular_mean_power(const std::vector<double>& coefficients, double p, std::size_t grid_size) {
  if (grid_size == 0 || grid_size > (std::size_t{1} << 24)) throw DomainError("angular grid size out of range");
  std::vector<Complex> buf(grid_size, Complex(0.0, 0.0));
  for (std::size_t m = 0; m < coefficients.size(); ++m) buf[m % grid_size] += coefficients[m];
  detail::fft_inplace(buf, false);
  double acc = 0.0;
  for (const Complex& v : buf) acc += std::pow(std::abs(v), p);
  return acc / static_cast<double>(grid_size);
}

namespace {

std::size_t fft_size_for(double x, std::size_t terms) {
  const double want = std::max(64.0, 64.0 / std::max(1.0 - x, 1e-9));
  std::size_t k = 64;
  while (static_cast<double>(k) < want) k *= 2;
  // Folding handles any number of terms, but keep the grid at least as fine
  // as the band-limited part of the series.
  while (k < terms && k < (std::size_t{1} << 22)) k *= 2;
  return std::min(k, std::size_t{1} << 22);
}

}  // namespace

KernelNormEstimate kernel_norm(const RadialWeight& w, const RadialWeight& nu, Complex z, double p,
                               const QuadSpec& spec) {
  if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("kernel_norm requires 0 < p < inf");
  const double m = std::abs(z);
  if (!(m < 1.0)) throw DomainError("kernel_norm requires |z| < 1");
  KernelSeries series(w);
  KernelNormEstimate est;
  est.z = z;
  est.p = p;
  est.nu_label = nu.label();
  if (p == 2.0) {
    // Parseval: ||B_z||^2_{A^2_nu} = sum_n c_n^2 |z|^{2n} 2 nu_{2n+1}.
    const double x = m * m;
    check_modulus(x);
    double sum = 0.0;
    double power = 1.0;
    const double log_x = x > 0.0 ? std::log(x) : 0.0;
    bool done = false;
    for (std::size_t n = 0; n < KernelSeries::kMaxTerms; ++n) {
      if (n % kResync == 0 && n > 0) power = std::exp(log_x * static_cast<double>(n));
      const double c = series.coefficient(n);
      const double term = c * c * 2.0 * nu.moment(2 * n + 1) * power;
      sum += term;
      if (x == 0.0) {
        done = true;
        break;
      }
      if (n >= kMinTerms) {
        const double c1 = series.coefficient(n + 1);
        const double ratio = c1 * c1 * nu.moment(2 * n + 3) / (c * c * nu.moment(2 * n + 1));
        if (tail_small(term, x * ratio, sum, 1e-13)) {
          done = true;
          break;
        }
      }
      power *= x;
    }
    if (!done) throw PrecisionError("kernel_norm: term budget exhausted");
    est.value_p = sum;
  } else {
    bool inner_ok = true;
    // Radial integral of 2 rho nu(rho) M_p(|z| rho) in the boundary variable.
    RadialFn f = [&](double rho, double omr) {
      const double density = nu.density(rho, omr);
      if (density == 0.0) return 0.0;
      const double x = m * rho;
      std::size_t terms = 0;
      series.positive_series(x, 1e-15, &terms);
      std::vector<double> coeffs(terms);
      double power = 1.0;
      for (std::size_t n = 0; n < terms; ++n) {
        if (n % kResync == 0 && n > 0) power = std::pow(x, static_cast<double>(n));
        coeffs[n] = series.coefficient(n) * power;
        power *= x;
      }
      const std::size_t k = fft_size_for(x, terms);
      if (k >= (std::size_t{1} << 22)) inner_ok = false;
      return 2.0 * rho * density * angular_mean_power(coeffs, p, k);
    };
    QuadResult q = integrate_radial(f, 0.0, spec);
    est.value_p = q.value;
    est.converged = q.converged && inner_ok;
    if (!est.converged) est.warnings.push_back("kernel_norm: quadrature did not reach the requested tolerance");
  }
  est.value = std::pow(est.value_p, 1.0 / p);
  // Comparator \int_0^{|z|} nu_hat(t) / (omega_hat(t)^p (1 - t)^p) dt.
  if (m > 0.0) {
    RadialFn g = [&](double t, double omt) {
      return std::exp(nu.log_tail(t, omt) - p * w.log_tail(t, omt) - p * std::log(omt));
    };
    QuadResult th = integrate_radial(g, 0.0, m, spec);
    est.theory_value = th.value;
    est.theory_finite = std::isfinite(th.value);
    est.box_comparator = std::pow(w.box_mass(m), 1.0 - p);
  }
  if (!est.theory_finite) est.warnings.push_back("kernel_norm: comparator integral diverges");
  est.ratio = est.theory_value > 0.0 ? est.value_p / est.theory_value : std::numeric_limits<double>::infinity();
  return est;
}

double kernel_sup_norm(const RadialWeight& w, Complex z) {
  const double m = std::abs(z);
  if (!(m < 1.0)) throw DomainError("kernel_sup_norm requires |z| < 1");
  return KernelSeries(w).positive_series(m, 1e-13);
}

Complex normalized_kernel_eval(const RadialWeight& w, Complex z, Complex zeta, double p, const QuadSpec& spec) {
  KernelSeries series(w);
  const Complex value = series.eval(z, zeta).value;
  const double norm = p == 2.0 ? std::sqrt(series.diag(std::abs(z))) : kernel_norm(w, w, z, p, spec).value;
  return value / norm;
}

LocalityProbe kernel_locality_probe(const RadialWeight& w, const LocalityProbeGrid& grid) {
  if (grid.j_min < 1 || grid.j_max < grid.j_min || grid.j_max > 30) throw DomainError("probe grid levels out of range");
  if (grid.deltas.empty() || grid.pseudo_radii.empty()) throw DomainError("probe grid needs deltas and radii");
  KernelSeries series(w);
  LocalityProbe probe;
  probe.deltas = grid.deltas;
  std::sort(probe.deltas.begin(), probe.deltas.end());
  probe.pseudo_radii = grid.pseudo_radii;
  std::sort(probe.pseudo_radii.begin(), probe.pseudo_radii.end());

  double running = std::numeric_limits<double>::infinity();
  for (double delta : probe.deltas) {
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
      const double a = 1.0 - std::ldexp(1.0, -j);
      const double mass = w.box_mass(a);
      const double a_delta = 1.0 - delta * (1.0 - a);
      const double width = 1.0 - a_delta;
      for (int i = 0; i <= 10; ++i) {
        const double rho = 1.0 - width * std::ldexp(1.0, -i);
        for (int l = 0; l <= 8; ++l) {
          const double theta = width * (-0.5 + l / 8.0);
          const double v = std::abs(series.eval(Complex(a, 0.0), std::polar(rho, theta)).value);
          running = std::min(running, v * mass);
        }
      }
    }
    probe.c_values.push_back(running);
  }
  const double reference = probe.c_values.front();
  probe.delta_hat = probe.deltas.front();
  probe.c_hat = reference;
  for (std::size_t i = 0; i < probe.deltas.size(); ++i) {
    if (probe.c_values[i] >= grid.c_fraction * reference) {
      probe.delta_hat = probe.deltas[i];
      probe.c_hat = probe.c_values[i];
    }
  }

  bool passing = true;
  for (double r : probe.pseudo_radii) {
    double low = std::numeric_limits<double>::infinity();
    double high = 0.0;
    for (int j = grid.j_min; j <= grid.j_max; ++j) {
      const Complex a(1.0 - std::ldexp(1.0, -j), 0.0);
      const double at_center = series.diag(a.real());
      for (int s = 0; s < grid.boundary_samples; ++s) {
        const Complex z = mobius(a, std::polar(r, 2.0 * kPi * s / grid.boundary_samples));
        const double ratio = std::abs(series.eval(a, z).value) / at_center;
        low = std::min(low, ratio);
        high = std::max(high, ratio);
      }
    }
    probe.bracket_low.push_back(low);
    probe.bracket_high.push_back(high);
    passing = passing && low >= 0.5 && high <= 2.0;
    if (passing) probe.r_hat = r;
  }
  return probe;
}

}  // namespace bergman
