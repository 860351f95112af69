#include "doctest.h"

#include <cmath>
#include <random>

#include "bergman/geometry.hpp"
#include "bergman/kernels.hpp"

using namespace bergman;
using doctest::Approx;

TEST_CASE("kernel at the origin is 1 / (2 omega_1)") {
  for (const RadialWeight& w : {RadialWeight::standard(0.0), RadialWeight::log_weight(3.0), RadialWeight::exponential(1.0)}) {
    const KernelValue v = kernel_eval(w, Complex(0.4, 0.3), 0.0);
    CHECK(v.value.real() == Approx(1.0 / (2.0 * w.moment(1))).epsilon(1e-14));
  }
  CHECK(kernel_eval(RadialWeight::standard(0.0), 0.9, 0.0).value.real() == Approx(1.0));
}

TEST_CASE("standard-weight closed form") {
  CHECK(kernel_eval(RadialWeight::standard(0.0), 0.5, 0.5).value.real() == Approx(16.0 / 9.0).epsilon(1e-13));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> rad(0.0, 0.95), ang(0.0, 2.0 * kPi);
  for (double alpha : {0.0, 1.0, 2.5}) {
    const RadialWeight w = RadialWeight::standard(alpha);
    const KernelSeries k(w);
    for (int i = 0; i < 20; ++i) {
      const Complex z = std::polar(rad(rng), ang(rng)), zeta = std::polar(rad(rng), ang(rng));
      const Complex u = 1.0 - std::conj(z) * zeta;
      const Complex exact = (alpha + 1.0) * std::pow(u, -(2.0 + alpha));
      const Complex d_exact = (alpha + 1.0) * (alpha + 2.0) * std::conj(z) * std::pow(u, -(3.0 + alpha));
      CHECK(std::abs(k.eval(z, zeta).value - exact) < 1e-10 * std::abs(exact));
      CHECK(std::abs(k.eval(z, zeta, 1).value - d_exact) < 1e-9 * std::abs(d_exact));
      CHECK(std::abs(k.value(z, zeta) - exact) < 1e-13 * std::abs(exact));
    }
  }
}

TEST_CASE("Hermitian symmetry") {
  const KernelSeries k(RadialWeight::log_weight(2.5));
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> rad(0.0, 0.9), ang(0.0, 2.0 * kPi);
  for (int i = 0; i < 20; ++i) {
    const Complex z = std::polar(rad(rng), ang(rng)), zeta = std::polar(rad(rng), ang(rng));
    const Complex a = k.eval(z, zeta).value, b = k.eval(zeta, z).value;
    CHECK(std::abs(a - std::conj(b)) < 1e-12 * std::abs(a));
  }
}

TEST_CASE("kernel diagonal") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  CHECK(kernel_diag(s0, 0.5) == Approx(16.0 / 9.0).epsilon(1e-13));
  CHECK(kernel_diag(RadialWeight::log_weight(3.0), 0.0) == Approx(1.0 / (2.0 * RadialWeight::log_weight(3.0).moment(1))));
  const RadialWeight s1 = RadialWeight::standard(1.0);
  double lo = 1e300, hi = 0.0;
  for (double m = 0.5; m <= 0.999; m += 0.001) {
    const double v = kernel_diag(s1, m) * s1.tail(m) * (1.0 - m);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 4.0);
  CHECK(KernelSeries(s1).diag_value(0.9) == Approx(KernelSeries(s1).diag(0.9)).epsilon(1e-12));
}

TEST_CASE("kernel norms") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  double lo = 1e300, hi = 0.0;
  for (double m : {0.5, 0.7, 0.9, 0.95, 0.99}) {
    const KernelNormEstimate e = kernel_norm(s0, s0, m, 2.0);
    CHECK(e.value_p == Approx(std::pow(1.0 - m * m, -2.0)).epsilon(1e-7));
    lo = std::min(lo, e.ratio);
    hi = std::max(hi, e.ratio);
  }
  CHECK(lo > 1.0 / 8.0);
  CHECK(hi < 8.0);
  const RadialWeight l3 = RadialWeight::log_weight(3.0);
  CHECK(kernel_norm(l3, l3, 0.7, 2.0).value_p == Approx(kernel_diag(l3, 0.7)).epsilon(1e-6));
}

TEST_CASE("normalized kernels") {
  const RadialWeight s0 = RadialWeight::standard(0.0);
  for (double m : {0.2, 0.6, 0.9}) {
    CHECK(std::abs(normalized_kernel_eval(s0, m, m)) == Approx(1.0 / (1.0 - m * m)).epsilon(1e-8));
  }
  // |b_z(z)| (omega_hat(z)(1 - |z|))^{1/p}, p in {1.5, 2, 3}, at a fixed point.
  const Complex z = 0.8;
  for (double p : {1.5, 2.0, 3.0}) {
    const double v = std::abs(normalized_kernel_eval(s0, z, z, p)) * std::pow(s0.tail(0.8) * 0.2, 1.0 / p);
    CHECK(v < 10.0);
    CHECK(v > 0.1);
  }
}

TEST_CASE("sup norm times box mass is bounded") {
  const RadialWeight s1 = RadialWeight::standard(1.0);
  double lo = 1e300, hi = 0.0;
  for (double m = 0.5; m <= 0.99; m += 0.01) {
    const double v = kernel_sup_norm(s1, m) * s1.box_mass(m);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 4.0);
}

TEST_CASE("locality probe") {
  const LocalityProbe p = kernel_locality_probe(RadialWeight::standard(0.0));
  CHECK(p.r_hat >= 0.2);
  for (std::size_t i = 1; i < p.c_values.size(); ++i) CHECK(p.c_values[i] <= p.c_values[i - 1] * (1.0 + 1e-12));
  // Closed form on the pseudo-disc boundary: |B_a(z)| / B_a(a) = (1 - |a|^2)^2 / |1 - conj(a) z|^2.
  const Complex a = 0.9;
  const PseudoDisc d = pseudo_disc(a, 0.2);
  const RadialWeight s0 = RadialWeight::standard(0.0);
  for (int k = 0; k < 8; ++k) {
    const Complex z = d.euclid_center + std::polar(d.euclid_radius, 2.0 * kPi * k / 8.0);
    const double ratio = std::abs(kernel_eval(s0, a, z).value) / kernel_diag(s0, a);
    CHECK(ratio == Approx(std::pow(1.0 - 0.81, 2) / std::norm(1.0 - std::conj(a) * z)).epsilon(1e-9));
    CHECK(ratio > 0.5);
    CHECK(ratio < 2.0);
  }
}

TEST_CASE("truncation budget") {
  const KernelSeries k(RadialWeight::standard(0.0));
  CHECK_THROWS(k.eval(1.0, 0.5));
  const std::size_t n = k.terms_for(0.25, 1e-12);
  CHECK(n > 10);
  CHECK(n < 40);
}
