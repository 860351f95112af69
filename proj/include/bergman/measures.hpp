#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bergman/geometry.hpp"
#include "bergman/moments.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/region_quadrature.hpp"
#include "bergman/symbol.hpp"
#include "bergman/weights.hpp"

namespace bergman {

struct Atom {
  Complex location;
  double mass = 0.0;
};

struct MassEstimate {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

namespace detail {
struct MeasureImpl;
}

// Positive Borel measure on the disc. Densities are taken with respect to
// the normalized area measure dA = dx dy / pi.
class Measure {
 public:
  enum class Kind { point_masses, radial_density, area_density, pullback };

  static Measure point_masses(std::vector<Atom> atoms);
  static Measure point_mass(Complex location, double mass = 1.0) { return point_masses({{location, mass}}); }
  // Density v(r, 1 - r) vanishing for r >= support_radius.
  static Measure radial_density(RadialFn density, std::string label, double support_radius = 1.0);
  // scale * omega dA restricted to |z| < support_radius.
  static Measure weighted(const RadialWeight& w, double scale = 1.0, double support_radius = 1.0);
  // factor(r, 1 - r) * omega(r) dA.
  static Measure weighted_by(const RadialWeight& w, RadialFn factor, std::string label, double support_radius = 1.0);
  static Measure area_density(DiscFn density, std::string label, double support_radius = 1.0);
  // mu(E) = omega(phi^{-1}(E)).
  static Measure pullback(const Symbol& phi, const RadialWeight& w);

  Kind kind() const;
  const std::string& label() const;
  // Radial densities and a single atom at the origin.
  bool is_radial() const;
  double support_radius() const;
  bool compactly_supported() const { return support_radius() < 1.0; }
  Measure scaled(double t) const;

  // Variant data.
  const std::vector<Atom>& atoms() const;
  double radial_density_at(double r, double one_minus_r) const;
  const RadialFn& radial_density_fn() const;
  double area_density_at(Complex z) const;
  const Symbol& symbol() const;
  const RadialWeight& base_weight() const;
  // When the measure equals scale * omega dA on the whole disc.
  std::optional<std::pair<RadialWeight, double>> weight_multiple() const;

  // m_k = \int_0^1 r^k v(r) dr for radial densities; for these,
  // \int |zeta|^{2n} dmu = 2 m_{2n+1}.
  const MomentSequence& radial_moments() const;
  // \int_r^1 v(s) s ds for radial densities.
  double radial_first_moment_tail(double r) const;

  MassEstimate mass(const Region& region, const QuadSpec& spec = {}) const;
  // \int g dmu.
  QuadResult integrate(const DiscFn& g, const QuadSpec& spec = {}) const;

 private:
  explicit Measure(std::shared_ptr<const detail::MeasureImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::MeasureImpl> impl_;
};

MassEstimate mass(const Measure& mu, const Region& region, const QuadSpec& spec = {});

// mu(Delta(z, r)) / omega(Delta(z, r)).
double mu_hat_r(const Measure& mu, const RadialWeight& w, Complex z, double r, const QuadSpec& spec = {});
// Same for a radial measure at |z| = rho, with 1 - rho passed separately.
double mu_hat_r_radial(const Measure& mu, const RadialWeight& w, double rho, double one_minus_rho, double r,
                       const QuadSpec& spec = {});

struct CenterGrid {
  int j_min = 1;
  int j_max = 14;            // centers a = (1 - 2^{-j}) e^{i theta}
  int max_angle_bits = 8;    // 2^{min(j, max_angle_bits)} angles per level
  bool radial_shortcut = true;  // one angle per level for radial measures
  std::vector<Complex> extra_centers;

  void validate() const;
};

struct CarlesonConstant {
  double gamma = 1.0;
  double sup_value = 0.0;
  Complex argmax_center;
  CenterGrid grid;
  std::vector<int> levels;
  std::vector<double> level_sup;       // sup over centers of each level
  std::vector<double> vanishing_tail;  // sup over centers with |I| <= 2^{-j}
  std::size_t centers_evaluated = 0;
};

// Centers of the boundary-refined grid, level by level (extra centers are
// attached to the level of their modulus).
std::vector<std::pair<int, Complex>> grid_centers(const CenterGrid& grid, bool radial);

CarlesonConstant carleson_constant(const Measure& mu, const RadialWeight& w, double gamma,
                                   const CenterGrid& grid = {}, const QuadSpec& spec = {});

// Pullback mass by ray decomposition: on each ray the set of radii mapped
// into the region is found by sampling and bisection; angular cells are
// bracketed by their edge rays.
MassEstimate pullback_mass(const Symbol& phi, const RadialWeight& w, const Region& region, int rays = 2048);

}  // namespace bergman
