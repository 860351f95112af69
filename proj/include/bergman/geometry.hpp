#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "bergman/common.hpp"

namespace bergman {

// Reduces an angle to [0, 2 pi).
double wrap_angle(double theta);

struct Arc {
  double center_angle = 0.0;
  double width = 2.0 * kPi;  // radians, in (0, 2 pi]

  double begin_angle() const { return center_angle - width / 2.0; }
  bool contains_angle(double theta) const;
};

struct CarlesonSquare {
  Arc arc;
  double inner_radius = 0.0;  // 1 - width (clamped at 0)

  bool contains(Complex z) const;
};

struct DyadicRectangle {
  int level = 0;
  std::int64_t index = 0;
  Complex center;             // z_I
  double r_inner = 0.0;
  double r_outer = 0.5;
  double theta_begin = 0.0;
  double theta_end = 2.0 * kPi;

  bool contains(Complex z) const;
};

struct PseudoDisc {
  Complex center;
  double radius = 0.0;  // pseudohyperbolic
  Complex euclid_center;
  double euclid_radius = 0.0;

  bool contains(Complex z) const;
};

struct Annulus {
  double r_inner = 0.0;
  double r_outer = 1.0;

  bool contains(Complex z) const;
};

struct FullDisc {
  bool contains(Complex z) const { return std::abs(z) < 1.0; }
};

using Region = std::variant<FullDisc, Annulus, CarlesonSquare, PseudoDisc, DyadicRectangle>;

bool region_contains(const Region& region, Complex z);
// Normalized area dA = dx dy / pi of the region.
double region_area(const Region& region);
std::string region_name(const Region& region);

// |a - z| / |1 - conj(a) z|.
double pseudo_distance(Complex a, Complex z);
// phi_a(z) = (a - z) / (1 - conj(a) z).
Complex mobius(Complex a, Complex z);

PseudoDisc pseudo_disc(Complex a, double r);

Arc interval_of(Complex a);
CarlesonSquare carleson_square(Complex a);
CarlesonSquare carleson_square(const Arc& arc);

// a_delta = (1 - delta (1 - |a|)) e^{i arg a}.
Complex boundary_point(Complex a, double delta);

// Level 0 is the disc {|z| < 1/2} with center 1/2; level n >= 1 has 2^n
// cells with band [1 - 2^{-n}, 1 - 2^{-n-1}) and center (1 - 2^{-n}) xi.
DyadicRectangle dyadic_rectangle(int level, std::int64_t index);
std::vector<DyadicRectangle> dyadic_rectangles(int n_max);
// Cell containing z.
DyadicRectangle dyadic_cell(Complex z);

struct Lattice {
  std::vector<Complex> points;
  double delta = 0.0;
  int depth = 0;                 // rings fill |z| < 1 - 2^{-depth}
  double outer_radius = 0.0;     // radius of the outermost ring
  double min_separation = 0.0;   // exact minimum pseudohyperbolic separation
  double covering_bound = 0.0;   // bound on the covering radius inside outer_radius
};

// Rings at pseudohyperbolic spacing delta, tanh(k atanh(delta)), each with
// equispaced points at angular spacing about delta (1 - r^2) / r.
Lattice delta_lattice(double delta, int depth = 8, std::size_t point_budget = 4'000'000);

}  // namespace bergman
