#pragma once
// Planar geometry primitives shared by every module: points, dipoles, and
// the raw two-species charge configuration living in a square box.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace cgas {

using Point = Eigen::Vector2d;

// A matched pair: positive charge at x, negative charge at y.
struct Dipole {
  Point x;
  Point y;

  double length() const { return (x - y).norm(); }
  Point vec() const { return x - y; }          // dipole vector r = x - y
  Point midpoint() const { return 0.5 * (x + y); }

  // Reflect both charges about the midpoint (swaps the roles of x and y).
  Dipole reversed() const { return Dipole{y, x}; }
};

// Smallest distance between the charge sets {a.x, a.y} and {b.x, b.y}.
double dipole_pair_distance(const Dipole& a, const Dipole& b);

// N positive charges xs and N negative charges ys. box_side records the
// side of the square the sampler works in; geometric operations accept any
// finite coordinates, so validation only enforces consistency and the
// genericity requirement (no two coincident charge positions).
struct ChargeConfiguration {
  std::vector<Point> xs;
  std::vector<Point> ys;
  double box_side = 0.0;

  int n() const { return static_cast<int>(xs.size()); }

  // Throws invalid_param on size mismatch, empty input, non-finite
  // coordinates or a non-positive box, and degenerate_input on exactly
  // coincident charges.
  void validate() const;
};

}  // namespace cgas
