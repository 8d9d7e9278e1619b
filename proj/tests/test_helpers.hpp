#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "curvlab/multiplier.hpp"
#include "curvlab/quotient.hpp"

namespace curvlab::testing {

inline PolyC pc(Complex c) { return PolyC::constant(1, c); }
inline PolyC pz() { return PolyC::variable(1, 0); }

// The recurring symbols of the test matrix.
inline MatrixMultiplier theta_1_z() { return MatrixMultiplier::column({pc(1.0), pz()}); }
inline MatrixMultiplier theta_z_1() { return MatrixMultiplier::column({pz(), pc(1.0)}); }
inline MatrixMultiplier theta_1_z2() {
  return MatrixMultiplier::column({pc(1.0), pz() * pz()});
}
inline MatrixMultiplier theta_1_0() { return MatrixMultiplier::column({pc(1.0), pc(0.0)}); }
inline MatrixMultiplier theta_z_1mz() {
  return MatrixMultiplier::column({pz(), pc(1.0) - pz()});
}
inline MatrixMultiplier theta_z_z2() {
  return MatrixMultiplier::column({pz(), pz() * pz()});
}

// p = 2, q = 3 pattern [[1,0],[0,1],[z,z^2]].
inline MatrixMultiplier theta_p2q3() {
  auto m = MatrixMultiplier::zero(3, 2, 1);
  m.at(0, 0) = pc(1.0);
  m.at(1, 1) = pc(1.0);
  m.at(2, 0) = pz();
  m.at(2, 1) = pz() * pz();
  return m;
}

inline std::vector<Point> coarse_disk_grid(double r_max = 0.8, int radial = 6, int angular = 12) {
  GridSpec grid;
  grid.type = GridSpec::Type::disk;
  grid.r_max = r_max;
  grid.radial = radial;
  grid.angular = angular;
  return grid.generate();
}

inline std::vector<Point> random_disk_points(int count, double r_max, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  pts.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double r = r_max * std::sqrt(unit(rng));
    const double th = 2.0 * std::numbers::pi * unit(rng);
    pts.emplace_back(Point{std::polar(r, th)});
  }
  return pts;
}

}  // namespace curvlab::testing
