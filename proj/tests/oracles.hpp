#pragma once

// Brute-force reference computations shared by the unit and acceptance tests.

#include <cmath>
#include <numbers>

#include "ngca/common.hpp"

namespace ngca::oracle {

// min over orthogonal 1x1 or 2x2 Q of ||E Q - R||_F: a fine angle grid over
// rotations and reflections, then golden-section polish around the best cell.
inline double procrustes_distance(const Matrix& E, const Matrix& R) {
  const Index k = E.cols();
  if (k == 1) return std::min((E - R).norm(), (E + R).norm());

  auto cost = [&](double t, bool reflect) {
    Matrix Q(2, 2);
    const double c = std::cos(t), s = std::sin(t);
    if (reflect) Q << c, s, s, -c;
    else Q << c, -s, s, c;
    return (E * Q - R).norm();
  };
  const int steps = 20000;
  const double two_pi = 2.0 * std::numbers::pi;
  double best = 1e300;
  for (bool reflect : {false, true}) {
    double arg = 0.0, low = 1e300;
    for (int i = 0; i < steps; ++i) {
      const double t = two_pi * i / steps;
      const double v = cost(t, reflect);
      if (v < low) low = v, arg = t;
    }
    double a = arg - two_pi / steps, b = arg + two_pi / steps;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
      const double x1 = b - g * (b - a), x2 = a + g * (b - a);
      if (cost(x1, reflect) < cost(x2, reflect)) b = x2;
      else a = x1;
    }
    best = std::min({best, low, cost(0.5 * (a + b), reflect)});
  }
  return best;
}

}  // namespace ngca::oracle
