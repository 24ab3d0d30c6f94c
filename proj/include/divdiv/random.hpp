#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "divdiv/types.hpp"

namespace divdiv {

/// Smallest interior angle of a triangle, in radians.
inline double min_angle(const Triangle& t) {
  double m = M_PI;
  for (int i = 0; i < 3; ++i) {
    const Vec2 a = t.v[(i + 1) % 3] - t.v[i], b = t.v[(i + 2) % 3] - t.v[i];
    m = std::min(m, std::acos(std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0)));
  }
  return m;
}

/// Counterclockwise triangle with all angles >= min_angle_deg, random size in
/// [1e-2, 10] and random position.
inline Triangle random_triangle(std::mt19937& rng, double min_angle_deg = 15.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (;;) {
    const double s = std::pow(10.0, -2.0 + 3.0 * u(rng));
    const Vec2 o(10.0 * u(rng) - 5.0, 10.0 * u(rng) - 5.0);
    Triangle t{{o + s * Vec2(u(rng), u(rng)), o + s * Vec2(u(rng), u(rng)), o + s * Vec2(u(rng), u(rng))}};
    if (t.signed_area() < 0) std::swap(t.v[1], t.v[2]);
    if (min_angle(t) >= min_angle_deg * M_PI / 180.0) return t;
  }
}

}  // namespace divdiv
