// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "desws/geometry.hpp"

namespace testutil {

/// |a - b| <= tol * max(1, |a|, |b|): relative comparison that degrades to
/// absolute near zero.
inline bool close(double a, double b, double tol) {
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  return std::abs(a - b) <= tol * scale;
}

/// Random box with strictly positive width and height.
inline desws::BBox random_box(std::mt19937_64& rng, double lo = -100.0,
                              double hi = 100.0) {
  std::uniform_real_distribution<double> coord(lo, hi);
  std::uniform_real_distribution<double> extent(0.5, 0.25 * (hi - lo));
  const double x = coord(rng);
  const double y = coord(rng);
  return desws::BBox(x, y, x + extent(rng), y + extent(rng));
}

}  // namespace testutil
