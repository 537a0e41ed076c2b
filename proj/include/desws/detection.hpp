// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "desws/geometry.hpp"

namespace desws {

/// Output of an upstream detector: class, box, confidence in [0, 1].
struct Detection {
  std::string class_label;
  BBox box;
  double confidence = 1.0;

  friend bool operator==(const Detection&, const Detection&) = default;
};

/// Evaluation reference: class plus box, no confidence.
struct GroundTruth {
  std::string class_label;
  BBox box;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

}  // namespace desws
