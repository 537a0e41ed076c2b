// SPDX-License-Identifier: Apache-2.0
//
// Exact axis-aligned box arithmetic: areas, intersection-over-union, minimum
// enclosing rectangle, center distance, and the DIoU loss
//
//   loss = 1 - IoU + d_c^2 / diag^2
//
// where d_c is the distance between the two box centers and diag is the
// diagonal of the minimum rectangle enclosing both boxes. All operations are
// pure functions over immutable values and safe to call concurrently.
#pragma once

#include <algorithm>
#include <cmath>

#include "desws/errors.hpp"

namespace desws {

/// Axis-aligned rectangle in pixel coordinates, corner convention.
/// Coordinates are real-valued (sub-pixel positions are fine). Zero-width or
/// zero-height boxes are valid; negative extents and non-finite coordinates
/// are rejected at construction.
class BBox {
 public:
  BBox(double x_min, double y_min, double x_max, double y_max)
      : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
    if (!std::isfinite(x_min) || !std::isfinite(y_min) ||
        !std::isfinite(x_max) || !std::isfinite(y_max)) {
      throw InvalidBox("InvalidBox: coordinates must be finite");
    }
    if (x_max < x_min || y_max < y_min) {
      throw InvalidBox("InvalidBox: x_min <= x_max and y_min <= y_max required");
    }
  }

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }

  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }
  double center_x() const { return 0.5 * (x_min_ + x_max_); }
  double center_y() const { return 0.5 * (y_min_ + y_max_); }

  friend bool operator==(const BBox& a, const BBox& b) {
    return a.x_min_ == b.x_min_ && a.y_min_ == b.y_min_ &&
           a.x_max_ == b.x_max_ && a.y_max_ == b.y_max_;
  }

 private:
  double x_min_, y_min_, x_max_, y_max_;
};

/// Box area in pixel^2.
inline double area(const BBox& b) { return b.width() * b.height(); }

/// Intersection area of two boxes (0 when disjoint).
inline double intersection_area(const BBox& a, const BBox& b) {
  const double w = std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double h = std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

/// Intersection over union in [0, 1]. Two boxes with zero union area (both
/// degenerate) have IoU 0 by convention: degenerate boxes carry no overlap
/// evidence.
inline double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = area(a) + area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

/// Minimum axis-aligned rectangle containing both boxes.
inline BBox enclosing_rect(const BBox& a, const BBox& b) {
  return BBox(std::min(a.x_min(), b.x_min()), std::min(a.y_min(), b.y_min()),
              std::max(a.x_max(), b.x_max()), std::max(a.y_max(), b.y_max()));
}

/// All intermediate quantities of the DIoU loss, kept so callers can report
/// or test each term.
struct DiouBreakdown {
  double iou;                 ///< intersection over union, in [0, 1]
  double center_distance_sq;  ///< squared distance between box centers, px^2
  double enclosing_diag_sq;   ///< squared diagonal of the enclosing rect, px^2
  double loss;                ///< 1 - iou + center_distance_sq / enclosing_diag_sq
};

/// DIoU loss of a predicted box against a target box. Symmetric in its
/// arguments. Throws DegenerateGeometry when both boxes collapse to the same
/// point (the penalty ratio is 0/0 there).
inline DiouBreakdown diou_loss(const BBox& pred, const BBox& target) {
  const BBox encl = enclosing_rect(pred, target);
  const double w_union = encl.width();
  const double h_union = encl.height();
  const double diag_sq = w_union * w_union + h_union * h_union;
  if (diag_sq <= 0.0) {
    throw DegenerateGeometry(
        "DegenerateGeometry: both boxes are the same point; the DIoU center "
        "penalty is undefined");
  }
  const double dx = pred.center_x() - target.center_x();
  const double dy = pred.center_y() - target.center_y();
  const double dc_sq = dx * dx + dy * dy;
  const double iou_v = iou(pred, target);
  return DiouBreakdown{iou_v, dc_sq, diag_sq, 1.0 - iou_v + dc_sq / diag_sq};
}

}  // namespace desws
