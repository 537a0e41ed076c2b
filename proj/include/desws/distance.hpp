// SPDX-License-Identifier: Apache-2.0
//
// Monocular distance estimation from a detection's pixel width via the
// similar-triangle pinhole proportion
//
//   f / D_obj = w_img / w_obj   =>   D_obj = f * w_obj / w_img
//
// with a per-class table of preset real-world widths. Width always means the
// horizontal (x) extent of the box; height is never used.
#pragma once

#include <cmath>
#include <map>
#include <string>

#include "desws/detection.hpp"
#include "desws/errors.hpp"

namespace desws {

/// Pinhole camera reduced to the one parameter the width proportion needs.
struct CameraModel {
  explicit CameraModel(double focal_length_px) : focal_length_px(focal_length_px) {
    if (!(std::isfinite(focal_length_px) && focal_length_px > 0.0)) {
      throw NonPositiveInput("NonPositiveInput: focal_length_px must be finite and > 0");
    }
  }
  double focal_length_px;
};

/// Map from class label to preset real-world width in meters.
class ClassWidthTable {
 public:
  ClassWidthTable() = default;

  /// Built-in table covering person, bicycle, car, motorcycle, bus, truck.
  /// Values are typical physical widths; override via the pipeline config
  /// when better ones are known.
  static ClassWidthTable defaults() {
    ClassWidthTable t;
    t.set("person", 0.5);
    t.set("bicycle", 0.6);
    t.set("car", 1.8);
    t.set("motorcycle", 0.8);
    t.set("bus", 2.5);
    t.set("truck", 2.5);
    return t;
  }

  void set(const std::string& class_label, double real_width_m) {
    if (!(std::isfinite(real_width_m) && real_width_m > 0.0)) {
      throw NonPositiveInput("NonPositiveInput: width for class '" + class_label +
                             "' must be finite and > 0");
    }
    widths_m_[class_label] = real_width_m;
  }

  bool contains(const std::string& class_label) const {
    return widths_m_.count(class_label) > 0;
  }

  /// Real width in meters; throws UnknownClass when absent.
  double width_m(const std::string& class_label) const {
    auto it = widths_m_.find(class_label);
    if (it == widths_m_.end()) throw UnknownClass(class_label);
    return it->second;
  }

  const std::map<std::string, double>& entries() const { return widths_m_; }

  friend bool operator==(const ClassWidthTable& a, const ClassWidthTable& b) {
    return a.widths_m_ == b.widths_m_;
  }

 private:
  std::map<std::string, double> widths_m_;
};

/// Per-detection distance estimate together with the inputs that produced it.
/// Invariant: distance_m * pixel_width == focal_length_px * real_width_m.
struct DistanceEstimate {
  std::string class_label;
  double pixel_width;   ///< w_img, box width in pixels
  double real_width_m;  ///< w_obj, preset class width
  double distance_m;    ///< D_obj, estimated metric distance
};

/// Invert the width proportion for a single detection.
/// Throws UnknownClass when the class has no width entry and ZeroPixelWidth
/// when the box is degenerate in width.
inline DistanceEstimate estimate_distance(const CameraModel& cam,
                                          const ClassWidthTable& widths,
                                          const Detection& det) {
  const double w_img = det.box.width();
  const double w_obj = widths.width_m(det.class_label);
  if (w_img <= 0.0) {
    throw ZeroPixelWidth("ZeroPixelWidth: detection box for class '" +
                         det.class_label + "' has zero pixel width");
  }
  return DistanceEstimate{det.class_label, w_img, w_obj,
                          cam.focal_length_px * w_obj / w_img};
}

/// Solve the proportion for the focal length from one known sighting:
/// an object of real width `real_width_m` at distance `known_distance_m`
/// observed with `pixel_width` pixels. Round-trips with estimate_distance.
inline CameraModel calibrate_focal(double known_distance_m, double real_width_m,
                                   double pixel_width) {
  if (!(std::isfinite(known_distance_m) && known_distance_m > 0.0) ||
      !(std::isfinite(real_width_m) && real_width_m > 0.0) ||
      !(std::isfinite(pixel_width) && pixel_width > 0.0)) {
    throw NonPositiveInput(
        "NonPositiveInput: calibrate_focal requires positive finite distance, "
        "width and pixel width");
  }
  return CameraModel(known_distance_m * pixel_width / real_width_m);
}

}  // namespace desws
