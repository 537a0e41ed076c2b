// SPDX-License-Identifier: Apache-2.0
//
// Synthetic pinhole-camera scene generator. Objects of known class, size and
// distance are projected to pixel boxes with the same proportion the
// estimator inverts, which makes generated scenes an end-to-end oracle for
// the distance and warning stages: with zero noise the pipeline must recover
// every true distance exactly (up to rounding).
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "desws/detection.hpp"
#include "desws/errors.hpp"
#include "desws/geometry.hpp"
#include "desws/ingestion.hpp"
#include "desws/rng.hpp"

namespace desws {

struct SceneObject {
  std::string class_label;
  double real_width_m = 0.0;
  double real_height_m = 0.0;
  double distance_m = 0.0;
  double lateral_offset_m = 0.0;  ///< signed, right of the optical axis
};

/// Height used when a scene object does not specify one. Heights only shape
/// the drawn boxes; the distance math never reads them.
inline double default_object_height_m(const std::string& class_label) {
  if (class_label == "person") return 1.7;
  if (class_label == "bicycle") return 1.1;
  if (class_label == "car") return 1.5;
  if (class_label == "motorcycle") return 1.1;
  if (class_label == "bus") return 3.0;
  if (class_label == "truck") return 3.0;
  return 1.5;
}

struct SceneCamera {
  double focal_length_px = 700.0;
  double image_width_px = 1280.0;
  double image_height_px = 720.0;
};

struct SceneSpec {
  std::string image_id = "scene";
  SceneCamera camera;
  std::vector<SceneObject> objects;
  double pixel_width_noise_std = 0.0;  ///< std of the detection width jitter, px
};

struct Projection {
  BBox box;
  bool clamped = false;  ///< true when the unclamped box crossed image bounds
};

/// Project one object to a pixel box: width f*w/D, height f*h/D, horizontal
/// center offset f*lateral/D from the image center, vertical center at the
/// image center. The box is clamped to the image bounds and flagged when
/// clamping changed it.
inline Projection project(const SceneSpec& spec, const SceneObject& obj) {
  if (!(obj.distance_m > 0.0)) {
    throw BehindCamera("BehindCamera: object '" + obj.class_label +
                       "' has non-positive distance");
  }
  const double f = spec.camera.focal_length_px;
  const double w = f * obj.real_width_m / obj.distance_m;
  const double h = f * obj.real_height_m / obj.distance_m;
  const double cx = 0.5 * spec.camera.image_width_px + f * obj.lateral_offset_m / obj.distance_m;
  const double cy = 0.5 * spec.camera.image_height_px;

  const double x_min = cx - 0.5 * w;
  const double y_min = cy - 0.5 * h;
  const double x_max = cx + 0.5 * w;
  const double y_max = cy + 0.5 * h;
  const double cx_min = std::clamp(x_min, 0.0, spec.camera.image_width_px);
  const double cy_min = std::clamp(y_min, 0.0, spec.camera.image_height_px);
  const double cx_max = std::clamp(x_max, 0.0, spec.camera.image_width_px);
  const double cy_max = std::clamp(y_max, 0.0, spec.camera.image_height_px);
  const bool clamped =
      cx_min != x_min || cy_min != y_min || cx_max != x_max || cy_max != y_max;
  return Projection{BBox(cx_min, cy_min, cx_max, cy_max), clamped};
}

/// One row of the ground-truth distance table emitted next to the generated
/// files.
struct TruthRow {
  std::size_t object_index;
  std::string class_label;
  double distance_m;
  double real_width_m;
  double pixel_width;  ///< noise-free projected width
  bool clamped;
};

struct GeneratedScene {
  std::string image_id;
  std::string label_text;       ///< ground-truth label file body
  std::string detections_json;  ///< detection dump (confidence 1.0)
  std::string truth_csv;        ///< per-object true distances
  std::string manifest_json;    ///< image manifest for the scene
  std::vector<TruthRow> truth;
};

/// Class index used in label files: position in `class_names`, or the size of
/// the list when the class is not named there (kept out of valid range on
/// purpose so misconfigured scenes fail loudly at parse time).
inline std::int64_t scene_class_index(const std::string& label,
                                      std::span<const std::string> class_names) {
  for (std::size_t i = 0; i < class_names.size(); ++i) {
    if (class_names[i] == label) return static_cast<std::int64_t>(i);
  }
  return static_cast<std::int64_t>(class_names.size());
}

/// Generate label/detection/truth files for a scene. Deterministic for a
/// fixed (spec, seed): same inputs give byte-identical outputs. Detections
/// equal the exact projections, except that a positive noise std jitters the
/// detection box width around its center (labels always keep the exact
/// geometry).
inline GeneratedScene generate(const SceneSpec& spec, std::uint64_t seed,
                               std::span<const std::string> class_names =
                                   default_class_names()) {
  SplitMix64 rng(seed);
  std::vector<LabelEntry> labels;
  std::vector<Detection> detections;
  std::vector<TruthRow> truth;
  labels.reserve(spec.objects.size());
  detections.reserve(spec.objects.size());
  truth.reserve(spec.objects.size());

  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const SceneObject& obj = spec.objects[i];
    const Projection proj = project(spec, obj);
    labels.push_back(bbox_to_label(scene_class_index(obj.class_label, class_names),
                                   proj.box, spec.camera.image_width_px,
                                   spec.camera.image_height_px));

    BBox det_box = proj.box;
    if (spec.pixel_width_noise_std > 0.0) {
      const double jitter = spec.pixel_width_noise_std * rng.gaussian();
      // widen/narrow around the box center; keep a sliver of width
      const double noisy_w = std::max(proj.box.width() + jitter, 1e-9);
      const double cx = proj.box.center_x();
      det_box = BBox(cx - 0.5 * noisy_w, proj.box.y_min(), cx + 0.5 * noisy_w,
                     proj.box.y_max());
    }
    detections.push_back(Detection{obj.class_label, det_box, 1.0});
    truth.push_back(TruthRow{i, obj.class_label, obj.distance_m, obj.real_width_m,
                             proj.box.width(), proj.clamped});
  }

  GeneratedScene out;
  out.image_id = spec.image_id;
  out.label_text = write_labels(labels);
  out.detections_json =
      write_detections(std::vector<ImageDetections>{{spec.image_id, detections}});
  std::string csv = "object,class,distance_m,real_width_m,pixel_width,clamped\n";
  for (const TruthRow& row : truth) {
    csv += std::to_string(row.object_index);
    csv += ',';
    csv += row.class_label;
    csv += ',';
    csv += detail::format_double(row.distance_m);
    csv += ',';
    csv += detail::format_double(row.real_width_m);
    csv += ',';
    csv += detail::format_double(row.pixel_width);
    csv += ',';
    csv += row.clamped ? "true" : "false";
    csv += '\n';
  }
  out.truth_csv = std::move(csv);
  out.manifest_json = write_image_manifest(std::vector<ImageInfo>{
      {spec.image_id, spec.camera.image_width_px, spec.camera.image_height_px}});
  out.truth = std::move(truth);
  return out;
}

/// Scene spec JSON:
/// {
///   "image_id": "scene",
///   "camera": {"focal_length_px": f, "image_width_px": W, "image_height_px": H},
///   "objects": [{"class": ..., "real_width_m": ..., "real_height_m": ...,
///                "distance_m": ..., "lateral_offset_m": ...}, ...],
///   "pixel_width_noise_std": 0.0
/// }
inline SceneSpec parse_scene_spec(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("scene: not valid JSON");
  if (!doc.is_object()) throw SchemaError("scene: top level must be an object");

  SceneSpec spec;
  if (doc.contains("image_id")) {
    if (!doc["image_id"].is_string() || doc["image_id"].get<std::string>().empty()) {
      throw SchemaError("scene.image_id: must be a non-empty string");
    }
    spec.image_id = doc["image_id"].get<std::string>();
  }
  if (!doc.contains("camera") || !doc["camera"].is_object()) {
    throw SchemaError("scene.camera: required object");
  }
  const auto& cam = doc["camera"];
  for (const char* key : {"focal_length_px", "image_width_px", "image_height_px"}) {
    if (!cam.contains(key) || !cam[key].is_number() || !(cam[key].get<double>() > 0.0)) {
      throw SchemaError(std::string("scene.camera.") + key + ": required positive number");
    }
  }
  spec.camera.focal_length_px = cam["focal_length_px"].get<double>();
  spec.camera.image_width_px = cam["image_width_px"].get<double>();
  spec.camera.image_height_px = cam["image_height_px"].get<double>();

  if (!doc.contains("objects") || !doc["objects"].is_array()) {
    throw SchemaError("scene.objects: required array");
  }
  for (std::size_t k = 0; k < doc["objects"].size(); ++k) {
    const std::string path = "scene.objects[" + std::to_string(k) + "]";
    const auto& node = doc["objects"][k];
    if (!node.is_object()) throw SchemaError(path + ": must be an object");
    if (!node.contains("class") || !node["class"].is_string()) {
      throw SchemaError(path + ".class: required string");
    }
    SceneObject obj;
    obj.class_label = node["class"].get<std::string>();
    for (const char* key : {"real_width_m", "distance_m"}) {
      if (!node.contains(key) || !node[key].is_number() || !(node[key].get<double>() > 0.0)) {
        throw SchemaError(path + "." + key + ": required positive number");
      }
    }
    obj.real_width_m = node["real_width_m"].get<double>();
    obj.distance_m = node["distance_m"].get<double>();
    if (node.contains("real_height_m")) {
      if (!node["real_height_m"].is_number() || !(node["real_height_m"].get<double>() > 0.0)) {
        throw SchemaError(path + ".real_height_m: must be a positive number");
      }
      obj.real_height_m = node["real_height_m"].get<double>();
    } else {
      obj.real_height_m = default_object_height_m(obj.class_label);
    }
    if (node.contains("lateral_offset_m")) {
      if (!node["lateral_offset_m"].is_number()) {
        throw SchemaError(path + ".lateral_offset_m: must be a number");
      }
      obj.lateral_offset_m = node["lateral_offset_m"].get<double>();
    }
    spec.objects.push_back(std::move(obj));
  }
  if (doc.contains("pixel_width_noise_std")) {
    if (!doc["pixel_width_noise_std"].is_number() ||
        doc["pixel_width_noise_std"].get<double>() < 0.0) {
      throw SchemaError("scene.pixel_width_noise_std: must be a number >= 0");
    }
    spec.pixel_width_noise_std = doc["pixel_width_noise_std"].get<double>();
  }
  return spec;
}

inline std::string write_scene_spec(const SceneSpec& spec) {
  nlohmann::json objects = nlohmann::json::array();
  for (const SceneObject& obj : spec.objects) {
    objects.push_back({{"class", obj.class_label},
                       {"real_width_m", obj.real_width_m},
                       {"real_height_m", obj.real_height_m},
                       {"distance_m", obj.distance_m},
                       {"lateral_offset_m", obj.lateral_offset_m}});
  }
  const nlohmann::json doc = {{"image_id", spec.image_id},
                              {"camera",
                               {{"focal_length_px", spec.camera.focal_length_px},
                                {"image_width_px", spec.camera.image_width_px},
                                {"image_height_px", spec.camera.image_height_px}}},
                              {"objects", objects},
                              {"pixel_width_noise_std", spec.pixel_width_noise_std}};
  return doc.dump(2) + "\n";
}

}  // namespace desws
