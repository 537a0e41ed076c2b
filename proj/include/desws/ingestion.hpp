// SPDX-License-Identifier: Apache-2.0
//
// Parsing and serialization of every external format:
//
//   * ground-truth label files  - one object per line, "class cx cy w h",
//     all four geometry fields normalized to [0, 1]
//   * detection dumps           - JSON array of
//     {image_id, class, bbox: [x_min, y_min, x_max, y_max], confidence}
//   * threshold study CSV       - header "threshold,dangerous,safe"
//   * pipeline config           - JSON with explicit units in field names
//   * image manifest            - JSON array of {image_id, width_px, height_px}
//   * SE weight fixtures        - JSON with reduction ratio and row-major
//     matrices
//
// Parsers are pure and never abort the process; every error carries the
// input location (line number or JSON field path). Writers emit shortest
// round-trip decimal for floating-point fields, so serialize-then-parse is
// exact.
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "desws/detection.hpp"
#include "desws/distance.hpp"
#include "desws/errors.hpp"
#include "desws/geometry.hpp"
#include "desws/rank_tests.hpp"
#include "desws/se_block.hpp"
#include "desws/warning.hpp"

namespace desws {

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

inline bool parse_double_strict(std::string_view token, double& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

inline bool parse_int64_strict(std::string_view token, std::int64_t& out) {
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::vector<std::string_view> split_on(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

}  // namespace detail

/// The six classes this pipeline watches, in label-index order.
inline const std::vector<std::string>& default_class_names() {
  static const std::vector<std::string> names = {"person", "bicycle", "car",
                                                 "motorcycle", "bus", "truck"};
  return names;
}

// ---------------------------------------------------------------------------
// Label files
// ---------------------------------------------------------------------------

/// One normalized object annotation: class index plus center-size geometry,
/// every geometry field in [0, 1].
struct LabelEntry {
  std::int64_t class_index;
  double center_x, center_y, width, height;

  friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

/// A parsed label file joined with the image it annotates.
struct LabelFile {
  std::string image_id;
  double image_width_px = 0.0;
  double image_height_px = 0.0;
  std::vector<LabelEntry> entries;
};

/// Parse "class cx cy w h" lines. Blank lines are ignored; anything else
/// malformed raises MalformedLine / OutOfRangeField / UnknownClassIndex with
/// the 1-based line number.
inline std::vector<LabelEntry> parse_labels(std::string_view text,
                                            std::size_t num_classes = 6) {
  std::vector<LabelEntry> entries;
  const auto lines = detail::split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view line = detail::trim(lines[li]);
    if (line.empty()) continue;
    const std::size_t line_no = li + 1;
    const auto tokens = detail::split_ws(line);
    if (tokens.size() != 5) {
      throw MalformedLine("expected 5 fields (class cx cy w h), got " +
                              std::to_string(tokens.size()),
                          line_no);
    }
    LabelEntry e{};
    if (!detail::parse_int64_strict(tokens[0], e.class_index)) {
      throw MalformedLine("class index '" + std::string(tokens[0]) +
                              "' is not an integer",
                          line_no);
    }
    const char* field_names[4] = {"center_x", "center_y", "width", "height"};
    double* fields[4] = {&e.center_x, &e.center_y, &e.width, &e.height};
    for (int f = 0; f < 4; ++f) {
      if (!detail::parse_double_strict(tokens[f + 1], *fields[f])) {
        throw MalformedLine("field '" + std::string(field_names[f]) + "' ('" +
                                std::string(tokens[f + 1]) + "') is not a finite number",
                            line_no);
      }
      if (*fields[f] < 0.0 || *fields[f] > 1.0) {
        throw OutOfRangeField("field '" + std::string(field_names[f]) + "' = " +
                                  detail::format_double(*fields[f]) +
                                  " outside [0, 1]",
                              line_no);
      }
    }
    if (e.class_index < 0 || e.class_index >= static_cast<std::int64_t>(num_classes)) {
      throw UnknownClassIndex("class index " + std::to_string(e.class_index) +
                                  " outside [0, " + std::to_string(num_classes) + ")",
                              line_no);
    }
    entries.push_back(e);
  }
  return entries;
}

inline std::string write_labels(std::span<const LabelEntry> entries) {
  std::string out;
  for (const LabelEntry& e : entries) {
    out += std::to_string(e.class_index);
    for (double v : {e.center_x, e.center_y, e.width, e.height}) {
      out += ' ';
      out += detail::format_double(v);
    }
    out += '\n';
  }
  return out;
}

/// Normalized center-size entry to a pixel-space corner box.
inline BBox label_to_bbox(const LabelEntry& e, double image_width_px,
                          double image_height_px) {
  const double cx = e.center_x * image_width_px;
  const double cy = e.center_y * image_height_px;
  const double half_w = 0.5 * e.width * image_width_px;
  const double half_h = 0.5 * e.height * image_height_px;
  return BBox(cx - half_w, cy - half_h, cx + half_w, cy + half_h);
}

/// Pixel-space corner box back to a normalized entry.
inline LabelEntry bbox_to_label(std::int64_t class_index, const BBox& box,
                                double image_width_px, double image_height_px) {
  return LabelEntry{class_index, box.center_x() / image_width_px,
                    box.center_y() / image_height_px, box.width() / image_width_px,
                    box.height() / image_height_px};
}

/// Resolve a label file to pixel-space ground truths using its image size.
inline std::vector<GroundTruth> to_ground_truths(
    const LabelFile& file,
    std::span<const std::string> class_names = default_class_names()) {
  std::vector<GroundTruth> gts;
  gts.reserve(file.entries.size());
  for (const LabelEntry& e : file.entries) {
    gts.push_back(
        GroundTruth{class_names[static_cast<std::size_t>(e.class_index)],
                    label_to_bbox(e, file.image_width_px, file.image_height_px)});
  }
  return gts;
}

// ---------------------------------------------------------------------------
// Detection dumps
// ---------------------------------------------------------------------------

/// Detections of one image, input order preserved.
struct ImageDetections {
  std::string image_id;
  std::vector<Detection> detections;

  friend bool operator==(const ImageDetections&, const ImageDetections&) = default;
};

/// Parse a detection dump. Records with the same image_id are grouped under
/// one image (first-seen order, record order preserved within an image).
/// The "class" field is a class-name string, or an index into `class_names`;
/// indices outside the list become labels of the form "class_<i>" so the
/// pipeline can report them as unknown instead of failing the whole file.
/// Unknown record keys are ignored (detector dumps often carry extras).
inline std::vector<ImageDetections> parse_detections(
    std::string_view json_text,
    std::span<const std::string> class_names = default_class_names()) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("detections: not valid JSON");
  if (!doc.is_array()) throw SchemaError("detections: top level must be an array");

  std::vector<ImageDetections> groups;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string path = "detections[" + std::to_string(k) + "]";
    const auto& rec = doc[k];
    if (!rec.is_object()) throw SchemaError(path + ": must be an object");
    if (!rec.contains("image_id") || !rec["image_id"].is_string()) {
      throw SchemaError(path + ".image_id: required string");
    }
    if (!rec.contains("class")) throw SchemaError(path + ".class: required");
    std::string label;
    const auto& cls = rec["class"];
    if (cls.is_string()) {
      label = cls.get<std::string>();
    } else if (cls.is_number_integer()) {
      const std::int64_t idx = cls.get<std::int64_t>();
      if (idx >= 0 && idx < static_cast<std::int64_t>(class_names.size())) {
        label = class_names[static_cast<std::size_t>(idx)];
      } else {
        label = "class_" + std::to_string(idx);
      }
    } else {
      throw SchemaError(path + ".class: must be a string or an integer index");
    }
    if (!rec.contains("bbox") || !rec["bbox"].is_array() || rec["bbox"].size() != 4) {
      throw SchemaError(path + ".bbox: required array of 4 numbers");
    }
    double coords[4];
    for (std::size_t i = 0; i < 4; ++i) {
      if (!rec["bbox"][i].is_number()) {
        throw SchemaError(path + ".bbox[" + std::to_string(i) + "]: must be a number");
      }
      coords[i] = rec["bbox"][i].get<double>();
    }
    if (!rec.contains("confidence") || !rec["confidence"].is_number()) {
      throw SchemaError(path + ".confidence: required number");
    }
    const double confidence = rec["confidence"].get<double>();
    if (!(confidence >= 0.0 && confidence <= 1.0)) {
      throw SchemaError(path + ".confidence: " + detail::format_double(confidence) +
                        " outside [0, 1]");
    }
    BBox box = [&]() -> BBox {
      try {
        return BBox(coords[0], coords[1], coords[2], coords[3]);
      } catch (const InvalidBox& e) {
        throw InvalidBox(path + ".bbox: " + e.what());
      }
    }();

    const std::string image_id = rec["image_id"].get<std::string>();
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const ImageDetections& g) { return g.image_id == image_id; });
    if (it == groups.end()) {
      groups.push_back(ImageDetections{image_id, {}});
      it = groups.end() - 1;
    }
    it->detections.push_back(Detection{std::move(label), box, confidence});
  }
  return groups;
}

inline std::string write_detections(std::span<const ImageDetections> groups) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ImageDetections& g : groups) {
    for (const Detection& d : g.detections) {
      arr.push_back({{"image_id", g.image_id},
                     {"class", d.class_label},
                     {"bbox", {d.box.x_min(), d.box.y_min(), d.box.x_max(), d.box.y_max()}},
                     {"confidence", d.confidence}});
    }
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Threshold study CSV
// ---------------------------------------------------------------------------

/// Parse "threshold,dangerous,safe" CSV. Duplicate thresholds are rejected;
/// malformed rows name the 1-based line.
inline std::vector<ThresholdSample> parse_threshold_samples(std::string_view csv) {
  const auto lines = detail::split_lines(csv);
  std::vector<ThresholdSample> samples;
  bool header_seen = false;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view line = detail::trim(lines[li]);
    if (line.empty()) continue;
    const std::size_t line_no = li + 1;
    if (!header_seen) {
      if (line != "threshold,dangerous,safe") {
        throw MalformedRow("expected header 'threshold,dangerous,safe', got '" +
                               std::string(line) + "'",
                           line_no);
      }
      header_seen = true;
      continue;
    }
    const auto fields = detail::split_on(line, ',');
    if (fields.size() != 3) {
      throw MalformedRow("expected 3 comma-separated fields, got " +
                             std::to_string(fields.size()),
                         line_no);
    }
    ThresholdSample s{};
    if (!detail::parse_double_strict(detail::trim(fields[0]), s.threshold_m) ||
        s.threshold_m <= 0.0) {
      throw MalformedRow("threshold '" + std::string(fields[0]) +
                             "' is not a positive number",
                         line_no);
    }
    if (!detail::parse_int64_strict(detail::trim(fields[1]), s.dangerous_count) ||
        s.dangerous_count < 0) {
      throw MalformedRow("dangerous count '" + std::string(fields[1]) +
                             "' is not a non-negative integer",
                         line_no);
    }
    if (!detail::parse_int64_strict(detail::trim(fields[2]), s.safe_count) ||
        s.safe_count < 0) {
      throw MalformedRow("safe count '" + std::string(fields[2]) +
                             "' is not a non-negative integer",
                         line_no);
    }
    for (const ThresholdSample& prev : samples) {
      if (prev.threshold_m == s.threshold_m) {
        throw DuplicateThreshold("DuplicateThreshold: threshold " +
                                 detail::format_double(s.threshold_m) +
                                 " duplicated at line " + std::to_string(line_no));
      }
    }
    samples.push_back(s);
  }
  if (!header_seen && !samples.empty()) {
    throw MalformedRow("missing header 'threshold,dangerous,safe'", 1);
  }
  return samples;
}

inline std::string write_threshold_samples(std::span<const ThresholdSample> samples) {
  std::string out = "threshold,dangerous,safe\n";
  for (const ThresholdSample& s : samples) {
    out += detail::format_double(s.threshold_m);
    out += ',';
    out += std::to_string(s.dangerous_count);
    out += ',';
    out += std::to_string(s.safe_count);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pipeline config
// ---------------------------------------------------------------------------

inline const char* to_string(TestMethod m) {
  switch (m) {
    case TestMethod::MannWhitneyExact: return "mann-whitney-exact";
    case TestMethod::MannWhitneyNormalApprox: return "mann-whitney-normal-approx";
    case TestMethod::KruskalWallis: return "kruskal-wallis";
  }
  return "mann-whitney-exact";
}

inline bool test_method_from_string(std::string_view s, TestMethod& out) {
  if (s == "mann-whitney-exact") {
    out = TestMethod::MannWhitneyExact;
  } else if (s == "mann-whitney-normal-approx") {
    out = TestMethod::MannWhitneyNormalApprox;
  } else if (s == "kruskal-wallis") {
    out = TestMethod::KruskalWallis;
  } else {
    return false;
  }
  return true;
}

/// Everything the pipeline needs from the operator, with working defaults.
/// Field names carry units on purpose: unit mix-ups are the dominant failure
/// mode of width-based distance estimation.
struct PipelineConfig {
  std::vector<std::string> class_names = default_class_names();
  ClassWidthTable class_widths_m = ClassWidthTable::defaults();
  double focal_length_px = 700.0;
  double danger_threshold_m = kDefaultDangerThresholdM;
  TestMethod test_method = TestMethod::MannWhitneyExact;
  double alpha = 0.05;

  friend bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
    return a.class_names == b.class_names && a.class_widths_m == b.class_widths_m &&
           a.focal_length_px == b.focal_length_px &&
           a.danger_threshold_m == b.danger_threshold_m &&
           a.test_method == b.test_method && a.alpha == b.alpha;
  }
};

/// Parse the pipeline config. Every field is optional and defaults as in
/// PipelineConfig; width entries are merged over the default table. Unknown
/// top-level keys are rejected, precisely to catch unit typos like
/// "focal_length_mm".
inline PipelineConfig parse_config(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("config: not valid JSON");
  if (!doc.is_object()) throw SchemaError("config: top level must be an object");

  static const char* known_keys[] = {"class_names",        "class_widths_m",
                                     "focal_length_px",    "danger_threshold_m",
                                     "test_method",        "alpha"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : known_keys) known = known || key == k;
    if (!known) throw SchemaError("config: unknown key '" + key + "'");
  }

  PipelineConfig cfg;
  if (doc.contains("class_names")) {
    const auto& names = doc["class_names"];
    if (!names.is_array() || names.empty()) {
      throw SchemaError("config.class_names: must be a non-empty array");
    }
    cfg.class_names.clear();
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (!names[i].is_string() || names[i].get<std::string>().empty()) {
        throw SchemaError("config.class_names[" + std::to_string(i) +
                          "]: must be a non-empty string");
      }
      const std::string name = names[i].get<std::string>();
      for (const std::string& prev : cfg.class_names) {
        if (prev == name) {
          throw SchemaError("config.class_names: duplicate name '" + name + "'");
        }
      }
      cfg.class_names.push_back(name);
    }
  }
  if (doc.contains("class_widths_m")) {
    const auto& widths = doc["class_widths_m"];
    if (!widths.is_object()) throw SchemaError("config.class_widths_m: must be an object");
    for (const auto& [name, value] : widths.items()) {
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw SchemaError("config.class_widths_m." + name + ": must be a positive number");
      }
      cfg.class_widths_m.set(name, value.get<double>());
    }
  }
  if (doc.contains("focal_length_px")) {
    if (!doc["focal_length_px"].is_number() || !(doc["focal_length_px"].get<double>() > 0.0)) {
      throw SchemaError("config.focal_length_px: must be a positive number");
    }
    cfg.focal_length_px = doc["focal_length_px"].get<double>();
  }
  if (doc.contains("danger_threshold_m")) {
    if (!doc["danger_threshold_m"].is_number() ||
        !(doc["danger_threshold_m"].get<double>() > 0.0)) {
      throw SchemaError("config.danger_threshold_m: must be a positive number");
    }
    cfg.danger_threshold_m = doc["danger_threshold_m"].get<double>();
  }
  if (doc.contains("test_method")) {
    if (!doc["test_method"].is_string() ||
        !test_method_from_string(doc["test_method"].get<std::string>(), cfg.test_method)) {
      throw SchemaError(
          "config.test_method: must be one of 'mann-whitney-exact', "
          "'mann-whitney-normal-approx', 'kruskal-wallis'");
    }
  }
  if (doc.contains("alpha")) {
    if (!doc["alpha"].is_number()) throw SchemaError("config.alpha: must be a number");
    cfg.alpha = doc["alpha"].get<double>();
    if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0)) {
      throw SchemaError("config.alpha: must lie in (0, 1)");
    }
  }
  return cfg;
}

inline std::string write_config(const PipelineConfig& cfg) {
  nlohmann::json widths = nlohmann::json::object();
  for (const auto& [name, w] : cfg.class_widths_m.entries()) widths[name] = w;
  const nlohmann::json doc = {{"class_names", cfg.class_names},
                              {"class_widths_m", widths},
                              {"focal_length_px", cfg.focal_length_px},
                              {"danger_threshold_m", cfg.danger_threshold_m},
                              {"test_method", to_string(cfg.test_method)},
                              {"alpha", cfg.alpha}};
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Image manifest
// ---------------------------------------------------------------------------

struct ImageInfo {
  std::string image_id;
  double width_px = 0.0;
  double height_px = 0.0;

  friend bool operator==(const ImageInfo&, const ImageInfo&) = default;
};

inline std::vector<ImageInfo> parse_image_manifest(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("images: not valid JSON");
  if (!doc.is_array()) throw SchemaError("images: top level must be an array");
  std::vector<ImageInfo> infos;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string path = "images[" + std::to_string(k) + "]";
    const auto& rec = doc[k];
    if (!rec.is_object() || !rec.contains("image_id") || !rec["image_id"].is_string()) {
      throw SchemaError(path + ".image_id: required string");
    }
    ImageInfo info;
    info.image_id = rec["image_id"].get<std::string>();
    for (const char* dim : {"width_px", "height_px"}) {
      if (!rec.contains(dim) || !rec[dim].is_number() || !(rec[dim].get<double>() > 0.0)) {
        throw SchemaError(path + "." + dim + ": required positive number");
      }
    }
    info.width_px = rec["width_px"].get<double>();
    info.height_px = rec["height_px"].get<double>();
    for (const ImageInfo& prev : infos) {
      if (prev.image_id == info.image_id) {
        throw SchemaError(path + ".image_id: duplicate id '" + info.image_id + "'");
      }
    }
    infos.push_back(std::move(info));
  }
  return infos;
}

inline std::string write_image_manifest(std::span<const ImageInfo> infos) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ImageInfo& info : infos) {
    arr.push_back({{"image_id", info.image_id},
                   {"width_px", info.width_px},
                   {"height_px", info.height_px}});
  }
  return arr.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// SE weight fixtures
// ---------------------------------------------------------------------------

/// Fixture layout:
/// {
///   "channels": C, "reduction_ratio": r,
///   "w1": {"rows": C/r, "cols": C, "data": [row-major]},
///   "b1": [C/r], "w2": {"rows": C, "cols": C/r, "data": [row-major]},
///   "b2": [C]
/// }
inline SeWeights se_weights_from_json(std::string_view json_text) {
  const auto doc = nlohmann::json::parse(json_text, nullptr, false);
  if (doc.is_discarded()) throw SchemaError("se_weights: not valid JSON");
  if (!doc.is_object()) throw SchemaError("se_weights: top level must be an object");
  for (const char* key : {"channels", "reduction_ratio"}) {
    if (!doc.contains(key) || !doc[key].is_number_unsigned() ||
        doc[key].get<std::uint64_t>() == 0) {
      throw SchemaError(std::string("se_weights.") + key + ": required positive integer");
    }
  }
  auto read_vector = [&](const nlohmann::json& node, const std::string& path) {
    if (!node.is_array()) throw SchemaError(path + ": must be an array of numbers");
    std::vector<double> v;
    v.reserve(node.size());
    for (std::size_t i = 0; i < node.size(); ++i) {
      if (!node[i].is_number()) {
        throw SchemaError(path + "[" + std::to_string(i) + "]: must be a number");
      }
      v.push_back(node[i].get<double>());
    }
    return v;
  };
  auto read_matrix = [&](const char* key) {
    const std::string path = std::string("se_weights.") + key;
    if (!doc.contains(key) || !doc[key].is_object()) {
      throw SchemaError(path + ": required object {rows, cols, data}");
    }
    const auto& m = doc[key];
    for (const char* dim : {"rows", "cols"}) {
      if (!m.contains(dim) || !m[dim].is_number_unsigned()) {
        throw SchemaError(path + "." + dim + ": required non-negative integer");
      }
    }
    const std::size_t rows = m["rows"].get<std::size_t>();
    const std::size_t cols = m["cols"].get<std::size_t>();
    if (!m.contains("data")) throw SchemaError(path + ".data: required");
    std::vector<double> data = read_vector(m["data"], path + ".data");
    if (data.size() != rows * cols) {
      throw SchemaError(path + ".data: expected " + std::to_string(rows * cols) +
                        " entries, got " + std::to_string(data.size()));
    }
    return data;
  };
  for (const char* key : {"b1", "b2"}) {
    if (!doc.contains(key)) throw SchemaError(std::string("se_weights.") + key + ": required");
  }
  return SeWeights(doc["channels"].get<std::size_t>(),
                   doc["reduction_ratio"].get<std::size_t>(), read_matrix("w1"),
                   read_vector(doc["b1"], "se_weights.b1"), read_matrix("w2"),
                   read_vector(doc["b2"], "se_weights.b2"));
}

inline std::string se_weights_to_json(const SeWeights& w) {
  const nlohmann::json doc = {
      {"channels", w.channels},
      {"reduction_ratio", w.reduction_ratio},
      {"w1", {{"rows", w.hidden()}, {"cols", w.channels}, {"data", w.w1}}},
      {"b1", w.b1},
      {"w2", {{"rows", w.channels}, {"cols", w.hidden()}, {"data", w.w2}}},
      {"b2", w.b2}};
  return doc.dump(2) + "\n";
}

}  // namespace desws
