// SPDX-License-Identifier: Apache-2.0
//
// desws — command-line front end for the detection/distance/warning pipeline.
//
// Subcommands: estimate, warn, eval, threshold-test, simulate, diou.
// stdout carries only the report; diagnostics go to stderr. Exit codes:
// 0 success, 1 input error, 2 internal invariant violation.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "desws/desws.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw desws::Error("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw desws::Error("cannot write file: " + path.string());
  out << content;
}

/// 12 significant digits, the precision every text report uses.
std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

struct GlobalOptions {
  std::string config_path;
  std::string output_path;
  std::string format = "text";
};

desws::PipelineConfig load_config(const GlobalOptions& opts) {
  if (opts.config_path.empty()) return desws::PipelineConfig{};
  return desws::parse_config(read_file(opts.config_path));
}

void emit(const GlobalOptions& opts, const std::string& report) {
  if (opts.output_path.empty()) {
    std::cout << report;
  } else {
    write_file(opts.output_path, report);
  }
}

json config_echo(const desws::PipelineConfig& cfg, bool with_threshold) {
  json widths = json::object();
  for (const auto& [name, w] : cfg.class_widths_m.entries()) widths[name] = w;
  json echo = {{"focal_length_px", cfg.focal_length_px}, {"class_widths_m", widths}};
  if (with_threshold) echo["danger_threshold_m"] = cfg.danger_threshold_m;
  return echo;
}

// ---------------------------------------------------------------------------
// estimate / warn
// ---------------------------------------------------------------------------

struct ReportItem {
  std::string image_id;
  desws::Detection detection;
  desws::DistanceEstimate estimate;
  std::optional<desws::SafetyVerdict> verdict;
};

struct SkippedItem {
  std::string image_id;
  std::string class_label;
  std::string reason;
};

struct RunReport {
  std::vector<ReportItem> items;
  std::vector<SkippedItem> skipped;
  std::size_t safe = 0;
  std::size_t dangerous = 0;
  bool with_verdicts = false;
};

RunReport build_run_report(const desws::PipelineConfig& cfg,
                           const std::vector<desws::ImageDetections>& groups,
                           bool with_verdicts) {
  RunReport report;
  report.with_verdicts = with_verdicts;
  const desws::CameraModel cam(cfg.focal_length_px);
  for (const auto& group : groups) {
    for (const auto& det : group.detections) {
      try {
        ReportItem item{group.image_id, det,
                        desws::estimate_distance(cam, cfg.class_widths_m, det), {}};
        if (with_verdicts) {
          item.verdict = desws::classify(item.estimate.distance_m, cfg.danger_threshold_m);
          if (item.verdict->verdict == desws::Verdict::Safe) {
            ++report.safe;
          } else {
            ++report.dangerous;
          }
        }
        report.items.push_back(std::move(item));
      } catch (const desws::UnknownClass&) {
        report.skipped.push_back({group.image_id, det.class_label, "UnknownClass"});
      } catch (const desws::ZeroPixelWidth&) {
        report.skipped.push_back({group.image_id, det.class_label, "ZeroPixelWidth"});
      }
    }
  }
  return report;
}

std::string run_report_json(const desws::PipelineConfig& cfg, const RunReport& report) {
  json items = json::array();
  for (const ReportItem& item : report.items) {
    json node = {{"image_id", item.image_id},
                 {"class", item.detection.class_label},
                 {"bbox",
                  {item.detection.box.x_min(), item.detection.box.y_min(),
                   item.detection.box.x_max(), item.detection.box.y_max()}},
                 {"pixel_width", item.estimate.pixel_width},
                 {"real_width_m", item.estimate.real_width_m},
                 {"distance_m", item.estimate.distance_m}};
    if (item.verdict) node["verdict"] = desws::to_string(item.verdict->verdict);
    items.push_back(std::move(node));
  }
  json skipped = json::array();
  for (const SkippedItem& s : report.skipped) {
    skipped.push_back(
        {{"image_id", s.image_id}, {"class", s.class_label}, {"reason", s.reason}});
  }
  json summary = {{"total", report.items.size() + report.skipped.size()},
                  {"estimated", report.items.size()},
                  {"skipped", report.skipped.size()}};
  if (report.with_verdicts) {
    summary["safe"] = report.safe;
    summary["dangerous"] = report.dangerous;
  }
  const json doc = {{"config", config_echo(cfg, report.with_verdicts)},
                    {"items", items},
                    {"skipped", skipped},
                    {"summary", summary}};
  return doc.dump(2) + "\n";
}

std::string run_report_text(const desws::PipelineConfig& cfg, const RunReport& report) {
  std::ostringstream out;
  char line[256];
  out << "focal_length_px: " << fmt12(cfg.focal_length_px) << "\n";
  if (report.with_verdicts) {
    out << "danger_threshold_m: " << fmt12(cfg.danger_threshold_m) << "\n";
  }
  std::snprintf(line, sizeof(line), "%-12s %-12s %14s %14s %14s %-11s %s", "image",
                "class", "pixel_width", "real_width_m", "distance_m",
                report.with_verdicts ? "verdict" : "", "bbox");
  out << line << "\n";
  for (const ReportItem& item : report.items) {
    const desws::BBox& box = item.detection.box;
    const std::string bbox = "[" + fmt12(box.x_min()) + ", " + fmt12(box.y_min()) +
                             ", " + fmt12(box.x_max()) + ", " + fmt12(box.y_max()) + "]";
    std::snprintf(line, sizeof(line), "%-12s %-12s %14s %14s %14s %-11s %s",
                  item.image_id.c_str(), item.detection.class_label.c_str(),
                  fmt12(item.estimate.pixel_width).c_str(),
                  fmt12(item.estimate.real_width_m).c_str(),
                  fmt12(item.estimate.distance_m).c_str(),
                  item.verdict ? desws::to_string(item.verdict->verdict) : "",
                  bbox.c_str());
    out << line << "\n";
  }
  if (!report.skipped.empty()) {
    out << "skipped:\n";
    for (const SkippedItem& s : report.skipped) {
      out << "  " << s.image_id << "  " << s.class_label << "  " << s.reason << "\n";
    }
  }
  out << "summary: total=" << report.items.size() + report.skipped.size()
      << " estimated=" << report.items.size() << " skipped=" << report.skipped.size();
  if (report.with_verdicts) {
    out << " safe=" << report.safe << " dangerous=" << report.dangerous;
  }
  out << "\n";
  return out.str();
}

int cmd_estimate_or_warn(const GlobalOptions& opts, const std::string& detections_path,
                         bool with_verdicts) {
  const auto cfg = load_config(opts);
  const auto groups = desws::parse_detections(read_file(detections_path), cfg.class_names);
  const RunReport report = build_run_report(cfg, groups, with_verdicts);
  emit(opts, opts.format == "json" ? run_report_json(cfg, report)
                                   : run_report_text(cfg, report));
  return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

int cmd_eval(const GlobalOptions& opts, const std::string& detections_path,
             const std::string& gt_dir, double iou_threshold) {
  const auto cfg = load_config(opts);
  const fs::path dir(gt_dir);
  const auto manifest = desws::parse_image_manifest(read_file(dir / "images.json"));

  std::vector<desws::ImageSample> images;
  for (const desws::ImageInfo& info : manifest) {
    const fs::path label_path = dir / "labels" / (info.image_id + ".txt");
    const desws::LabelFile label_file{
        info.image_id, info.width_px, info.height_px,
        desws::parse_labels(read_file(label_path), cfg.class_names.size())};
    desws::ImageSample sample;
    sample.image_id = info.image_id;
    sample.ground_truths = desws::to_ground_truths(label_file, cfg.class_names);
    images.push_back(std::move(sample));
  }

  const auto groups = desws::parse_detections(read_file(detections_path), cfg.class_names);
  for (const auto& group : groups) {
    auto it = std::find_if(images.begin(), images.end(), [&](const desws::ImageSample& s) {
      return s.image_id == group.image_id;
    });
    if (it == images.end()) {
      throw desws::Error("detections reference image '" + group.image_id +
                         "' absent from the manifest " + (dir / "images.json").string());
    }
    it->detections = group.detections;
  }

  const auto report = desws::evaluate(images, iou_threshold);

  if (opts.format == "json") {
    json classes = json::object();
    for (const auto& [cls, ce] : report.per_class) {
      classes[cls] = {{"ap", ce.ap ? json(*ce.ap) : json(nullptr)},
                      {"num_gt", ce.num_gt},
                      {"tp", ce.tp},
                      {"fp", ce.fp},
                      {"fn", ce.fn}};
    }
    const json doc = {{"iou_threshold", report.iou_threshold},
                      {"map_50", report.map_50},
                      {"classes", classes}};
    emit(opts, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    char line[256];
    out << "iou_threshold: " << fmt12(report.iou_threshold) << "\n";
    std::snprintf(line, sizeof(line), "%-12s %14s %8s %8s %8s %8s", "class", "ap",
                  "num_gt", "tp", "fp", "fn");
    out << line << "\n";
    for (const auto& [cls, ce] : report.per_class) {
      std::snprintf(line, sizeof(line), "%-12s %14s %8lld %8lld %8lld %8lld", cls.c_str(),
                    ce.ap ? fmt12(*ce.ap).c_str() : "-",
                    static_cast<long long>(ce.num_gt), static_cast<long long>(ce.tp),
                    static_cast<long long>(ce.fp), static_cast<long long>(ce.fn));
      out << line << "\n";
    }
    out << "map_50: " << fmt12(report.map_50) << "\n";
    emit(opts, out.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// threshold-test
// ---------------------------------------------------------------------------

int cmd_threshold_test(const GlobalOptions& opts, const std::string& samples_path,
                       std::optional<double> alpha_flag,
                       const std::string& method_flag,
                       const std::string& plot_data_path) {
  const auto cfg = load_config(opts);
  const auto samples = desws::parse_threshold_samples(read_file(samples_path));

  desws::TestMethod method = cfg.test_method;
  if (!method_flag.empty() && !desws::test_method_from_string(method_flag, method)) {
    throw desws::InvalidArgument("unknown test method '" + method_flag + "'");
  }
  const double alpha = alpha_flag.value_or(cfg.alpha);

  const auto analysis =
      desws::analyze_thresholds(samples, alpha, method, cfg.danger_threshold_m);

  if (!plot_data_path.empty()) {
    write_file(plot_data_path, desws::write_threshold_samples(samples));
  }

  static const char* kSelectionNote =
      "the selected threshold is operator configuration; the test reports "
      "evidence only";
  if (opts.format == "json") {
    const json doc = {{"method", desws::to_string(analysis.result.method)},
                      {"statistic", analysis.result.statistic},
                      {"p_value", analysis.result.p_value},
                      {"alpha", analysis.alpha},
                      {"significant", analysis.significant},
                      {"selected_threshold_m", analysis.selected_threshold_m},
                      {"selection_rule", analysis.selection_rule},
                      {"note", kSelectionNote}};
    emit(opts, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "method: " << desws::to_string(analysis.result.method) << "\n"
        << "statistic: " << fmt12(analysis.result.statistic) << "\n"
        << "p_value: " << fmt12(analysis.result.p_value) << "\n"
        << "alpha: " << fmt12(analysis.alpha) << "\n"
        << "significant: " << (analysis.significant ? "yes (p <= alpha)" : "no (p > alpha)")
        << "\n"
        << "selected_threshold_m: " << fmt12(analysis.selected_threshold_m) << " ("
        << analysis.selection_rule << "; " << kSelectionNote << ")\n";
    emit(opts, out.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const GlobalOptions& opts, const std::string& scene_path,
                 std::uint64_t seed, const std::string& out_dir) {
  const auto cfg = load_config(opts);
  const auto spec = desws::parse_scene_spec(read_file(scene_path));
  const auto scene = desws::generate(spec, seed, cfg.class_names);

  const fs::path dir(out_dir);
  fs::create_directories(dir / "labels");
  write_file(dir / "labels" / (scene.image_id + ".txt"), scene.label_text);
  write_file(dir / "images.json", scene.manifest_json);
  write_file(dir / "detections.json", scene.detections_json);
  write_file(dir / "truth.csv", scene.truth_csv);

  if (opts.format == "json") {
    const json doc = {{"out_dir", dir.string()},
                      {"image_id", scene.image_id},
                      {"objects", spec.objects.size()},
                      {"seed", seed},
                      {"files",
                       {{"labels", "labels/" + scene.image_id + ".txt"},
                        {"manifest", "images.json"},
                        {"detections", "detections.json"},
                        {"truth", "truth.csv"}}}};
    emit(opts, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "scene: " << scene.image_id << "\n"
        << "objects: " << spec.objects.size() << "\n"
        << "seed: " << seed << "\n"
        << "wrote: labels/" << scene.image_id << ".txt images.json detections.json "
        << "truth.csv in " << dir.string() << "\n";
    emit(opts, out.str());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// diou
// ---------------------------------------------------------------------------

int cmd_diou(const GlobalOptions& opts, const std::vector<double>& c) {
  const desws::BBox pred(c[0], c[1], c[2], c[3]);
  const desws::BBox target(c[4], c[5], c[6], c[7]);
  const auto breakdown = desws::diou_loss(pred, target);
  if (opts.format == "json") {
    const json doc = {{"iou", breakdown.iou},
                      {"center_distance_sq", breakdown.center_distance_sq},
                      {"enclosing_diag_sq", breakdown.enclosing_diag_sq},
                      {"loss", breakdown.loss}};
    emit(opts, doc.dump(2) + "\n");
  } else {
    std::ostringstream out;
    out << "iou: " << fmt12(breakdown.iou) << "\n"
        << "center_distance_sq: " << fmt12(breakdown.center_distance_sq) << "\n"
        << "enclosing_diag_sq: " << fmt12(breakdown.enclosing_diag_sq) << "\n"
        << "loss: " << fmt12(breakdown.loss) << "\n";
    emit(opts, out.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"detection box geometry, monocular distance estimation, "
               "threshold warnings, and mAP evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("--config", opts.config_path, "pipeline config JSON file");
  app.add_option("--output", opts.output_path, "write the report to this file");
  app.add_option("--format", opts.format, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  std::string detections_path, gt_dir, samples_path, scene_path, out_dir;
  std::string method_flag, plot_data_path;
  double iou_threshold = 0.5;
  double alpha_value = 0.0;
  bool alpha_set = false;
  std::uint64_t seed = 0;
  std::vector<double> diou_coords;

  auto* estimate = app.add_subcommand("estimate", "estimate distances per detection");
  estimate->add_option("detections", detections_path, "detection dump JSON")->required();

  auto* warn = app.add_subcommand("warn", "estimate distances and classify Safe/Dangerous");
  warn->add_option("detections", detections_path, "detection dump JSON")->required();

  auto* eval = app.add_subcommand("eval", "score detections against ground truth (mAP@0.5)");
  eval->add_option("detections", detections_path, "detection dump JSON")->required();
  eval->add_option("--gt-dir", gt_dir, "directory with images.json and labels/*.txt")
      ->required();
  eval->add_option("--iou-threshold", iou_threshold, "match threshold")
      ->capture_default_str();

  auto* tt = app.add_subcommand("threshold-test",
                                "nonparametric test over a threshold study CSV");
  tt->add_option("samples", samples_path, "threshold samples CSV")->required();
  tt->add_option("--alpha", alpha_value, "significance level")
      ->each([&](const std::string&) { alpha_set = true; });
  tt->add_option("--method", method_flag,
                 "mann-whitney-exact | mann-whitney-normal-approx | kruskal-wallis");
  tt->add_option("--plot-data", plot_data_path, "write threshold/count series CSV here");

  auto* simulate = app.add_subcommand("simulate", "generate a synthetic scene dataset");
  simulate->add_option("scene", scene_path, "scene spec JSON")->required();
  simulate->add_option("--seed", seed, "noise seed")->capture_default_str();
  simulate->add_option("--out", out_dir, "output directory")->required();

  auto* diou = app.add_subcommand("diou", "DIoU loss breakdown of two boxes");
  diou->add_option("coords", diou_coords,
                   "x_min1 y_min1 x_max1 y_max1 x_min2 y_min2 x_max2 y_max2")
      ->expected(8);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*estimate) return cmd_estimate_or_warn(opts, detections_path, false);
    if (*warn) return cmd_estimate_or_warn(opts, detections_path, true);
    if (*eval) return cmd_eval(opts, detections_path, gt_dir, iou_threshold);
    if (*tt) {
      return cmd_threshold_test(
          opts, samples_path,
          alpha_set ? std::optional<double>(alpha_value) : std::nullopt, method_flag,
          plot_data_path);
    }
    if (*simulate) return cmd_simulate(opts, scene_path, seed, out_dir);
    if (*diou) {
      if (diou_coords.size() != 8) {
        throw desws::InvalidArgument("diou needs exactly 8 coordinates");
      }
      return cmd_diou(opts, diou_coords);
    }
    throw desws::InvalidArgument("no subcommand selected");
  } catch (const desws::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
