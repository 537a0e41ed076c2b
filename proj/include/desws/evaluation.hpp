// SPDX-License-Identifier: Apache-2.0
//
// Detection-quality scoring: greedy confidence-ordered matching at a fixed
// IoU threshold, all-point interpolated average precision per class, and the
// mean over classes (mAP).
//
// Matching is per image and per class. Pooling across images sorts each
// class's detections by descending confidence with a deterministic tie-break
// (image id, then input order within the image), so the report is invariant
// under permutation of the input images.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "desws/detection.hpp"
#include "desws/errors.hpp"
#include "desws/geometry.hpp"

namespace desws {

/// Everything known about one image: what the detector said and what is
/// actually there.
struct ImageSample {
  std::string image_id;
  std::vector<Detection> detections;
  std::vector<GroundTruth> ground_truths;
};

/// Greedy matching of detections against ground truths from one image and
/// one class. Detections are taken in order of descending confidence (ties:
/// input order); each claims the unmatched ground truth of highest IoU when
/// that IoU reaches `iou_threshold`. Returns true/false (TP/FP) per
/// detection, in the matching order.
inline std::vector<bool> match_detections(std::span<const Detection> dets,
                                          std::span<const GroundTruth> gts,
                                          double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw InvalidArgument("InvalidArgument: iou_threshold must lie in (0, 1]");
  }
  std::vector<std::size_t> order(dets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dets[a].confidence > dets[b].confidence;
  });

  std::vector<bool> gt_taken(gts.size(), false);
  std::vector<bool> labels;
  labels.reserve(dets.size());
  for (std::size_t i : order) {
    double best_iou = 0.0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_taken[g]) continue;
      const double v = iou(dets[i].box, gts[g].box);
      if (v > best_iou) {
        best_iou = v;
        best_gt = g;
      }
    }
    if (best_gt < gts.size() && best_iou >= iou_threshold) {
      gt_taken[best_gt] = true;
      labels.push_back(true);
    } else {
      labels.push_back(false);
    }
  }
  return labels;
}

/// All-point interpolated average precision from an ordered TP/FP sequence.
/// `tp_flags` must be ordered by descending confidence. The precision
/// envelope is made monotonically non-increasing from right to left and
/// integrated over recall; each TP advances recall by 1/num_gt.
inline double average_precision(const std::vector<bool>& tp_flags, std::size_t num_gt) {
  if (num_gt == 0) {
    throw ZeroGroundTruth("ZeroGroundTruth: average precision needs >= 1 ground truth");
  }
  const std::size_t n = tp_flags.size();
  std::vector<std::size_t> tp_cum(n, 0);
  std::size_t running = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (tp_flags[i]) ++running;
    tp_cum[i] = running;
  }
  // sum the envelope over TP positions and divide once, so a perfect
  // prefix scores exactly num_gt / num_gt = 1
  double envelope_sum = 0.0;
  double envelope = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    const double precision = static_cast<double>(tp_cum[i]) / static_cast<double>(i + 1);
    envelope = std::max(envelope, precision);
    if (tp_flags[i]) envelope_sum += envelope;
  }
  return envelope_sum / static_cast<double>(num_gt);
}

struct ClassEval {
  std::optional<double> ap;  ///< absent when the class has no ground truth
  std::int64_t num_gt = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
};

struct EvalReport {
  double iou_threshold = 0.5;
  std::map<std::string, ClassEval> per_class;
  double map_50 = 0.0;  ///< mean AP over classes with >= 1 ground truth
};

/// Evaluate a whole dataset. Per-class AP pools detections across images
/// (globally confidence-sorted, tie-break by image id then input order);
/// map_50 averages AP over classes with at least one ground truth. Images
/// must carry distinct image_ids.
inline EvalReport evaluate(std::span<const ImageSample> images,
                           double iou_threshold = 0.5) {
  if (images.empty()) {
    throw EmptyDataset("EmptyDataset: evaluate requires at least one image");
  }

  struct PooledDet {
    double confidence;
    const std::string* image_id;
    std::size_t input_index;
    bool tp;
  };
  std::map<std::string, std::vector<PooledDet>> pooled;
  std::map<std::string, std::int64_t> gt_counts;

  for (const ImageSample& img : images) {
    std::set<std::string> classes;
    for (const auto& d : img.detections) classes.insert(d.class_label);
    for (const auto& g : img.ground_truths) {
      classes.insert(g.class_label);
      ++gt_counts[g.class_label];
    }
    for (const std::string& cls : classes) {
      std::vector<Detection> dets;
      std::vector<std::size_t> det_indices;
      for (std::size_t i = 0; i < img.detections.size(); ++i) {
        if (img.detections[i].class_label == cls) {
          dets.push_back(img.detections[i]);
          det_indices.push_back(i);
        }
      }
      std::vector<GroundTruth> gts;
      for (const auto& g : img.ground_truths) {
        if (g.class_label == cls) gts.push_back(g);
      }
      if (dets.empty()) {
        pooled[cls];  // class exists in the report even without detections
        continue;
      }
      // pre-sort by confidence so the matcher's order and ours coincide
      std::vector<std::size_t> order(dets.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return dets[a].confidence > dets[b].confidence;
      });
      std::vector<Detection> sorted_dets;
      sorted_dets.reserve(dets.size());
      for (std::size_t i : order) sorted_dets.push_back(dets[i]);
      const std::vector<bool> labels = match_detections(sorted_dets, gts, iou_threshold);
      auto& pool = pooled[cls];
      for (std::size_t k = 0; k < order.size(); ++k) {
        pool.push_back(PooledDet{sorted_dets[k].confidence, &img.image_id,
                                 det_indices[order[k]], labels[k]});
      }
    }
  }

  EvalReport report;
  report.iou_threshold = iou_threshold;
  double ap_sum = 0.0;
  std::size_t ap_classes = 0;
  for (auto& [cls, pool] : pooled) {
    std::stable_sort(pool.begin(), pool.end(), [](const PooledDet& a, const PooledDet& b) {
      if (a.confidence != b.confidence) return a.confidence > b.confidence;
      if (*a.image_id != *b.image_id) return *a.image_id < *b.image_id;
      return a.input_index < b.input_index;
    });
    ClassEval ce;
    ce.num_gt = gt_counts.count(cls) ? gt_counts[cls] : 0;
    std::vector<bool> labels(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
      labels[i] = pool[i].tp;
      if (pool[i].tp) ++ce.tp;
    }
    ce.fp = static_cast<std::int64_t>(pool.size()) - ce.tp;
    ce.fn = ce.num_gt - ce.tp;
    if (ce.num_gt > 0) {
      ce.ap = average_precision(labels, static_cast<std::size_t>(ce.num_gt));
      ap_sum += *ce.ap;
      ++ap_classes;
    }
    report.per_class.emplace(cls, std::move(ce));
  }
  report.map_50 = ap_classes > 0 ? ap_sum / static_cast<double>(ap_classes) : 0.0;
  return report;
}

}  // namespace desws
