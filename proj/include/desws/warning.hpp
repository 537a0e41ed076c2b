// SPDX-License-Identifier: Apache-2.0
//
// Threshold-based Safe/Dangerous classification of distance estimates, and
// the nonparametric analysis of threshold/count observations that backs the
// choice of the danger threshold.
#pragma once

#include <cmath>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "desws/errors.hpp"
#include "desws/rank_tests.hpp"

namespace desws {

enum class Verdict { Safe, Dangerous };

inline const char* to_string(Verdict v) {
  return v == Verdict::Safe ? "Safe" : "Dangerous";
}

struct SafetyVerdict {
  Verdict verdict;
  double distance_m;
  double threshold_m;
};

/// Safe iff distance_m > threshold_m. Equality is classified Dangerous: the
/// boundary is resolved in favor of warning.
inline SafetyVerdict classify(double distance_m, double threshold_m) {
  if (!(std::isfinite(distance_m) && distance_m > 0.0) ||
      !(std::isfinite(threshold_m) && threshold_m > 0.0)) {
    throw NonPositiveInput(
        "NonPositiveInput: classify requires positive finite distance and threshold");
  }
  return SafetyVerdict{distance_m > threshold_m ? Verdict::Safe : Verdict::Dangerous,
                       distance_m, threshold_m};
}

/// One row of a threshold study: a candidate threshold and the number of
/// observations that fell on the dangerous / safe side of it.
struct ThresholdSample {
  double threshold_m = 0.0;
  std::int64_t dangerous_count = 0;
  std::int64_t safe_count = 0;

  friend bool operator==(const ThresholdSample&, const ThresholdSample&) = default;
};

/// Outcome of analyze_thresholds. `selected_threshold_m` echoes the
/// configured threshold: the analysis reports test evidence only, it does
/// not derive a threshold. `selection_rule` makes that explicit in
/// machine-readable reports.
struct ThresholdAnalysis {
  TestResult result;
  double alpha;
  bool significant;  ///< p_value <= alpha
  double selected_threshold_m;
  std::string selection_rule = "configured";
};

constexpr double kDefaultDangerThresholdM = 6.0;

/// Run the chosen nonparametric test on the dangerous-count series against
/// the safe-count series of a threshold study.
inline ThresholdAnalysis analyze_thresholds(
    std::span<const ThresholdSample> samples, double alpha,
    TestMethod method = TestMethod::MannWhitneyExact,
    double selected_threshold_m = kDefaultDangerThresholdM) {
  if (samples.size() < 2) {
    throw FewerThanTwoObservations(
        "FewerThanTwoObservations: threshold analysis requires >= 2 samples, got " +
        std::to_string(samples.size()));
  }
  if (!(std::isfinite(alpha) && alpha > 0.0 && alpha < 1.0)) {
    throw InvalidArgument("InvalidArgument: alpha must lie in (0, 1)");
  }
  std::set<double> seen;
  std::vector<double> dangerous, safe;
  dangerous.reserve(samples.size());
  safe.reserve(samples.size());
  for (const ThresholdSample& s : samples) {
    if (!seen.insert(s.threshold_m).second) {
      throw DuplicateThreshold("DuplicateThreshold: threshold " +
                               std::to_string(s.threshold_m) +
                               " appears more than once");
    }
    dangerous.push_back(static_cast<double>(s.dangerous_count));
    safe.push_back(static_cast<double>(s.safe_count));
  }

  TestResult result;
  switch (method) {
    case TestMethod::MannWhitneyExact:
      result = mann_whitney_u(dangerous, safe, MannWhitneyMode::Exact);
      break;
    case TestMethod::MannWhitneyNormalApprox:
      result = mann_whitney_u(dangerous, safe, MannWhitneyMode::NormalApprox);
      break;
    case TestMethod::KruskalWallis:
      result = kruskal_wallis({dangerous, safe});
      break;
  }
  return ThresholdAnalysis{result, alpha, result.p_value <= alpha,
                           selected_threshold_m};
}

}  // namespace desws
