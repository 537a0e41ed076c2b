// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include <algorithm>
#include <random>

#include "desws/evaluation.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using desws::BBox;
using desws::Detection;
using desws::GroundTruth;
using desws::ImageSample;

namespace {

/// 3-image, 2-class fixture with every matching situation: clear TPs, a
/// below-threshold match, an unclaimed-GT duplicate, a detection with no
/// ground truth at all, plus a zero-ground-truth class.
std::vector<ImageSample> fixture() {
  std::vector<ImageSample> images;
  images.push_back(ImageSample{
      "img0",
      {Detection{"car", BBox(0, 0, 10, 10), 0.9},
       Detection{"car", BBox(21, 21, 31, 31), 0.8},   // IoU 81/119
       Detection{"car", BBox(50, 50, 60, 60), 0.7},   // matches nothing
       Detection{"person", BBox(5, 5, 9, 9), 0.95}},
      {GroundTruth{"car", BBox(0, 0, 10, 10)}, GroundTruth{"car", BBox(20, 20, 30, 30)},
       GroundTruth{"person", BBox(5, 5, 9, 9)}}});
  images.push_back(ImageSample{
      "img1",
      {Detection{"car", BBox(1, 1, 5, 5), 0.6},       // IoU 9/23 < 0.5
       Detection{"person", BBox(10, 10, 20, 20), 0.5},
       Detection{"person", BBox(30, 10, 40, 18), 0.4}},  // IoU 0.8
      {GroundTruth{"car", BBox(0, 0, 4, 4)}, GroundTruth{"person", BBox(10, 10, 20, 20)},
       GroundTruth{"person", BBox(30, 10, 40, 20)}}});
  images.push_back(ImageSample{
      "img2",
      {Detection{"car", BBox(0, 0, 10, 5), 0.85},
       Detection{"car", BBox(0, 0, 10, 5), 0.55},     // duplicate of a claimed GT
       Detection{"truck", BBox(0, 0, 5, 5), 0.9}},    // class with no ground truth
      {GroundTruth{"car", BBox(0, 0, 10, 5)}}});
  return images;
}

}  // namespace

TEST_CASE("match_detections basic cases") {
  const GroundTruth gt{"car", BBox(0, 0, 10, 10)};

  // IoU 0.6 against the single ground truth
  auto labels = desws::match_detections(
      std::vector<Detection>{{"car", BBox(0, 0, 10, 6), 0.9}},
      std::vector<GroundTruth>{gt}, 0.5);
  REQUIRE(labels == std::vector<bool>{true});

  // IoU 0.4, below threshold
  labels = desws::match_detections(
      std::vector<Detection>{{"car", BBox(0, 0, 10, 4), 0.9}},
      std::vector<GroundTruth>{gt}, 0.5);
  REQUIRE(labels == std::vector<bool>{false});

  // higher confidence claims the ground truth first
  labels = desws::match_detections(
      std::vector<Detection>{{"car", BBox(0, 0, 10, 5.5), 0.9},
                             {"car", BBox(0, 0, 10, 9.5), 0.8}},
      std::vector<GroundTruth>{gt}, 0.5);
  REQUIRE(labels == std::vector<bool>{true, false});

  CHECK_THROWS_AS(desws::match_detections(std::vector<Detection>{},
                                          std::vector<GroundTruth>{}, 0.0),
                  desws::InvalidArgument);
  CHECK_THROWS_AS(desws::match_detections(std::vector<Detection>{},
                                          std::vector<GroundTruth>{}, 1.5),
                  desws::InvalidArgument);
}

TEST_CASE("average_precision basic cases") {
  CHECK(desws::average_precision({true}, 1) == 1.0);
  CHECK(desws::average_precision({false, true}, 1) == Approx(0.5).epsilon(1e-12));
  CHECK(desws::average_precision({true, false}, 1) == 1.0);
  CHECK_THROWS_AS(desws::average_precision({true}, 0), desws::ZeroGroundTruth);
}

TEST_CASE("average_precision matches the brute-force oracle") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> len(0, 12);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = len(rng);
    std::vector<bool> labels(n);
    std::size_t tp = 0;
    for (int i = 0; i < n; ++i) {
      labels[i] = coin(rng) == 1;
      if (labels[i]) ++tp;
    }
    std::uniform_int_distribution<std::size_t> extra(0, 3);
    const std::size_t num_gt = std::max<std::size_t>(1, tp + extra(rng));
    REQUIRE(desws::average_precision(labels, num_gt) ==
            Approx(oracle::bf_average_precision(labels, num_gt)).epsilon(1e-12));
  }
}

TEST_CASE("average_precision FP placement properties") {
  std::mt19937_64 rng(987);
  std::uniform_int_distribution<int> len(1, 10);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = len(rng);
    std::vector<bool> labels(n);
    std::size_t tp = 0;
    for (int i = 0; i < n; ++i) {
      labels[i] = coin(rng) == 1;
      if (labels[i]) ++tp;
    }
    if (tp == 0) labels[0] = true, tp = 1;
    const std::size_t num_gt = tp + 1;
    const double ap = desws::average_precision(labels, num_gt);

    // a trailing FP never advances recall, so AP is unchanged
    std::vector<bool> trailing = labels;
    trailing.push_back(false);
    REQUIRE(desws::average_precision(trailing, num_gt) == ap);

    // a leading FP dilutes every later precision, so AP strictly drops
    std::vector<bool> leading;
    leading.push_back(false);
    leading.insert(leading.end(), labels.begin(), labels.end());
    REQUIRE(desws::average_precision(leading, num_gt) < ap);
  }
}

TEST_CASE("evaluate the 3-image 2-class fixture") {
  const auto images = fixture();
  const auto report = desws::evaluate(images, 0.5);

  REQUIRE(report.per_class.count("car") == 1);
  REQUIRE(report.per_class.count("person") == 1);
  REQUIRE(report.per_class.count("truck") == 1);

  const auto& car = report.per_class.at("car");
  // pooled car labels by confidence: .9 TP, .85 TP, .8 TP, .7 FP, .6 FP, .55 FP
  CHECK(car.num_gt == 4);
  CHECK(car.tp == 3);
  CHECK(car.fp == 3);
  CHECK(car.fn == 1);
  REQUIRE(car.ap.has_value());
  CHECK(*car.ap == Approx(0.75).epsilon(1e-12));

  const auto& person = report.per_class.at("person");
  CHECK(person.num_gt == 3);
  CHECK(person.tp == 3);
  CHECK(person.fp == 0);
  REQUIRE(person.ap.has_value());
  CHECK(*person.ap == 1.0);

  // a class without ground truth carries counts but no AP and is excluded
  // from the mean
  const auto& truck = report.per_class.at("truck");
  CHECK(truck.num_gt == 0);
  CHECK(truck.fp == 1);
  CHECK_FALSE(truck.ap.has_value());

  CHECK(report.map_50 == Approx(0.875).epsilon(1e-12));

  // cross-check both class APs against the brute-force oracle
  CHECK(*car.ap == Approx(oracle::bf_average_precision(
                       {true, true, true, false, false, false}, 4))
                       .epsilon(1e-12));
}

TEST_CASE("evaluate perfect and empty detectors") {
  std::vector<ImageSample> images;
  images.push_back(ImageSample{"a",
                               {Detection{"car", BBox(0, 0, 5, 5), 1.0},
                                Detection{"person", BBox(8, 8, 9, 9), 1.0}},
                               {GroundTruth{"car", BBox(0, 0, 5, 5)},
                                GroundTruth{"person", BBox(8, 8, 9, 9)}}});
  CHECK(desws::evaluate(images, 0.5).map_50 == 1.0);

  std::vector<ImageSample> no_dets;
  no_dets.push_back(
      ImageSample{"a", {}, {GroundTruth{"car", BBox(0, 0, 5, 5)}}});
  const auto report = desws::evaluate(no_dets, 0.5);
  CHECK(report.map_50 == 0.0);
  CHECK(report.per_class.at("car").fn == 1);

  CHECK_THROWS_AS(desws::evaluate(std::vector<ImageSample>{}, 0.5),
                  desws::EmptyDataset);
}

TEST_CASE("cross-class detections never match") {
  std::vector<ImageSample> images;
  images.push_back(ImageSample{"a",
                               {Detection{"truck", BBox(0, 0, 5, 5), 1.0}},
                               {GroundTruth{"car", BBox(0, 0, 5, 5)}}});
  const auto report = desws::evaluate(images, 0.5);
  CHECK(report.per_class.at("car").tp == 0);
  CHECK(report.per_class.at("truck").fp == 1);
  CHECK(report.map_50 == 0.0);
}

TEST_CASE("evaluate is invariant under image permutation") {
  auto images = fixture();
  // cross-image confidence tie with differing TP/FP labels: img1 gains a TP
  // at 0.55, img2 already has an FP at 0.55, so tie order affects AP
  images[1].detections.push_back(Detection{"car", BBox(0, 0, 4, 4), 0.55});
  const auto baseline = desws::evaluate(images, 0.5);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    std::shuffle(images.begin(), images.end(), rng);
    const auto report = desws::evaluate(images, 0.5);
    REQUIRE(report.map_50 == baseline.map_50);
    REQUIRE(report.per_class.size() == baseline.per_class.size());
    for (const auto& [cls, ce] : baseline.per_class) {
      const auto& other = report.per_class.at(cls);
      REQUIRE(other.ap == ce.ap);
      REQUIRE(other.tp == ce.tp);
      REQUIRE(other.fp == ce.fp);
      REQUIRE(other.fn == ce.fn);
    }
  }
}
