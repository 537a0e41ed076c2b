// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch.hpp>

#include <cmath>
#include <numeric>
#include <random>

#include "desws/se_block.hpp"
#include "test_util.hpp"

using desws::FeatureMap;
using desws::SeWeights;
using testutil::close;

namespace {

SeWeights zero_weights(std::size_t channels, std::size_t r) {
  const std::size_t hidden = channels / r;
  return SeWeights(channels, r, std::vector<double>(hidden * channels, 0.0),
                   std::vector<double>(hidden, 0.0),
                   std::vector<double>(channels * hidden, 0.0),
                   std::vector<double>(channels, 0.0));
}

// C=2, r=1 fixture with hand-traced integer arithmetic:
//   z = (2.5, 0.5)
//   w1*z + b1 = (2.5 - 0.5 + 1, 2*0.5 - 2) = (3, -1) -> relu -> (3, 0)
//   w2*h + b2 = (3 + 0, -3 + 0 + 1) = (3, -2)
const double kFixtureLogit0 = 3.0;
const double kFixtureLogit1 = -2.0;

FeatureMap fixture_map() {
  return FeatureMap(2, 2, 2, {1, 2, 3, 4, -1, 0, 1, 2});
}

SeWeights fixture_weights() {
  return SeWeights(2, 1, {1, -1, 0, 2}, {1, -2}, {1, 1, -1, 2}, {0, 1});
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

TEST_CASE("squeeze") {
  CHECK(desws::squeeze(FeatureMap::zeros(3, 2, 2)) ==
        std::vector<double>{0.0, 0.0, 0.0});

  FeatureMap constant(2, 2, 3, std::vector<double>(12, 0.0));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      constant.at(0, i, j) = 7.25;
      constant.at(1, i, j) = -3.0;
    }
  CHECK(desws::squeeze(constant) == std::vector<double>{7.25, -3.0});

  const FeatureMap small(1, 2, 2, {1, 2, 3, 4});
  CHECK(desws::squeeze(small) == std::vector<double>{2.5});
}

TEST_CASE("excite with zero weights is exactly one half") {
  const auto s = desws::excite({1.0, -2.0, 3.0, 0.0}, zero_weights(4, 2));
  REQUIRE(s.size() == 4);
  for (double v : s) CHECK(v == 0.5);
}

TEST_CASE("excite is monotone in the output bias") {
  double prev = 0.0;
  for (double b2 : {0.0, 5.0, 10.0}) {
    SeWeights w = zero_weights(2, 1);
    w.b2 = {b2, b2};
    const auto s = desws::excite({0.3, 0.7}, w);
    CHECK(s[0] > prev);
    CHECK(s[0] < 1.0);
    prev = s[0];
  }
}

TEST_CASE("excite matches the hand-traced fixture") {
  const auto s = desws::excite(desws::squeeze(fixture_map()), fixture_weights());
  REQUIRE(s.size() == 2);
  CHECK(s[0] == Approx(sigmoid(kFixtureLogit0)).epsilon(1e-12));
  CHECK(s[1] == Approx(sigmoid(kFixtureLogit1)).epsilon(1e-12));
}

TEST_CASE("excite dimension checks") {
  CHECK_THROWS_AS(desws::excite({1.0, 2.0, 3.0}, zero_weights(2, 1)),
                  desws::DimensionMismatch);
  CHECK_THROWS_AS(SeWeights(3, 2, {}, {}, {}, {}), desws::DimensionMismatch);
  CHECK_THROWS_AS(SeWeights(2, 1, {1}, {1, 1}, {1, 1, 1, 1}, {1, 1}),
                  desws::DimensionMismatch);
}

TEST_CASE("se_forward zero weights halve the input exactly") {
  const FeatureMap fm = fixture_map();
  const FeatureMap out = desws::se_forward(fm, zero_weights(2, 2));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        REQUIRE(out.at(c, i, j) == 0.5 * fm.at(c, i, j));
      }
}

TEST_CASE("se_forward of a zero map is zero") {
  const FeatureMap out =
      desws::se_forward(FeatureMap::zeros(4, 2, 2),
                        desws::make_random_se_weights(4, 2, 123));
  for (double v : out.values()) CHECK(v == 0.0);
}

TEST_CASE("se_forward matches the composed hand oracle") {
  const FeatureMap fm = fixture_map();
  const FeatureMap out = desws::se_forward(fm, fixture_weights());
  const double s0 = sigmoid(kFixtureLogit0);
  const double s1 = sigmoid(kFixtureLogit1);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      REQUIRE(close(out.at(0, i, j), s0 * fm.at(0, i, j), 1e-12));
      REQUIRE(close(out.at(1, i, j), s1 * fm.at(1, i, j), 1e-12));
    }
}

TEST_CASE("se_forward properties on seeded fixtures") {
  std::mt19937_64 rng(777);
  std::normal_distribution<double> value(0.0, 2.0);
  const std::size_t channel_options[] = {2, 4, 8, 16};
  const std::size_t hw_options[] = {1, 2, 4};

  for (int fixture_idx = 0; fixture_idx < 100; ++fixture_idx) {
    const std::size_t c = channel_options[fixture_idx % 4];
    const std::size_t h = hw_options[(fixture_idx / 4) % 3];
    const std::size_t w = hw_options[(fixture_idx / 12) % 3];
    std::size_t r = 1;
    for (std::size_t cand : {std::size_t{1}, std::size_t{2}, c / 2, c}) {
      if (cand >= 1 && c % cand == 0 && (fixture_idx % 3 == 0 || cand <= 2)) r = cand;
    }

    std::vector<double> values(c * h * w);
    for (auto& v : values) v = value(rng);
    const FeatureMap fm(c, h, w, values);
    const SeWeights weights =
        desws::make_random_se_weights(c, r, 1000 + static_cast<std::uint64_t>(fixture_idx));

    const auto scales = desws::excite(desws::squeeze(fm), weights);
    const FeatureMap out = desws::se_forward(fm, weights);

    REQUIRE(out.channels() == c);
    REQUIRE(out.height() == h);
    REQUIRE(out.width() == w);

    for (std::size_t ch = 0; ch < c; ++ch) {
      REQUIRE(scales[ch] > 0.0);
      REQUIRE(scales[ch] < 1.0);
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j) {
          const double in = fm.at(ch, i, j);
          const double got = out.at(ch, i, j);
          if (in != 0.0) {
            REQUIRE(std::abs(got) < std::abs(in));
            REQUIRE(close(got / in, scales[ch], 1e-12));
          } else {
            REQUIRE(got == 0.0);
          }
        }
    }
  }
}

TEST_CASE("se_forward is equivariant under channel permutation") {
  std::mt19937_64 rng(31415);
  std::normal_distribution<double> value(0.0, 1.0);
  const std::size_t c = 6, h = 2, w = 3, r = 2;
  const std::size_t hidden = c / r;

  std::vector<double> values(c * h * w);
  for (auto& v : values) v = value(rng);
  const FeatureMap fm(c, h, w, values);
  const SeWeights weights = desws::make_random_se_weights(c, r, 55);
  const FeatureMap out = desws::se_forward(fm, weights);

  std::vector<std::size_t> perm(c);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);

  FeatureMap fm_p = FeatureMap::zeros(c, h, w);
  std::vector<double> w1_p(hidden * c), w2_p(c * hidden), b2_p(c);
  for (std::size_t ch = 0; ch < c; ++ch) {
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) fm_p.at(ch, i, j) = fm.at(perm[ch], i, j);
    for (std::size_t k = 0; k < hidden; ++k) {
      w1_p[k * c + ch] = weights.w1[k * c + perm[ch]];
      w2_p[ch * hidden + k] = weights.w2[perm[ch] * hidden + k];
    }
    b2_p[ch] = weights.b2[perm[ch]];
  }
  const SeWeights weights_p(c, r, w1_p, weights.b1, w2_p, b2_p);
  const FeatureMap out_p = desws::se_forward(fm_p, weights_p);

  // permuted dot products accumulate in a different order, so compare to
  // rounding rather than bitwise
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        REQUIRE(close(out_p.at(ch, i, j), out.at(perm[ch], i, j), 1e-12));
      }
}

TEST_CASE("feature map validation") {
  CHECK_THROWS_AS(FeatureMap(0, 1, 1, {}), desws::DimensionMismatch);
  CHECK_THROWS_AS(FeatureMap(1, 1, 1, {1.0, 2.0}), desws::DimensionMismatch);
  CHECK_THROWS_AS(FeatureMap(1, 1, 1, {std::nan("")}), desws::DimensionMismatch);
}
