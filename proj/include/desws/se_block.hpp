// SPDX-License-Identifier: Apache-2.0
//
// Reference forward pass of the Squeeze-and-Excitation channel-attention
// block: global average pool per channel (squeeze), bottleneck
// FC -> ReLU -> FC -> sigmoid (excitation), then per-channel rescaling of the
// input. Forward only; there is no backward pass here.
#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "desws/errors.hpp"
#include "desws/rng.hpp"

namespace desws {

/// Dense C x H x W tensor, row-major (channel, row, column).
class FeatureMap {
 public:
  FeatureMap(std::size_t channels, std::size_t height, std::size_t width,
             std::vector<double> values)
      : channels_(channels), height_(height), width_(width), values_(std::move(values)) {
    if (channels_ == 0 || height_ == 0 || width_ == 0) {
      throw DimensionMismatch("DimensionMismatch: feature map dimensions must be >= 1");
    }
    if (values_.size() != channels_ * height_ * width_) {
      throw DimensionMismatch(
          "DimensionMismatch: expected " + std::to_string(channels_ * height_ * width_) +
          " values, got " + std::to_string(values_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) {
        throw DimensionMismatch("DimensionMismatch: feature map values must be finite");
      }
    }
  }

  static FeatureMap zeros(std::size_t channels, std::size_t height, std::size_t width) {
    return FeatureMap(channels, height, width,
                      std::vector<double>(channels * height * width, 0.0));
  }

  std::size_t channels() const { return channels_; }
  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }

  double at(std::size_t c, std::size_t i, std::size_t j) const {
    return values_[(c * height_ + i) * width_ + j];
  }
  double& at(std::size_t c, std::size_t i, std::size_t j) {
    return values_[(c * height_ + i) * width_ + j];
  }
  const std::vector<double>& values() const { return values_; }

 private:
  std::size_t channels_, height_, width_;
  std::vector<double> values_;
};

/// Bottleneck weights of the excitation map. With C channels and reduction
/// ratio r (r must divide C), the hidden size is C/r:
///   w1: (C/r) x C, b1: C/r, w2: C x (C/r), b2: C, all row-major.
struct SeWeights {
  SeWeights(std::size_t channels, std::size_t reduction_ratio, std::vector<double> w1,
            std::vector<double> b1, std::vector<double> w2, std::vector<double> b2)
      : channels(channels),
        reduction_ratio(reduction_ratio),
        w1(std::move(w1)),
        b1(std::move(b1)),
        w2(std::move(w2)),
        b2(std::move(b2)) {
    if (channels == 0 || reduction_ratio == 0 || channels % reduction_ratio != 0) {
      throw DimensionMismatch(
          "DimensionMismatch: reduction ratio must divide the channel count (got C=" +
          std::to_string(channels) + ", r=" + std::to_string(reduction_ratio) + ")");
    }
    const std::size_t hidden = channels / reduction_ratio;
    if (this->w1.size() != hidden * channels || this->b1.size() != hidden ||
        this->w2.size() != channels * hidden || this->b2.size() != channels) {
      throw DimensionMismatch("DimensionMismatch: SE weight shapes are inconsistent");
    }
    for (const auto* vec : {&this->w1, &this->b1, &this->w2, &this->b2}) {
      for (double v : *vec) {
        if (!std::isfinite(v)) {
          throw DimensionMismatch("DimensionMismatch: SE weights must be finite");
        }
      }
    }
  }

  std::size_t hidden() const { return channels / reduction_ratio; }

  std::size_t channels;
  std::size_t reduction_ratio;
  std::vector<double> w1, b1, w2, b2;
};

/// Default reduction ratio when nothing is configured.
constexpr std::size_t kDefaultSeReduction = 16;

/// Global average pool: z_c = mean of channel c. Accumulation is sequential
/// in row-major order, fixed for determinism.
inline std::vector<double> squeeze(const FeatureMap& fm) {
  std::vector<double> z(fm.channels(), 0.0);
  const double scale = 1.0 / static_cast<double>(fm.height() * fm.width());
  for (std::size_t c = 0; c < fm.channels(); ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < fm.height(); ++i) {
      for (std::size_t j = 0; j < fm.width(); ++j) {
        sum += fm.at(c, i, j);
      }
    }
    z[c] = sum * scale;
  }
  return z;
}

/// Excitation: s = sigmoid(w2 * relu(w1 * z + b1) + b2). Every scale lies
/// strictly inside (0, 1).
inline std::vector<double> excite(const std::vector<double>& z, const SeWeights& w) {
  if (z.size() != w.channels) {
    throw DimensionMismatch("DimensionMismatch: excite expected " +
                            std::to_string(w.channels) + " channels, got " +
                            std::to_string(z.size()));
  }
  const std::size_t hidden = w.hidden();
  std::vector<double> h(hidden, 0.0);
  for (std::size_t r = 0; r < hidden; ++r) {
    double acc = w.b1[r];
    for (std::size_t c = 0; c < w.channels; ++c) acc += w.w1[r * w.channels + c] * z[c];
    h[r] = acc > 0.0 ? acc : 0.0;
  }
  std::vector<double> s(w.channels, 0.0);
  for (std::size_t c = 0; c < w.channels; ++c) {
    double acc = w.b2[c];
    for (std::size_t r = 0; r < hidden; ++r) acc += w.w2[c * hidden + r] * h[r];
    s[c] = 1.0 / (1.0 + std::exp(-acc));
  }
  return s;
}

/// Full block: out[c,i,j] = s_c * fm[c,i,j] with s = excite(squeeze(fm), w).
/// Output shape equals input shape.
inline FeatureMap se_forward(const FeatureMap& fm, const SeWeights& w) {
  if (fm.channels() != w.channels) {
    throw DimensionMismatch("DimensionMismatch: se_forward expected " +
                            std::to_string(w.channels) + " channels, got " +
                            std::to_string(fm.channels()));
  }
  const std::vector<double> s = excite(squeeze(fm), w);
  FeatureMap out = fm;
  for (std::size_t c = 0; c < fm.channels(); ++c) {
    for (std::size_t i = 0; i < fm.height(); ++i) {
      for (std::size_t j = 0; j < fm.width(); ++j) {
        out.at(c, i, j) = s[c] * fm.at(c, i, j);
      }
    }
  }
  return out;
}

/// Reproducible weights for tests and demos: uniform in [-1/sqrt(fan_in),
/// 1/sqrt(fan_in)] per layer, drawn from a fixed-seed stream.
inline SeWeights make_random_se_weights(std::size_t channels, std::size_t reduction_ratio,
                                        std::uint64_t seed) {
  if (channels == 0 || reduction_ratio == 0 || channels % reduction_ratio != 0) {
    throw DimensionMismatch(
        "DimensionMismatch: reduction ratio must divide the channel count");
  }
  const std::size_t hidden = channels / reduction_ratio;
  SplitMix64 rng(seed);
  const double bound1 = 1.0 / std::sqrt(static_cast<double>(channels));
  const double bound2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  std::vector<double> w1(hidden * channels), b1(hidden), w2(channels * hidden), b2(channels);
  for (double& v : w1) v = rng.uniform(-bound1, bound1);
  for (double& v : b1) v = rng.uniform(-bound1, bound1);
  for (double& v : w2) v = rng.uniform(-bound2, bound2);
  for (double& v : b2) v = rng.uniform(-bound2, bound2);
  return SeWeights(channels, reduction_ratio, std::move(w1), std::move(b1), std::move(w2),
                   std::move(b2));
}

}  // namespace desws
