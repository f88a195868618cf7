#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "linkwatch/learn/dataset.hpp"

namespace linkwatch::eval {

struct FeatureGain {
  std::string feature;
  double gain = 0.0;  // bits
};

struct FeatureRanking {
  std::vector<FeatureGain> entries;  // non-increasing gain, ties by name
};

// Binary entropy of a two-class count pair, in bits.
double entropy_bits(std::size_t benign, std::size_t malicious);

// H(labels) minus the smallest weighted child entropy over all midpoint
// thresholds between distinct sorted values; 0 for a constant feature.
double information_gain(std::span<const double> values, std::span<const std::uint8_t> malicious);

// MISSING values are imputed with full-dataset medians before scoring.
FeatureRanking rank_features(const learn::Dataset& data);
namespace serial {
FeatureRanking rank_features(const learn::Dataset& data);
}

}  // namespace linkwatch::eval
