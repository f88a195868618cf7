#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "linkwatch/features/features.hpp"

namespace linkwatch::learn {

using features::FeatureVector;
using features::LabeledInstance;
using features::Schema;
using labeling::LabelValue;

struct Dataset {
  Schema schema = Schema::kFull;
  std::vector<LabeledInstance> instances;

  std::size_t size() const { return instances.size(); }
  std::size_t count(LabelValue value) const;
  std::vector<LabelValue> labels() const;

  // Every instance carries `schema`.
  void validate() const;
  // validate() plus at least two instances and both classes present.
  void require_trainable() const;
};

Dataset subset(const Dataset& data, std::span<const std::size_t> indices);

// Dense imputed view; row-major, `malicious[i]` is 1 for MALICIOUS.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;
  std::vector<std::uint8_t> malicious;

  const double* row(std::size_t i) const { return values.data() + i * cols; }
  double at(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

// Per-feature median of present values (mean of the middle pair for even
// counts); 0 for a feature that is MISSING everywhere.
std::vector<double> compute_medians(const Dataset& data);

std::vector<double> impute(const FeatureVector& fv, std::span<const double> medians);
Matrix to_matrix(const Dataset& data, std::span<const double> medians);

struct SplitSpec {
  double train_fraction = 0.75;
  std::uint64_t seed = 0;
  bool stratified = true;
};

// Train size is floor(fraction * n) per class when stratified, otherwise
// floor(fraction * N). Both halves keep the input order.
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, const SplitSpec& spec);

}  // namespace linkwatch::learn
