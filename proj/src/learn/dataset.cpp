#include "linkwatch/learn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "linkwatch/core/error.hpp"
#include "linkwatch/core/random.hpp"

namespace linkwatch::learn {

std::size_t Dataset::count(LabelValue value) const {
  return static_cast<std::size_t>(
      std::count_if(instances.begin(), instances.end(),
                    [&](const LabeledInstance& i) { return i.label.value == value; }));
}

std::vector<LabelValue> Dataset::labels() const {
  std::vector<LabelValue> out;
  out.reserve(instances.size());
  for (const LabeledInstance& i : instances) out.push_back(i.label.value);
  return out;
}

void Dataset::validate() const {
  for (const LabeledInstance& i : instances) {
    if (i.features.schema != schema)
      fail(ErrorKind::kSchemaMismatch, "instance '" + i.link_id + "' has schema " +
                                           features::to_string(i.features.schema) +
                                           ", dataset is " + features::to_string(schema));
  }
}

void Dataset::require_trainable() const {
  validate();
  if (size() < 2) fail(ErrorKind::kInvalidArgument, "degenerate dataset: fewer than 2 instances");
  if (count(LabelValue::kMalicious) == 0 || count(LabelValue::kBenign) == 0)
    fail(ErrorKind::kInvalidArgument, "degenerate dataset: only one class present");
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Dataset out;
  out.schema = data.schema;
  out.instances.reserve(indices.size());
  for (std::size_t i : indices) out.instances.push_back(data.instances.at(i));
  return out;
}

std::vector<double> compute_medians(const Dataset& data) {
  data.validate();
  const std::size_t f = features::feature_count(data.schema);
  std::vector<std::vector<double>> columns(f);
  for (const LabeledInstance& inst : data.instances) {
    auto values = inst.features.values();
    for (std::size_t j = 0; j < f; ++j)
      if (values[j]) columns[j].push_back(*values[j]);
  }
  std::vector<double> medians(f, 0.0);
  for (std::size_t j = 0; j < f; ++j) {
    auto& c = columns[j];
    if (c.empty()) continue;
    std::sort(c.begin(), c.end());
    const std::size_t mid = c.size() / 2;
    medians[j] = c.size() % 2 == 1 ? c[mid] : (c[mid - 1] + c[mid]) / 2.0;
  }
  return medians;
}

std::vector<double> impute(const FeatureVector& fv, std::span<const double> medians) {
  auto values = fv.values();
  if (values.size() != medians.size())
    fail(ErrorKind::kSchemaMismatch, "feature vector width differs from imputation medians");
  std::vector<double> out(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) out[j] = values[j] ? *values[j] : medians[j];
  return out;
}

Matrix to_matrix(const Dataset& data, std::span<const double> medians) {
  data.validate();
  Matrix m;
  m.rows = data.size();
  m.cols = features::feature_count(data.schema);
  m.values.reserve(m.rows * m.cols);
  m.malicious.reserve(m.rows);
  for (const LabeledInstance& inst : data.instances) {
    auto row = impute(inst.features, medians);
    m.values.insert(m.values.end(), row.begin(), row.end());
    m.malicious.push_back(inst.label.malicious() ? 1 : 0);
  }
  return m;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, const SplitSpec& spec) {
  data.validate();
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
    fail(ErrorKind::kInvalidArgument, "train_fraction must lie in (0, 1)");

  Rng rng = Rng(spec.seed).child("split");
  std::vector<bool> in_train(data.size(), false);
  auto take = [&](std::vector<std::size_t> idx, std::size_t n_train, std::uint64_t stream) {
    Rng r = rng.child("class", stream);
    r.shuffle(idx);
    for (std::size_t k = 0; k < n_train; ++k) in_train[idx[k]] = true;
  };
  auto floor_share = [&](std::size_t n) {
    return static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(n)));
  };

  if (spec.stratified) {
    std::vector<std::size_t> benign, malicious;
    for (std::size_t i = 0; i < data.size(); ++i)
      (data.instances[i].label.malicious() ? malicious : benign).push_back(i);
    if (benign.empty() || malicious.empty())
      fail(ErrorKind::kInvalidArgument, "stratified split requested but a class is absent");
    // Each class gets the floor of its share; the one instance the two floors
    // can lose against floor(f * N) goes to the class with the larger remainder.
    std::size_t nb = floor_share(benign.size());
    std::size_t nm = floor_share(malicious.size());
    if (nb + nm < floor_share(data.size())) {
      const double rb = spec.train_fraction * static_cast<double>(benign.size()) - static_cast<double>(nb);
      const double rm = spec.train_fraction * static_cast<double>(malicious.size()) - static_cast<double>(nm);
      (rm > rb ? nm : nb) += 1;
    }
    take(std::move(benign), nb, 0);
    take(std::move(malicious), nm, 1);
  } else {
    std::vector<std::size_t> all(data.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    take(std::move(all), floor_share(data.size()), 2);
  }

  std::pair<Dataset, Dataset> out;
  out.first.schema = out.second.schema = data.schema;
  for (std::size_t i = 0; i < data.size(); ++i)
    (in_train[i] ? out.first : out.second).instances.push_back(data.instances[i]);
  return out;
}

}  // namespace linkwatch::learn
