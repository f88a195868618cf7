#include "linkwatch/eval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linkwatch/core/error.hpp"

namespace linkwatch::eval {

double entropy_bits(std::size_t benign, std::size_t malicious) {
  const double n = static_cast<double>(benign + malicious);
  double h = 0.0;
  for (std::size_t c : {benign, malicious}) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log2(p);
  }
  return h;
}

double information_gain(std::span<const double> values, std::span<const std::uint8_t> malicious) {
  if (values.size() != malicious.size())
    fail(ErrorKind::kInvalidArgument, "information_gain: length mismatch");
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::size_t c1 = 0;
  for (std::uint8_t y : malicious) c1 += y ? 1 : 0;
  const std::size_t c0 = n - c1;
  const double parent = entropy_bits(c0, c1);

  double best_children = parent;
  std::size_t l0 = 0, l1 = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (malicious[order[i]]) ++l1;
    else ++l0;
    if (!(values[order[i]] < values[order[i + 1]])) continue;
    const std::size_t nl = l0 + l1;
    const double children =
        (static_cast<double>(nl) * entropy_bits(l0, l1) +
         static_cast<double>(n - nl) * entropy_bits(c0 - l0, c1 - l1)) /
        static_cast<double>(n);
    best_children = std::min(best_children, children);
  }
  return std::max(0.0, parent - best_children);
}

namespace {

struct Columns {
  std::vector<std::vector<double>> values;
  std::vector<std::uint8_t> malicious;
};

Columns prepare(const learn::Dataset& data) {
  data.require_trainable();
  const learn::Matrix m = learn::to_matrix(data, learn::compute_medians(data));
  Columns c;
  c.values.assign(m.cols, std::vector<double>(m.rows));
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) c.values[j][i] = m.at(i, j);
  c.malicious = m.malicious;
  return c;
}

FeatureRanking assemble(const learn::Dataset& data, const std::vector<double>& gains) {
  const auto& names = features::feature_names(data.schema);
  FeatureRanking r;
  for (std::size_t j = 0; j < gains.size(); ++j) r.entries.push_back({names[j], gains[j]});
  std::sort(r.entries.begin(), r.entries.end(), [](const FeatureGain& a, const FeatureGain& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.feature < b.feature;
  });
  return r;
}

}  // namespace

FeatureRanking rank_features(const learn::Dataset& data) {
  const Columns c = prepare(data);
  std::vector<double> gains(c.values.size());
  const auto f = static_cast<std::int64_t>(gains.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < f; ++j) {
    const auto u = static_cast<std::size_t>(j);
    gains[u] = information_gain(c.values[u], c.malicious);
  }
  return assemble(data, gains);
}

namespace serial {
FeatureRanking rank_features(const learn::Dataset& data) {
  const Columns c = prepare(data);
  std::vector<double> gains;
  for (const auto& col : c.values) gains.push_back(information_gain(col, c.malicious));
  return assemble(data, gains);
}
}  // namespace serial

}  // namespace linkwatch::eval
