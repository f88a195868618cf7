#pragma once

#include <cstdint>
#include <span>

#include "linkwatch/labeling/labeling.hpp"

namespace linkwatch::eval {

using labeling::LabelValue;

// MALICIOUS is the positive class.
struct ConfusionMatrix {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t tn = 0;
  std::int64_t fn = 0;

  std::int64_t total() const { return tp + fp + tn + fn; }
  ConfusionMatrix& operator+=(const ConfusionMatrix& o);
  bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion_matrix(std::span<const LabelValue> predictions,
                                 std::span<const LabelValue> truth);

// A 0/0 ratio is reported as 0 with its flag set.
struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::int64_t support = 0;
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f_measure_undefined = false;
};

struct MetricsReport {
  double accuracy = 0.0;
  ClassMetrics malicious;
  ClassMetrics benign;
  double weighted_f_measure = 0.0;  // weights are class supports
};

MetricsReport compute_metrics(const ConfusionMatrix& cm);

}  // namespace linkwatch::eval
