#include "linkwatch/eval/metrics.hpp"

#include "linkwatch/core/error.hpp"

namespace linkwatch::eval {

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& o) {
  tp += o.tp;
  fp += o.fp;
  tn += o.tn;
  fn += o.fn;
  return *this;
}

ConfusionMatrix confusion_matrix(std::span<const LabelValue> predictions,
                                 std::span<const LabelValue> truth) {
  if (predictions.size() != truth.size())
    fail(ErrorKind::kInvalidArgument, "confusion_matrix: length mismatch");
  if (predictions.empty()) fail(ErrorKind::kInvalidArgument, "confusion_matrix: no instances");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool actual = truth[i] == LabelValue::kMalicious;
    const bool predicted = predictions[i] == LabelValue::kMalicious;
    if (actual && predicted) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (predicted) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

namespace {

double ratio(std::int64_t num, std::int64_t den, bool& undefined) {
  undefined = den == 0;
  return undefined ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  ClassMetrics m;
  m.precision = ratio(tp, tp + fp, m.precision_undefined);
  m.recall = ratio(tp, tp + fn, m.recall_undefined);
  const double sum = m.precision + m.recall;
  m.f_measure_undefined = sum == 0.0;
  m.f_measure = m.f_measure_undefined ? 0.0 : 2.0 * m.precision * m.recall / sum;
  m.support = tp + fn;
  return m;
}

}  // namespace

MetricsReport compute_metrics(const ConfusionMatrix& cm) {
  if (cm.tp < 0 || cm.fp < 0 || cm.tn < 0 || cm.fn < 0)
    fail(ErrorKind::kInvalidArgument, "compute_metrics: negative count");
  if (cm.total() < 1) fail(ErrorKind::kInvalidArgument, "compute_metrics: empty matrix");
  MetricsReport r;
  r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
  r.malicious = class_metrics(cm.tp, cm.fp, cm.fn);
  r.benign = class_metrics(cm.tn, cm.fn, cm.fp);
  r.weighted_f_measure =
      (r.malicious.f_measure * static_cast<double>(r.malicious.support) +
       r.benign.f_measure * static_cast<double>(r.benign.support)) /
      static_cast<double>(cm.total());
  return r;
}

}  // namespace linkwatch::eval
