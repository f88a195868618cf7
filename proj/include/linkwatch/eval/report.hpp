#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkwatch/eval/metrics.hpp"
#include "linkwatch/eval/ranking.hpp"

namespace linkwatch::eval {

inline constexpr int kReportSchemaVersion = 1;

struct CVSummary {
  int k = 0;
  double mean_accuracy = 0.0;
  double mean_weighted_f_measure = 0.0;
  std::vector<double> fold_accuracies;
};

struct ClassifierResult {
  std::string classifier;  // column heading, e.g. "Random Forest"
  ConfusionMatrix test_confusion;
  MetricsReport test_metrics;
  std::optional<CVSummary> cv;
};

struct ExperimentReport {
  std::string experiment;
  std::string schema;
  std::uint64_t seed = 0;
  std::size_t n_instances = 0;
  std::size_t n_malicious = 0;
  std::size_t n_benign = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::vector<ClassifierResult> classifiers;
  FeatureRanking ranking;
};

// Row labels of the metric table, top to bottom.
const std::vector<std::string>& metric_row_labels();

// Values in the order of metric_row_labels().
std::vector<double> metric_rows(const MetricsReport& m);

nlohmann::ordered_json to_json(const ExperimentReport& report);
// Metrics are recomputed from the stored confusion matrices.
ExperimentReport report_from_json(const nlohmann::json& j);

std::string render_table(const ExperimentReport& report);

}  // namespace linkwatch::eval
