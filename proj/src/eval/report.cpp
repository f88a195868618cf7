#include "linkwatch/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "linkwatch/core/error.hpp"

namespace linkwatch::eval {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string>& metric_row_labels() {
  static const std::vector<std::string> kLabels = {
      "Accuracy",
      "Recall (malicious)",
      "Recall (Benign)",
      "Precision (malicious)",
      "Precision (Benign)",
      "F-measure (malicious)",
      "F-measure (benign)",
  };
  return kLabels;
}

std::vector<double> metric_rows(const MetricsReport& m) {
  return {m.accuracy,          m.malicious.recall,    m.benign.recall,   m.malicious.precision,
          m.benign.precision, m.malicious.f_measure, m.benign.f_measure};
}

namespace {

ordered_json class_json(const ClassMetrics& c) {
  ordered_json j{{"precision", c.precision},
                 {"recall", c.recall},
                 {"f_measure", c.f_measure},
                 {"support", c.support}};
  ordered_json undefined = ordered_json::array();
  if (c.precision_undefined) undefined.push_back("precision");
  if (c.recall_undefined) undefined.push_back("recall");
  if (c.f_measure_undefined) undefined.push_back("f_measure");
  j["undefined"] = std::move(undefined);
  return j;
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f%%", 100.0 * v);
  return buf;
}

}  // namespace

ordered_json to_json(const ExperimentReport& r) {
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["experiment"] = r.experiment;
  j["schema"] = r.schema;
  j["seed"] = r.seed;
  j["instances"] = {{"total", r.n_instances},
                    {"malicious", r.n_malicious},
                    {"benign", r.n_benign},
                    {"train", r.n_train},
                    {"test", r.n_test}};
  ordered_json cls = ordered_json::array();
  for (const ClassifierResult& c : r.classifiers) {
    const ConfusionMatrix& cm = c.test_confusion;
    ordered_json cj;
    cj["classifier"] = c.classifier;
    cj["confusion"] = {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
    cj["accuracy"] = c.test_metrics.accuracy;
    cj["malicious"] = class_json(c.test_metrics.malicious);
    cj["benign"] = class_json(c.test_metrics.benign);
    cj["weighted_f_measure"] = c.test_metrics.weighted_f_measure;
    if (c.cv) {
      cj["cross_validation"] = {{"k", c.cv->k},
                                {"mean_accuracy", c.cv->mean_accuracy},
                                {"mean_weighted_f_measure", c.cv->mean_weighted_f_measure},
                                {"fold_accuracies", c.cv->fold_accuracies}};
    }
    cls.push_back(std::move(cj));
  }
  j["classifiers"] = std::move(cls);
  ordered_json rank = ordered_json::array();
  for (const FeatureGain& g : r.ranking.entries)
    rank.push_back({{"feature", g.feature}, {"information_gain", g.gain}});
  j["feature_ranking"] = std::move(rank);
  return j;
}

ExperimentReport report_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version") ||
      j.at("schema_version") != kReportSchemaVersion)
    fail(ErrorKind::kSchemaViolation, "unsupported or missing report schema_version");
  try {
    ExperimentReport r;
    r.experiment = j.at("experiment").get<std::string>();
    r.schema = j.at("schema").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    const json& inst = j.at("instances");
    r.n_instances = inst.at("total").get<std::size_t>();
    r.n_malicious = inst.at("malicious").get<std::size_t>();
    r.n_benign = inst.at("benign").get<std::size_t>();
    r.n_train = inst.at("train").get<std::size_t>();
    r.n_test = inst.at("test").get<std::size_t>();
    for (const json& cj : j.at("classifiers")) {
      ClassifierResult c;
      c.classifier = cj.at("classifier").get<std::string>();
      const json& cm = cj.at("confusion");
      c.test_confusion = {cm.at("tp").get<std::int64_t>(), cm.at("fp").get<std::int64_t>(),
                          cm.at("tn").get<std::int64_t>(), cm.at("fn").get<std::int64_t>()};
      c.test_metrics = compute_metrics(c.test_confusion);
      if (cj.contains("cross_validation")) {
        const json& cv = cj.at("cross_validation");
        c.cv = CVSummary{cv.at("k").get<int>(), cv.at("mean_accuracy").get<double>(),
                         cv.at("mean_weighted_f_measure").get<double>(),
                         cv.at("fold_accuracies").get<std::vector<double>>()};
      }
      r.classifiers.push_back(std::move(c));
    }
    for (const json& g : j.at("feature_ranking"))
      r.ranking.entries.push_back(
          {g.at("feature").get<std::string>(), g.at("information_gain").get<double>()});
    return r;
  } catch (const json::exception& e) {
    fail(ErrorKind::kSchemaViolation, std::string("malformed report: ") + e.what());
  }
}

std::string render_table(const ExperimentReport& r) {
  std::ostringstream out;
  out << "Experiment: " << r.experiment << " (schema " << r.schema << ", seed " << r.seed << ")\n";
  out << "Instances: " << r.n_instances << " (" << r.n_malicious << " malicious, " << r.n_benign
      << " benign); train " << r.n_train << ", test " << r.n_test << "\n\n";

  std::vector<std::string> labels = metric_row_labels();
  labels.push_back("Weighted F-measure");
  const bool any_cv = std::any_of(r.classifiers.begin(), r.classifiers.end(),
                                  [](const ClassifierResult& c) { return c.cv.has_value(); });
  if (any_cv) labels.push_back("Cross-validation accuracy");

  std::vector<std::vector<std::string>> cells(labels.size());
  for (const ClassifierResult& c : r.classifiers) {
    std::vector<double> v = metric_rows(c.test_metrics);
    v.push_back(c.test_metrics.weighted_f_measure);
    for (std::size_t i = 0; i < v.size(); ++i) cells[i].push_back(percent(v[i]));
    if (any_cv) cells.back().push_back(c.cv ? percent(c.cv->mean_accuracy) : "-");
  }

  const std::string heading = "Evaluation Metric";
  std::size_t label_w = heading.size();
  for (const std::string& l : labels) label_w = std::max(label_w, l.size());
  std::vector<std::size_t> col_w;
  for (const ClassifierResult& c : r.classifiers) col_w.push_back(std::max<std::size_t>(c.classifier.size(), 7));

  auto pad_right = [](const std::string& s, std::size_t w) { return s + std::string(w - s.size(), ' '); };
  auto pad_left = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };

  out << pad_right(heading, label_w);
  for (std::size_t c = 0; c < r.classifiers.size(); ++c) out << "  " << pad_left(r.classifiers[c].classifier, col_w[c]);
  out << "\n";
  std::size_t rule = label_w;
  for (std::size_t w : col_w) rule += 2 + w;
  out << std::string(rule, '-') << "\n";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << pad_right(labels[i], label_w);
    for (std::size_t c = 0; c < cells[i].size(); ++c) out << "  " << pad_left(cells[i][c], col_w[c]);
    out << "\n";
  }

  if (!r.ranking.entries.empty()) {
    out << "\nFeature ranking (information gain, bits)\n";
    std::size_t name_w = 0;
    for (const FeatureGain& g : r.ranking.entries) name_w = std::max(name_w, g.feature.size());
    int rank = 1;
    for (const FeatureGain& g : r.ranking.entries) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.4f", g.gain);
      out << pad_left(std::to_string(rank++), 3) << ". " << pad_right(g.feature, name_w) << "  " << buf << "\n";
    }
  }
  return out.str();
}

}  // namespace linkwatch::eval
