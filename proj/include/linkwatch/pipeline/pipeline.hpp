#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/fixtures.hpp"
#include "linkwatch/eval/report.hpp"
#include "linkwatch/features/features.hpp"
#include "linkwatch/labeling/labeling.hpp"
#include "linkwatch/learn/dataset.hpp"
#include "linkwatch/learn/model.hpp"

namespace linkwatch::pipeline {

// The three evaluation runs: all seven features on every link, the
// zero-click subset with non-click features, and every link with
// non-click features.
enum class Experiment { kFullAllFeatures, kNonClickSubset, kFullNonClickFeatures };

const char* to_string(Experiment e);
Experiment experiment_from_string(std::string_view text);
features::Schema experiment_schema(Experiment e);

enum class ClassifierChoice { kNaiveBayes, kDecisionTree, kRandomForest, kAll };
ClassifierChoice classifier_choice_from_string(std::string_view text);
std::vector<learn::ModelKind> expand(ClassifierChoice choice);
// Table heading for a classifier kind.
const char* column_name(learn::ModelKind kind);
// Short file tag: nb, dt, rf.
const char* short_name(learn::ModelKind kind);

struct ExperimentConfig {
  std::filesystem::path corpus_dir;
  std::filesystem::path fixtures_dir;
  std::filesystem::path out_dir = "out";
  Experiment experiment = Experiment::kFullAllFeatures;
  // Defaults to the experiment's schema; a conflicting value is rejected.
  std::optional<features::Schema> schema;
  ClassifierChoice classifier = ClassifierChoice::kAll;
  learn::TreeParams tree;
  learn::ForestParams forest;
  std::uint64_t seed = 0;
  double train_fraction = 0.75;
  bool stratified = true;
  int cv_k = 10;
  bool live = false;

  features::Schema resolved_schema() const;
};

// An Error raised inside a named pipeline stage.
class StageError : public Error {
 public:
  StageError(std::string stage, const Error& cause);
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// 0 success, 2 input missing, 3 schema mismatch or unreadable schema,
// 4 invariant violation, 5 provider failure, 1 anything else.
int exit_code_for(ErrorKind kind);
nlohmann::ordered_json error_json(const Error& error, const std::string& stage);

struct LabelRun {
  std::vector<labeling::LinkLabel> labels;  // corpus order
  std::vector<std::string> audit;
};

// Labels the corpus against fixture blacklists. Link states come from the
// fixture probes, or from live HTTP when `live` is set; a live run in which
// every probe fails raises kProviderFailure.
LabelRun label_links(const Corpus& corpus, const FixtureSet& fixtures, bool live);

nlohmann::ordered_json to_json(const labeling::LinkLabel& label);

// Instances for an experiment, in corpus order. The zero-click subset keeps
// every zero-click malicious link plus an equal-sized random draw of
// zero-click benign links (all of them if there are fewer).
learn::Dataset build_dataset(const Corpus& corpus, const std::vector<labeling::LinkLabel>& labels,
                             Experiment experiment, std::uint64_t seed);

struct PipelineOutputs {
  eval::ExperimentReport report;
  std::vector<learn::TrainedModel> models;  // in column order
  learn::Dataset dataset;
  std::vector<std::filesystem::path> files;
};

// label -> extract -> split -> cross-validate -> train -> test -> metrics
// -> ranking, writing report.json, report.txt, model.json (the last
// classifier), model_<nb|dt|rf>.json and features.csv into out_dir.
// Throws StageError.
PipelineOutputs execute_pipeline(const ExperimentConfig& config);

// execute_pipeline with errors turned into an exit code plus an error JSON
// on `err` and in out_dir/error.json.
int run_pipeline(const ExperimentConfig& config, std::ostream& err);

}  // namespace linkwatch::pipeline
