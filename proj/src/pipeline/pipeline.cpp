#include "linkwatch/pipeline/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <ostream>

#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/random.hpp"
#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/eval/ranking.hpp"
#include "linkwatch/learn/train.hpp"
#include "linkwatch/learn/validation.hpp"

namespace linkwatch::pipeline {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* to_string(Experiment e) {
  switch (e) {
    case Experiment::kFullAllFeatures: return "FULL_ALL_FEATURES";
    case Experiment::kNonClickSubset: return "NONCLICK_SUBSET";
    case Experiment::kFullNonClickFeatures: return "FULL_NONCLICK_FEATURES";
  }
  return "?";
}

Experiment experiment_from_string(std::string_view text) {
  if (text == "FULL_ALL_FEATURES") return Experiment::kFullAllFeatures;
  if (text == "NONCLICK_SUBSET") return Experiment::kNonClickSubset;
  if (text == "FULL_NONCLICK_FEATURES") return Experiment::kFullNonClickFeatures;
  fail(ErrorKind::kInvalidArgument, "unknown experiment '" + std::string(text) + "'");
}

features::Schema experiment_schema(Experiment e) {
  return e == Experiment::kFullAllFeatures ? features::Schema::kFull : features::Schema::kNonClick;
}

ClassifierChoice classifier_choice_from_string(std::string_view text) {
  if (text == "ALL") return ClassifierChoice::kAll;
  switch (learn::model_kind_from_string(text)) {
    case learn::ModelKind::kNaiveBayes: return ClassifierChoice::kNaiveBayes;
    case learn::ModelKind::kDecisionTree: return ClassifierChoice::kDecisionTree;
    case learn::ModelKind::kRandomForest: return ClassifierChoice::kRandomForest;
  }
  return ClassifierChoice::kAll;
}

std::vector<learn::ModelKind> expand(ClassifierChoice choice) {
  using learn::ModelKind;
  switch (choice) {
    case ClassifierChoice::kNaiveBayes: return {ModelKind::kNaiveBayes};
    case ClassifierChoice::kDecisionTree: return {ModelKind::kDecisionTree};
    case ClassifierChoice::kRandomForest: return {ModelKind::kRandomForest};
    case ClassifierChoice::kAll:
      return {ModelKind::kNaiveBayes, ModelKind::kDecisionTree, ModelKind::kRandomForest};
  }
  return {};
}

const char* column_name(learn::ModelKind kind) {
  switch (kind) {
    case learn::ModelKind::kNaiveBayes: return "Naive Bayes";
    case learn::ModelKind::kDecisionTree: return "Decision Tree";
    case learn::ModelKind::kRandomForest: return "Random Forest";
  }
  return "?";
}

const char* short_name(learn::ModelKind kind) {
  switch (kind) {
    case learn::ModelKind::kNaiveBayes: return "nb";
    case learn::ModelKind::kDecisionTree: return "dt";
    case learn::ModelKind::kRandomForest: return "rf";
  }
  return "?";
}

features::Schema ExperimentConfig::resolved_schema() const {
  const features::Schema s = experiment_schema(experiment);
  if (schema && *schema != s)
    fail(ErrorKind::kInvalidArgument, std::string("experiment ") + to_string(experiment) +
                                          " uses schema " + features::to_string(s) + ", not " +
                                          features::to_string(*schema));
  return s;
}

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), stage + ": " + cause.what()), stage_(std::move(stage)) {}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInputMissing: return 2;
    case ErrorKind::kSchemaMismatch:
    case ErrorKind::kSchemaViolation: return 3;
    case ErrorKind::kInvariantViolation: return 4;
    case ErrorKind::kProviderFailure: return 5;
    default: return 1;
  }
}

ordered_json error_json(const Error& error, const std::string& stage) {
  return ordered_json{{"error",
                       {{"kind", linkwatch::to_string(error.kind())},
                        {"stage", stage},
                        {"message", error.what()},
                        {"exit_code", exit_code_for(error.kind())}}}};
}

namespace {

// Records transport failures of the wrapped probe.
class CountingProbe final : public labeling::LinkProbe {
 public:
  explicit CountingProbe(const labeling::LinkProbe& inner) : inner_(inner) {}

  ProbeResponse fetch(std::string_view url) const override {
    ProbeResponse r = inner_.fetch(url);
    ++calls_;
    if (r.transport_error) ++failures_;
    return r;
  }
  std::size_t calls() const { return calls_; }
  std::size_t failures() const { return failures_; }

 private:
  const labeling::LinkProbe& inner_;
  mutable std::atomic<std::size_t> calls_{0};
  mutable std::atomic<std::size_t> failures_{0};
};

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e);
  }
}

}  // namespace

LabelRun label_links(const Corpus& corpus, const FixtureSet& fixtures, bool live) {
  const labeling::ProviderList providers = labeling::providers_from_fixtures(fixtures);
  const labeling::FixtureProbe fixture_probe(fixtures.probes);
  const labeling::HttpProbe http_probe;
  CountingProbe probe(live ? static_cast<const labeling::LinkProbe&>(http_probe)
                           : static_cast<const labeling::LinkProbe&>(fixture_probe));
  labeling::AuditLog audit;

  labeling::LabelingContext ctx;
  ctx.providers = &providers;
  ctx.probe = &probe;
  ctx.query.whitelist = &fixtures.whitelist;
  ctx.query.audit = &audit;
  // Observation time is the newest link creation, so reruns stay identical.
  for (const ShortLinkRecord& l : corpus.links)
    ctx.query.checked_at = std::max(ctx.query.checked_at, l.created_at);

  LabelRun run;
  run.labels = labeling::label_corpus(corpus, ctx);
  run.audit = audit.entries();
  if (live && probe.calls() > 0 && probe.failures() == probe.calls())
    fail(ErrorKind::kProviderFailure, "every live probe failed");
  return run;
}

ordered_json to_json(const labeling::LinkLabel& l) {
  ordered_json verdicts = ordered_json::array();
  for (const labeling::BlacklistVerdict& v : l.verdicts) {
    ordered_json vj{{"provider", v.provider},
                    {"level", v.level == labeling::ProviderLevel::kUrl ? "url" : "domain"},
                    {"hit", v.hit}};
    vj["category"] = v.category ? ordered_json(*v.category) : ordered_json(nullptr);
    vj["checked_at"] = format_timestamp(v.checked_at);
    if (v.failed) vj["failed"] = true;
    if (v.suppressed) vj["suppressed"] = true;
    verdicts.push_back(std::move(vj));
  }
  return ordered_json{{"short_hash", l.short_hash},
                      {"label", labeling::to_string(l.label.value)},
                      {"sources", l.label.sources},
                      {"state", linkwatch::to_string(l.state.state)},
                      {"verdicts", std::move(verdicts)}};
}

learn::Dataset build_dataset(const Corpus& corpus, const std::vector<labeling::LinkLabel>& labels,
                             Experiment experiment, std::uint64_t seed) {
  if (labels.size() != corpus.links.size())
    fail(ErrorKind::kInvariantViolation, "label count differs from link count");
  const features::Schema schema = experiment_schema(experiment);

  std::vector<std::size_t> chosen;
  if (experiment == Experiment::kNonClickSubset) {
    std::vector<std::size_t> malicious, benign;
    for (std::size_t i = 0; i < corpus.links.size(); ++i) {
      if (corpus.links[i].total_clicks() != 0) continue;
      (labels[i].label.malicious() ? malicious : benign).push_back(i);
    }
    Rng rng = Rng(seed).child("nonclick_subset");
    rng.shuffle(benign);
    if (benign.size() > malicious.size()) benign.resize(malicious.size());
    chosen = malicious;
    chosen.insert(chosen.end(), benign.begin(), benign.end());
    std::sort(chosen.begin(), chosen.end());
  } else {
    chosen.resize(corpus.links.size());
    for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = i;
  }

  std::vector<ShortLinkRecord> links;
  links.reserve(chosen.size());
  for (std::size_t i : chosen) links.push_back(corpus.links[i]);
  const std::vector<features::FeatureVector> fvs = features::extract_all(links, schema);

  learn::Dataset data;
  data.schema = schema;
  for (std::size_t k = 0; k < chosen.size(); ++k)
    data.instances.push_back({links[k].short_hash, fvs[k], labels[chosen[k]].label});
  return data;
}

PipelineOutputs execute_pipeline(const ExperimentConfig& config) {
  const features::Schema schema = stage("config", [&] {
    if (config.cv_k < 2) fail(ErrorKind::kInvalidArgument, "cv_k must be >= 2");
    config.tree.validate();
    config.forest.validate();
    return config.resolved_schema();
  });

  const Corpus corpus = stage("load", [&] { return load_corpus_dir(config.corpus_dir).corpus; });
  const FixtureSet fixtures = stage("load", [&] { return load_fixtures(config.fixtures_dir); });
  const LabelRun labels = stage("label", [&] { return label_links(corpus, fixtures, config.live); });
  PipelineOutputs out;
  out.dataset = stage("extract", [&] {
    return build_dataset(corpus, labels.labels, config.experiment, config.seed);
  });

  const auto [train, test] = stage("split", [&] {
    return learn::split_dataset(out.dataset,
                                learn::SplitSpec{config.train_fraction, config.seed, config.stratified});
  });

  eval::ExperimentReport& report = out.report;
  report.experiment = to_string(config.experiment);
  report.schema = features::to_string(schema);
  report.seed = config.seed;
  report.n_instances = out.dataset.size();
  report.n_malicious = out.dataset.count(labeling::LabelValue::kMalicious);
  report.n_benign = out.dataset.count(labeling::LabelValue::kBenign);
  report.n_train = train.size();
  report.n_test = test.size();

  const Rng root(config.seed);
  for (learn::ModelKind kind : expand(config.classifier)) {
    learn::TrainerConfig trainer;
    trainer.kind = kind;
    trainer.tree = config.tree;
    trainer.forest = config.forest;
    const auto stream = static_cast<std::uint64_t>(kind);

    const learn::CVResult cv = stage("crossval", [&] {
      return learn::cross_validate(train, config.cv_k, trainer, root.child("cv", stream).seed());
    });
    learn::TrainedModel model =
        stage("train", [&] { return learn::train(train, trainer, root.child("train", stream).seed()); });

    eval::ClassifierResult result = stage("test", [&] {
      std::vector<labeling::LabelValue> predicted;
      for (const learn::Prediction& p : learn::predict_all(model, test)) predicted.push_back(p.label);
      eval::ClassifierResult r;
      r.classifier = column_name(kind);
      r.test_confusion = eval::confusion_matrix(predicted, test.labels());
      r.test_metrics = eval::compute_metrics(r.test_confusion);
      eval::CVSummary s{cv.k, cv.mean_accuracy, cv.mean_weighted_f_measure, {}};
      for (const learn::FoldResult& f : cv.folds) s.fold_accuracies.push_back(f.accuracy);
      r.cv = std::move(s);
      return r;
    });
    report.classifiers.push_back(std::move(result));
    out.models.push_back(std::move(model));
  }

  report.ranking = stage("ranking", [&] { return eval::rank_features(out.dataset); });

  stage("write", [&] {
    fs::create_directories(config.out_dir);
    auto emit = [&](const fs::path& name, const std::string& text) {
      write_text_file(config.out_dir / name, text);
      out.files.push_back(config.out_dir / name);
    };
    emit("features.csv", features::to_csv(out.dataset.instances, schema));
    const std::vector<learn::ModelKind> kinds = expand(config.classifier);
    for (std::size_t i = 0; i < kinds.size(); ++i)
      emit(std::string("model_") + short_name(kinds[i]) + ".json", learn::serialize_model(out.models[i]));
    emit("model.json", learn::serialize_model(out.models.back()));
    emit("report.json", eval::to_json(report).dump(2) + "\n");
    emit("report.txt", eval::render_table(report));
    return 0;
  });
  return out;
}

int run_pipeline(const ExperimentConfig& config, std::ostream& err) {
  try {
    execute_pipeline(config);
    return 0;
  } catch (const Error& e) {
    const auto* se = dynamic_cast<const StageError*>(&e);
    const std::string stage_name = se ? se->stage() : "pipeline";
    const ordered_json j = error_json(e, stage_name);
    err << j.dump() << "\n";
    try {
      fs::create_directories(config.out_dir);
      write_text_file(config.out_dir / "error.json", j.dump(2) + "\n");
    } catch (...) {
      // The error already went to `err`.
    }
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    Error wrapped(ErrorKind::kIo, e.what());
    err << error_json(wrapped, "pipeline").dump() << "\n";
    return 1;
  }
}

}  // namespace linkwatch::pipeline
