// linkwatch: batch driver for corpus generation, labeling, feature
// extraction, training, evaluation and encoder profiling.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/fixtures.hpp"
#include "linkwatch/core/parallel.hpp"
#include "linkwatch/core/random.hpp"
#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/eval/metrics.hpp"
#include "linkwatch/eval/ranking.hpp"
#include "linkwatch/eval/report.hpp"
#include "linkwatch/features/features.hpp"
#include "linkwatch/labeling/labeling.hpp"
#include "linkwatch/labeling/probe.hpp"
#include "linkwatch/learn/dataset.hpp"
#include "linkwatch/learn/model.hpp"
#include "linkwatch/learn/train.hpp"
#include "linkwatch/learn/validation.hpp"
#include "linkwatch/pipeline/pipeline.hpp"
#include "linkwatch/profile/profile.hpp"

namespace fs = std::filesystem;
using namespace linkwatch;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  std::string schema;
  std::string experiment = "FULL_ALL_FEATURES";
  std::string classifier = "ALL";
  fs::path out = "out";
  int jobs = 0;
  bool live = false;
  int max_depth = 0;
  int min_leaf = 2;
  int n_trees = 100;
  int features_per_split = 0;
  bool gain_ratio = false;
};

struct Paths {
  fs::path corpus = "out/corpus";
  fs::path fixtures = "out/fixtures";
  fs::path features = "out/features.csv";
  fs::path model = "out/model.json";
  fs::path report = "out/report.json";
};

pipeline::Experiment experiment(const Globals& g) { return pipeline::experiment_from_string(g.experiment); }

features::Schema schema(const Globals& g) {
  pipeline::ExperimentConfig c;
  c.experiment = experiment(g);
  if (!g.schema.empty()) c.schema = features::schema_from_string(g.schema);
  return c.resolved_schema();
}

learn::TreeParams tree_params(const Globals& g) {
  learn::TreeParams t;
  if (g.max_depth != 0) t.max_depth = g.max_depth;
  t.min_leaf = g.min_leaf;
  t.use_gain_ratio = g.gain_ratio;
  return t;
}

learn::ForestParams forest_params(const Globals& g) {
  learn::ForestParams f;
  f.n_trees = g.n_trees;
  if (g.features_per_split != 0) f.features_per_split = g.features_per_split;
  f.tree = tree_params(g);
  return f;
}

void write_out(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_text_file(path, text);
  std::cerr << "wrote " << path.string() << "\n";
}

learn::Dataset read_dataset(const fs::path& path) {
  learn::Dataset d;
  d.instances = features::read_csv(path, &d.schema);
  return d;
}

// --- subcommands -----------------------------------------------------------

void cmd_generate(const Globals& g, const Paths& p, const std::optional<fs::path>& config_path,
                  std::int64_t benign, std::int64_t malicious) {
  GeneratorConfig cfg;
  if (config_path) cfg = GeneratorConfig::from_json(nlohmann::json::parse(read_text_file(*config_path)));
  if (benign >= 0) cfg.n_benign = benign;
  if (malicious >= 0) cfg.n_malicious = malicious;
  cfg.validate();
  const SyntheticCorpus s = generate_synthetic(cfg, g.seed);
  write_synthetic(s, cfg, g.seed, p.corpus, p.fixtures);
  std::cout << "generated " << s.corpus.links.size() << " links, " << s.corpus.encoders.size()
            << " encoder profiles into " << p.corpus.string() << "\n";
}

void cmd_label(const Globals& g, const Paths& p) {
  const Corpus corpus = load_corpus(p.corpus);
  const FixtureSet fixtures = load_fixtures(p.fixtures);
  const pipeline::LabelRun run = pipeline::label_links(corpus, fixtures, g.live);
  std::string lines;
  std::size_t malicious = 0;
  for (const labeling::LinkLabel& l : run.labels) {
    lines += pipeline::to_json(l).dump() + "\n";
    if (l.label.malicious()) ++malicious;
  }
  write_out(g.out / "labels.jsonl", lines);
  std::string audit;
  for (const std::string& a : run.audit) audit += a + "\n";
  write_out(g.out / "audit.log", audit);
  std::cout << run.labels.size() << " links labeled, " << malicious << " malicious\n";
}

void cmd_features(const Globals& g, const Paths& p, double train_fraction) {
  const features::Schema s = schema(g);
  const Corpus corpus = load_corpus(p.corpus);
  const FixtureSet fixtures = load_fixtures(p.fixtures);
  const pipeline::LabelRun run = pipeline::label_links(corpus, fixtures, g.live);
  const learn::Dataset data = pipeline::build_dataset(corpus, run.labels, experiment(g), g.seed);
  write_out(g.out / "features.csv", features::to_csv(data.instances, s));
  if (train_fraction > 0.0 && train_fraction < 1.0) {
    const auto [train, test] = learn::split_dataset(data, learn::SplitSpec{train_fraction, g.seed, true});
    write_out(g.out / "train.csv", features::to_csv(train.instances, s));
    write_out(g.out / "test.csv", features::to_csv(test.instances, s));
  }
  std::cout << data.size() << " instances (" << features::to_string(s) << ")\n";
}

void cmd_train(const Globals& g, const Paths& p) {
  const learn::Dataset data = read_dataset(p.features);
  const Rng root(g.seed);
  const auto kinds = pipeline::expand(pipeline::classifier_choice_from_string(g.classifier));
  for (learn::ModelKind kind : kinds) {
    learn::TrainerConfig t{kind, tree_params(g), forest_params(g)};
    const learn::TrainedModel m =
        learn::train(data, t, root.child("train", static_cast<std::uint64_t>(kind)).seed());
    const fs::path path = kinds.size() == 1 ? p.model
                                            : g.out / (std::string("model_") + pipeline::short_name(kind) + ".json");
    write_out(path, learn::serialize_model(m));
  }
}

void cmd_crossval(const Globals& g, const Paths& p, int k) {
  const learn::Dataset data = read_dataset(p.features);
  const Rng root(g.seed);
  ordered_json out = ordered_json::array();
  for (learn::ModelKind kind : pipeline::expand(pipeline::classifier_choice_from_string(g.classifier))) {
    learn::TrainerConfig t{kind, tree_params(g), forest_params(g)};
    const learn::CVResult cv =
        learn::cross_validate(data, k, t, root.child("cv", static_cast<std::uint64_t>(kind)).seed());
    ordered_json folds = ordered_json::array();
    for (const learn::FoldResult& f : cv.folds)
      folds.push_back({{"fold", f.fold},
                       {"train_size", f.train_size},
                       {"test_size", f.test_size},
                       {"accuracy", f.accuracy},
                       {"weighted_f_measure", f.weighted_f_measure}});
    out.push_back({{"classifier", pipeline::column_name(kind)},
                   {"k", cv.k},
                   {"mean_accuracy", cv.mean_accuracy},
                   {"mean_weighted_f_measure", cv.mean_weighted_f_measure},
                   {"folds", std::move(folds)}});
    std::printf("%-14s %d-fold accuracy %.2f%%\n", pipeline::column_name(kind), cv.k, 100.0 * cv.mean_accuracy);
  }
  write_out(g.out / "crossval.json", out.dump(2) + "\n");
}

void cmd_eval(const Globals& g, const Paths& p) {
  const learn::TrainedModel model = learn::load_model(p.model);
  const learn::Dataset data = read_dataset(p.features);
  std::vector<labeling::LabelValue> predicted;
  for (const learn::Prediction& pr : learn::predict_all(model, data)) predicted.push_back(pr.label);

  eval::ExperimentReport r;
  r.experiment = g.experiment;
  r.schema = features::to_string(data.schema);
  r.seed = g.seed;
  r.n_instances = r.n_test = data.size();
  r.n_malicious = data.count(labeling::LabelValue::kMalicious);
  r.n_benign = data.count(labeling::LabelValue::kBenign);
  eval::ClassifierResult c;
  c.classifier = pipeline::column_name(model.kind());
  c.test_confusion = eval::confusion_matrix(predicted, data.labels());
  c.test_metrics = eval::compute_metrics(c.test_confusion);
  r.classifiers.push_back(c);
  write_out(g.out / "eval.json", eval::to_json(r).dump(2) + "\n");
  std::cout << eval::render_table(r);
}

void cmd_rank(const Globals& g, const Paths& p) {
  const learn::Dataset data = read_dataset(p.features);
  const eval::FeatureRanking ranking = eval::rank_features(data);
  ordered_json j = ordered_json::array();
  int rank = 1;
  for (const eval::FeatureGain& f : ranking.entries) {
    j.push_back({{"feature", f.feature}, {"information_gain", f.gain}});
    std::printf("%2d. %-20s %.6f\n", rank++, f.feature.c_str(), f.gain);
  }
  write_out(g.out / "ranking.json", j.dump(2) + "\n");
}

void cmd_profile(const Globals& g, const Paths& p) {
  const Corpus corpus = load_corpus(p.corpus);
  std::string lines;
  for (const profile::SuspicionReport& r : profile::suspicion_reports(corpus))
    lines += profile::to_json(r).dump() + "\n";
  write_out(g.out / "suspicion.jsonl", lines);

  std::vector<EncoderProfile> with_posts;
  for (const auto& [id, prof] : corpus.encoders) {
    if (!prof.history.empty())
      write_text_file(g.out / ("timeline_" + id + ".csv"),
                      profile::timeline_csv(profile::activity_timeline(prof)));
    if (prof.posts && !prof.posts->empty()) with_posts.push_back(prof);
  }
  if (with_posts.size() >= 2) {
    ordered_json j = profile::to_json(profile::cross_account_overlap(with_posts));
    ordered_json accounts = ordered_json::array();
    for (const EncoderProfile& prof : with_posts) {
      std::vector<Timestamp> at;
      std::vector<TokenSet> texts;
      for (const Post& post : *prof.posts) {
        at.push_back(post.at);
        texts.push_back(post.text_tokens);
      }
      ordered_json a{{"account_id", prof.account_id},
                     {"automation_score", profile::posting_pattern(at).automation_score}};
      if (texts.size() >= 3) {
        const profile::SimilarityVariance v = profile::similarity_variance(texts);
        a["similarity_variance"] = v.variance;
        a["similarity_flagged"] = v.flagged;
      }
      accounts.push_back(std::move(a));
    }
    j["posting"] = std::move(accounts);
    write_out(g.out / "overlap.json", j.dump(2) + "\n");
  }
}

void cmd_probe(const Globals& g, const Paths& p) {
  const Corpus corpus = load_corpus(p.corpus);
  const FixtureSet fixtures = load_fixtures(p.fixtures);
  const labeling::FixtureProbe fixture_probe(fixtures.probes);
  const labeling::HttpProbe http_probe;
  const labeling::LinkProbe& probe = g.live ? static_cast<const labeling::LinkProbe&>(http_probe)
                                            : static_cast<const labeling::LinkProbe&>(fixture_probe);
  const labeling::LivenessReport r = labeling::domain_liveness_report(corpus, probe, &fixtures.whitelist);
  ordered_json domains = ordered_json::array();
  for (const labeling::DomainLiveness& d : r.domains)
    domains.push_back({{"domain", d.domain}, {"alive", d.alive}, {"total_warning_count", d.total_warning_count}});
  const ordered_json j{{"domains_probed", r.domains.size()},
                       {"whitelisted_skipped", r.whitelisted_skipped},
                       {"dead_fraction", r.dead_fraction},
                       {"dead_warning_sum", r.dead_warning_sum},
                       {"domains", std::move(domains)}};
  write_out(g.out / "probe.json", j.dump(2) + "\n");
  std::printf("%zu domains probed, dead fraction %.4f\n", r.domains.size(), r.dead_fraction);
}

void cmd_report(const Globals& g, const Paths& p) {
  const eval::ExperimentReport r = eval::report_from_json(nlohmann::json::parse(read_text_file(p.report)));
  const std::string table = eval::render_table(r);
  write_out(g.out / "report.txt", table);
  std::cout << table;
}

int cmd_run(const Globals& g, const Paths& p, double train_fraction, int k) {
  pipeline::ExperimentConfig c;
  c.corpus_dir = p.corpus;
  c.fixtures_dir = p.fixtures;
  c.out_dir = g.out;
  c.experiment = experiment(g);
  if (!g.schema.empty()) c.schema = features::schema_from_string(g.schema);
  c.classifier = pipeline::classifier_choice_from_string(g.classifier);
  c.tree = tree_params(g);
  c.forest = forest_params(g);
  c.seed = g.seed;
  c.train_fraction = train_fraction;
  c.cv_k = k;
  c.live = g.live;
  const int code = pipeline::run_pipeline(c, std::cerr);
  if (code == 0) std::cout << read_text_file(g.out / "report.txt");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"linkwatch: malicious short-link detection toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  Paths p;
  app.add_option("--seed", g.seed, "Root seed for every random stream");
  app.add_option("--schema", g.schema, "Feature schema: FULL or NON_CLICK")
      ->check(CLI::IsMember({"FULL", "NON_CLICK"}));
  app.add_option("--experiment", g.experiment, "FULL_ALL_FEATURES, NONCLICK_SUBSET or FULL_NONCLICK_FEATURES")
      ->check(CLI::IsMember({"FULL_ALL_FEATURES", "NONCLICK_SUBSET", "FULL_NONCLICK_FEATURES"}));
  app.add_option("--classifier", g.classifier, "NB, DT, RF or ALL")
      ->check(CLI::IsMember({"NB", "DT", "RF", "ALL"}));
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  app.add_flag("--live", g.live, "Allow network access for probes");
  app.add_option("--max-depth", g.max_depth, "Tree depth limit (0 = unlimited)");
  app.add_option("--min-leaf", g.min_leaf, "Minimum instances per leaf");
  app.add_option("--trees", g.n_trees, "Random forest size");
  app.add_option("--mtry", g.features_per_split, "Features per split (0 = floor(log2 F) + 1)");
  app.add_flag("--gain-ratio", g.gain_ratio, "Split on gain ratio instead of information gain");

  auto corpus_opt = [&](CLI::App* sub) { sub->add_option("--corpus", p.corpus, "Corpus directory"); };
  auto fixtures_opt = [&](CLI::App* sub) { sub->add_option("--fixtures", p.fixtures, "Fixture directory"); };
  auto features_opt = [&](CLI::App* sub) { sub->add_option("--features", p.features, "Feature CSV"); };

  std::optional<fs::path> gen_config;
  std::int64_t n_benign = -1, n_malicious = -1;
  double train_fraction = 0.75;
  int k = 10;

  CLI::App* generate = app.add_subcommand("generate", "Write a synthetic corpus and fixtures");
  corpus_opt(generate);
  fixtures_opt(generate);
  generate->add_option("--config", gen_config, "Generator config JSON");
  generate->add_option("--benign", n_benign, "Benign link count");
  generate->add_option("--malicious", n_malicious, "Malicious link count");

  CLI::App* label = app.add_subcommand("label", "Label links against fixture blacklists");
  corpus_opt(label);
  fixtures_opt(label);

  CLI::App* feats = app.add_subcommand("features", "Extract labeled feature vectors");
  corpus_opt(feats);
  fixtures_opt(feats);
  feats->add_option("--train-fraction", train_fraction, "Also write train.csv/test.csv (0 or 1 to skip)")
      ->check(CLI::Range(0.0, 1.0));

  CLI::App* train = app.add_subcommand("train", "Train classifiers on a feature CSV");
  features_opt(train);
  train->add_option("--model", p.model, "Model path when one classifier is trained");

  CLI::App* crossval = app.add_subcommand("crossval", "Stratified k-fold cross-validation");
  features_opt(crossval);
  crossval->add_option("-k,--folds", k, "Fold count");

  CLI::App* evaluate = app.add_subcommand("eval", "Score a saved model on a feature CSV");
  features_opt(evaluate);
  evaluate->add_option("--model", p.model, "Model JSON");

  CLI::App* rank = app.add_subcommand("rank", "Rank features by information gain");
  features_opt(rank);

  CLI::App* prof = app.add_subcommand("profile", "Encoder suspicion, timelines and overlap");
  corpus_opt(prof);

  CLI::App* probe = app.add_subcommand("probe", "Domain liveness from fixtures");
  corpus_opt(probe);
  fixtures_opt(probe);

  CLI::App* report = app.add_subcommand("report", "Render a report.json as a table");
  report->add_option("--report", p.report, "Report JSON");

  CLI::App* run = app.add_subcommand("run", "Full pipeline for one experiment");
  corpus_opt(run);
  fixtures_opt(run);
  run->add_option("--train-fraction", train_fraction, "Training share")->check(CLI::Range(0.0, 1.0));
  run->add_option("-k,--folds", k, "Cross-validation folds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  const std::string stage = app.get_subcommands().front()->get_name();
  try {
    if (g.jobs > 0) set_jobs(g.jobs);
    if (*generate) cmd_generate(g, p, gen_config, n_benign, n_malicious);
    else if (*label) cmd_label(g, p);
    else if (*feats) cmd_features(g, p, train_fraction);
    else if (*train) cmd_train(g, p);
    else if (*crossval) cmd_crossval(g, p, k);
    else if (*evaluate) cmd_eval(g, p);
    else if (*rank) cmd_rank(g, p);
    else if (*prof) cmd_profile(g, p);
    else if (*probe) cmd_probe(g, p);
    else if (*report) cmd_report(g, p);
    else if (*run) return cmd_run(g, p, train_fraction, k);
    return 0;
  } catch (const Error& e) {
    std::cerr << pipeline::error_json(e, stage).dump() << "\n";
    return pipeline::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << pipeline::error_json(Error(ErrorKind::kIo, e.what()), stage).dump() << "\n";
    return 1;
  }
}
