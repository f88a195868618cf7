#include <numeric>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "learn_fixtures.hpp"
#include "linkwatch/core/error.hpp"
#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/learn/train.hpp"
#include "linkwatch/learn/validation.hpp"
#include "linkwatch/pipeline/pipeline.hpp"

using namespace linkwatch;
using namespace linkwatch::learn;
using features::Schema;
using labeling::LabelValue;
using linkwatch::testing::dataset_from;
using linkwatch::testing::random_dataset;
using linkwatch::testing::TempDir;

namespace {

// Five NON_CLICK columns with only the first one varying.
Dataset one_feature(const std::vector<double>& x, const std::vector<int>& y) {
  std::vector<std::vector<std::optional<double>>> rows;
  for (double v : x) rows.push_back({v, 0.0, 12.0, 1.0, 0.0});
  return dataset_from(Schema::kNonClick, rows, y);
}

Dataset balanced(std::size_t n) {
  std::vector<double> x(n);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = static_cast<double>(i);
    y[i] = static_cast<int>(i % 2);
  }
  return one_feature(x, y);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kIo;
}

std::vector<LabelValue> labels_of(const TrainedModel& m, const Dataset& d) {
  std::vector<LabelValue> out;
  for (const Prediction& p : predict_all(m, d)) out.push_back(p.label);
  return out;
}

}  // namespace

TEST_CASE("split sizes total floor(fraction * n) and stay within one per class") {
  const Dataset d = balanced(16000);
  const auto [train, test] = split_dataset(d, SplitSpec{0.75, 1, true});
  CHECK(train.size() == 12000);
  CHECK(test.size() == 4000);
  CHECK(train.count(LabelValue::kMalicious) == 6000);

  const auto [tr4, te4] = split_dataset(balanced(4), SplitSpec{0.75, 1, false});
  CHECK(tr4.size() == 3);
  CHECK(te4.size() == 1);

  // 7 benign, 5 malicious: shares 5.25 and 3.75 floor to 8 of floor(9.0);
  // the larger remainder (malicious) takes the ninth slot.
  std::vector<int> y = {0, 0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  std::vector<double> x(y.size());
  std::iota(x.begin(), x.end(), 0.0);
  const auto [tr, te] = split_dataset(one_feature(x, y), SplitSpec{0.75, 9, true});
  CHECK(tr.count(LabelValue::kBenign) == 5);
  CHECK(tr.count(LabelValue::kMalicious) == 4);
  CHECK(te.size() == 3);

  // Odd class counts: 7999 + 8001 still gives 12000 / 4000.
  std::vector<int> odd(16000, 0);
  for (std::size_t i = 0; i < 8001; ++i) odd[i] = 1;
  std::vector<double> xo(odd.size(), 1.0);
  const auto [tro, teo] = split_dataset(one_feature(xo, odd), SplitSpec{0.75, 2, true});
  CHECK(tro.size() == 12000);
  CHECK(teo.size() == 4000);
  const double mal_share = 0.75 * 8001;
  CHECK(std::abs(static_cast<double>(tro.count(LabelValue::kMalicious)) - mal_share) <= 1.0);
}

TEST_CASE("split is disjoint, exhaustive and seed-deterministic") {
  const Dataset d = balanced(101);
  const auto a = split_dataset(d, SplitSpec{0.6, 5, true});
  const auto b = split_dataset(d, SplitSpec{0.6, 5, true});
  const auto c = split_dataset(d, SplitSpec{0.6, 6, true});
  std::set<std::string> ids;
  for (const auto& i : a.first.instances) ids.insert(i.link_id);
  for (const auto& i : a.second.instances) CHECK(ids.insert(i.link_id).second);
  CHECK(ids.size() == d.size());
  std::vector<std::string> ia, ib, ic;
  for (const auto& i : a.first.instances) ia.push_back(i.link_id);
  for (const auto& i : b.first.instances) ib.push_back(i.link_id);
  for (const auto& i : c.first.instances) ic.push_back(i.link_id);
  CHECK(ia == ib);
  CHECK(ia != ic);
}

TEST_CASE("split argument errors") {
  const Dataset d = one_feature({1, 2, 3}, {0, 0, 0});
  CHECK(kind_of([&] { split_dataset(d, SplitSpec{0.75, 1, true}); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { split_dataset(balanced(10), SplitSpec{1.0, 1, true}); }) ==
        ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { split_dataset(balanced(10), SplitSpec{0.0, 1, true}); }) ==
        ErrorKind::kInvalidArgument);
}

TEST_CASE("cross-validation folds partition the data") {
  const Dataset d = balanced(100);
  const std::vector<int> fold = stratified_folds(d, 10, 3);
  std::vector<int> size(10, 0);
  for (int f : fold) ++size[static_cast<std::size_t>(f)];
  for (int s : size) CHECK(s == 10);

  TrainerConfig dt;
  dt.kind = ModelKind::kDecisionTree;
  const CVResult r = cross_validate(d, 10, dt, 3);
  std::size_t tested = 0;
  for (const FoldResult& f : r.folds) tested += f.test_size;
  CHECK(tested == 100);
  CHECK(r.pooled.total() == 100);
}

TEST_CASE("leave-one-out runs and k is validated") {
  const Dataset d = balanced(12);
  TrainerConfig nb;
  nb.kind = ModelKind::kNaiveBayes;
  const CVResult r = cross_validate(d, 12, nb, 1);
  CHECK(r.folds.size() == 12);
  for (const FoldResult& f : r.folds) CHECK(f.test_size == 1);
  CHECK(kind_of([&] { cross_validate(d, 1, nb, 1); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { cross_validate(d, 13, nb, 1); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("parallel and serial cross-validation agree") {
  Rng rng(77);
  const Dataset d = random_dataset(rng, 300);
  TrainerConfig rf;
  rf.forest.n_trees = 15;
  const CVResult a = cross_validate(d, 5, rf, 4);
  const CVResult b = serial::cross_validate(d, 5, rf, 4);
  CHECK(a.mean_accuracy == b.mean_accuracy);
  CHECK(a.pooled == b.pooled);
}

TEST_CASE("naive bayes picks the nearer class mean") {
  const Dataset d = one_feature({-11, -10, -9, 9, 10, 11}, {0, 0, 0, 1, 1, 1});
  const TrainedModel m = train_naive_bayes(d);
  auto at = [&](double x) {
    return predict(m, features::FeatureVector::from_values(Schema::kNonClick,
                                                           std::vector<std::optional<double>>{x, 0.0, 12.0, 1.0, 0.0}))
        .label;
  };
  CHECK(at(-3) == LabelValue::kBenign);
  CHECK(at(2) == LabelValue::kMalicious);
  CHECK(at(-10) == LabelValue::kBenign);
  CHECK(at(0.5) == LabelValue::kMalicious);
}

TEST_CASE("naive bayes floors zero variance") {
  const Dataset d = one_feature({1, 1, 1, 5, 5, 5}, {0, 0, 0, 1, 1, 1});
  const TrainedModel m = train_naive_bayes(d);
  const auto& nb = std::get<GaussianNaiveBayes>(m.structure);
  CHECK(nb.variances[0][0] == 1e-9);
  CHECK(nb.variances[1][2] == 1e-9);
  CHECK(nb.priors[0] == 0.5);
  for (const Prediction& p : predict_all(m, d)) {
    CHECK(std::isfinite(p.score));
  }
  CHECK(labels_of(m, d) == d.labels());
}

TEST_CASE("naive bayes posteriors sum to one") {
  Rng rng(5);
  const Dataset d = random_dataset(rng, 200);
  const TrainedModel m = train_naive_bayes(d);
  const auto& nb = std::get<GaussianNaiveBayes>(m.structure);
  const Matrix x = to_matrix(d, m.imputation_medians);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const auto lj = log_joint(nb, x.row(i));
    const double p1 = malicious_posterior(lj);
    const double p0 = malicious_posterior({lj[1], lj[0]});
    CHECK(p0 + p1 == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("degenerate datasets are rejected") {
  const Dataset single = one_feature({1, 2, 3}, {1, 1, 1});
  CHECK(kind_of([&] { train_naive_bayes(single); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { train_decision_tree(single); }) == ErrorKind::kInvalidArgument);
  CHECK(kind_of([&] { train_random_forest(single); }) == ErrorKind::kInvalidArgument);
  const Dataset one = one_feature({1}, {1});
  CHECK(kind_of([&] { train_naive_bayes(one); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("decision tree splits at the midpoint") {
  const Dataset d = one_feature({0, 1, 10, 11}, {0, 0, 1, 1});
  const TrainedModel m = train_decision_tree(d);
  const auto& t = std::get<DecisionTree>(m.structure);
  REQUIRE(t.nodes.size() == 3);
  CHECK(t.nodes[0].feature == 0);
  CHECK(t.nodes[0].threshold == 5.5);
  CHECK(labels_of(m, d) == d.labels());
}

TEST_CASE("pure and constant inputs give a single leaf") {
  TreeParams p;
  p.min_leaf = 1;
  Rng rng(3);
  const Dataset pure = one_feature({1, 2, 3, 4}, {1, 1, 1, 1});
  Matrix pm = to_matrix(pure, compute_medians(pure));
  std::vector<std::size_t> rows{0, 1, 2, 3};
  const DecisionTree pt = grow_tree(pm, rows, p, 5, nullptr);
  CHECK(pt.nodes.size() == 1);
  CHECK(pt.score(pm.row(0)) == 1.0);

  const Dataset constant = one_feature({7, 7, 7, 7, 7}, {1, 0, 1, 0, 1});
  const TrainedModel m = train_decision_tree(constant, p);
  CHECK(std::get<DecisionTree>(m.structure).nodes.size() == 1);
  CHECK(labels_of(m, constant)[0] == LabelValue::kMalicious);

  const Dataset tied = one_feature({7, 7, 7, 7}, {1, 0, 1, 0});
  CHECK(labels_of(train_decision_tree(tied, p), tied)[0] == LabelValue::kMalicious);
}

TEST_CASE("tree parameters are validated") {
  const Dataset d = balanced(10);
  TreeParams p;
  p.min_leaf = 0;
  CHECK(kind_of([&] { train_decision_tree(d, p); }) == ErrorKind::kInvalidArgument);
  p.min_leaf = 1;
  p.max_depth = 0;
  CHECK(kind_of([&] { train_decision_tree(d, p); }) == ErrorKind::kInvalidArgument);
  ForestParams f;
  f.n_trees = 0;
  CHECK(kind_of([&] { train_random_forest(d, f); }) == ErrorKind::kInvalidArgument);
  f.n_trees = 3;
  f.features_per_split = 0;
  CHECK(kind_of([&] { train_random_forest(d, f); }) == ErrorKind::kInvalidArgument);
}

TEST_CASE("min_leaf and max_depth bound the tree") {
  Rng rng(8);
  const Dataset d = random_dataset(rng, 400, 0.3);
  TreeParams deep;
  deep.min_leaf = 1;
  TreeParams capped = deep;
  capped.max_depth = 3;
  TreeParams wide;
  wide.min_leaf = 25;
  const auto t_deep = std::get<DecisionTree>(train_decision_tree(d, deep).structure);
  const auto t_cap = std::get<DecisionTree>(train_decision_tree(d, capped).structure);
  const auto t_wide = std::get<DecisionTree>(train_decision_tree(d, wide).structure);
  CHECK(t_cap.depth() <= 3);
  CHECK(t_deep.depth() > 3);
  for (const TreeNode& n : t_wide.nodes) CHECK(n.counts[0] + n.counts[1] >= 25);
}

TEST_CASE("gain ratio is selectable") {
  Rng rng(12);
  const Dataset d = random_dataset(rng, 200, 0.2);
  TreeParams p;
  p.use_gain_ratio = true;
  const TrainedModel m = train_decision_tree(d, p);
  CHECK(m.tree_params.use_gain_ratio);
  CHECK(std::get<DecisionTree>(m.structure).nodes.size() > 1);
}

TEST_CASE("forest reduces to the decision tree") {
  Rng rng(2);
  const Dataset d = random_dataset(rng, 120);
  ForestParams f;
  f.n_trees = 1;
  f.bootstrap = false;
  f.features_per_split = 5;
  const TrainedModel forest = train_random_forest(d, f);
  const TrainedModel tree = train_decision_tree(d);
  CHECK(std::get<RandomForest>(forest.structure).trees[0] == std::get<DecisionTree>(tree.structure));
  CHECK(labels_of(forest, d) == labels_of(tree, d));
}

TEST_CASE("forests are seed-deterministic and thread-count independent") {
  Rng rng(4);
  const Dataset d = random_dataset(rng, 250);
  ForestParams f;
  f.n_trees = 20;
  f.seed = 99;
  const TrainedModel a = train_random_forest(d, f);
  const TrainedModel b = train_random_forest(d, f);
  const TrainedModel c = serial::train_random_forest(d, f);
  CHECK(a == b);
  CHECK(a == c);
  CHECK(serialize_model(a) == serialize_model(c));
  f.seed = 100;
  CHECK_FALSE(train_random_forest(d, f) == a);
}

TEST_CASE("forest vote ties resolve to MALICIOUS") {
  auto leaf = [](std::int64_t benign, std::int64_t malicious) {
    DecisionTree t;
    TreeNode n;
    n.counts = {benign, malicious};
    t.nodes = {n};
    return t;
  };
  TrainedModel m;
  m.schema = Schema::kNonClick;
  m.imputation_medians = {0, 0, 0, 0, 0};
  m.structure = RandomForest{{leaf(3, 1), leaf(0, 2), leaf(1, 1), leaf(5, 0)}, {1, 2, 3, 4}};
  const auto fv = features::FeatureVector::from_values(
      Schema::kNonClick, std::vector<std::optional<double>>{1.0, 1.0, 1.0, 1.0, 0.0});
  const Prediction p = predict(m, fv);
  CHECK(p.score == 0.5);
  CHECK(p.label == LabelValue::kMalicious);
}

TEST_CASE("MISSING inputs are imputed with training medians") {
  std::vector<std::vector<std::optional<double>>> rows = {
      {1.0, 0.0, 1.0, 1.0, 0.0}, {std::nullopt, 0.0, 2.0, 1.0, 0.0},
      {3.0, 0.0, 20.0, 1.0, 0.0}, {7.0, 0.0, 21.0, 1.0, 0.0}};
  const Dataset d = dataset_from(Schema::kNonClick, rows, {0, 0, 1, 1});
  const TrainedModel m = train_naive_bayes(d);
  CHECK(m.imputation_medians[0] == 3.0);
  const auto fv = features::FeatureVector::from_values(
      Schema::kNonClick,
      std::vector<std::optional<double>>{std::nullopt, std::nullopt, 20.0, 1.0, 0.0});
  CHECK_NOTHROW(predict(m, fv));
}

TEST_CASE("imputation medians come from the training split only") {
  Rng rng(31);
  Dataset d = random_dataset(rng, 200);
  for (std::size_t i = 0; i < d.size(); i += 7) d.instances[i].features.domain_age_days.reset();
  const auto [train, test] = split_dataset(d, SplitSpec{0.75, 2, true});
  const TrainedModel m = train_decision_tree(train);
  CHECK(m.imputation_medians == compute_medians(train));
  CHECK(m.imputation_medians != compute_medians(d));
}

TEST_CASE("prediction refuses a schema mismatch") {
  const TrainedModel m = train_decision_tree(balanced(10));
  features::FeatureVector fv;
  fv.schema = Schema::kFull;
  fv.direct_referrer_ratio = 0.0;
  CHECK(kind_of([&] { predict(m, fv); }) == ErrorKind::kSchemaMismatch);
}

TEST_CASE("model files round trip exactly") {
  Rng rng(17);
  const Dataset d = random_dataset(rng, 150);
  ForestParams f;
  f.n_trees = 5;
  f.seed = 1234567890123ull;
  f.tree.max_depth = 6;
  TempDir dir;
  for (const TrainedModel& m : {train_naive_bayes(d), train_decision_tree(d), train_random_forest(d, f)}) {
    CAPTURE(to_string(m.kind()));
    save_model(dir / "m.json", m);
    const TrainedModel back = load_model(dir / "m.json");
    CHECK(back == m);
    CHECK(serialize_model(back) == serialize_model(m));
    for (const Prediction& p : predict_all(back, d)) CHECK(p.score >= 0.0);
  }
}

TEST_CASE("unknown model versions are refused") {
  const TrainedModel m = train_naive_bayes(balanced(6));
  auto j = nlohmann::json::parse(serialize_model(m));
  j["schema_version"] = 2;
  CHECK(kind_of([&] { model_from_json(j); }) == ErrorKind::kSchemaViolation);
  j.erase("schema_version");
  CHECK(kind_of([&] { model_from_json(j); }) == ErrorKind::kSchemaViolation);
}

TEST_CASE("forest beats a single tree on noisy synthetic corpora") {
  // Averaged over 10 generator seeds; planted camouflage acts as label noise.
  double tree_acc = 0, forest_acc = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorConfig cfg;
    cfg.n_benign = 300;
    cfg.n_malicious = 300;
    cfg.camouflage_rate = 0.2;
    const SyntheticCorpus syn = generate_synthetic(cfg, 500 + seed);
    const auto labels = pipeline::label_links(syn.corpus, syn.fixtures, false);
    const Dataset data = pipeline::build_dataset(syn.corpus, labels.labels,
                                                 pipeline::Experiment::kFullAllFeatures, seed);
    const auto [train, test] = split_dataset(data, SplitSpec{0.75, seed, true});
    ForestParams f;
    f.seed = seed;
    auto accuracy = [&](const TrainedModel& m) {
      const auto predicted = labels_of(m, test);
      const auto truth = test.labels();
      std::size_t ok = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) ok += predicted[i] == truth[i];
      return static_cast<double>(ok) / static_cast<double>(truth.size());
    };
    tree_acc += accuracy(train_decision_tree(train));
    forest_acc += accuracy(train_random_forest(train, f));
  }
  CHECK(forest_acc / 10 >= tree_acc / 10);
}

TEST_CASE("zero referrers as 0 versus MISSING barely moves accuracy") {
  GeneratorConfig cfg;
  const SyntheticCorpus syn = generate_synthetic(cfg, 71);
  const auto labels = pipeline::label_links(syn.corpus, syn.fixtures, false);
  Dataset as_zero = pipeline::build_dataset(syn.corpus, labels.labels,
                                            pipeline::Experiment::kFullAllFeatures, 71);
  Dataset as_missing = as_zero;
  for (std::size_t i = 0; i < as_missing.size(); ++i)
    if (syn.corpus.links[i].referrers.empty()) as_missing.instances[i].features.direct_referrer_ratio.reset();
  // from_values would reject this; the learner only needs values() and imputation.
  TrainerConfig rf;
  rf.forest.n_trees = 30;
  const double a = cross_validate(as_zero, 5, rf, 3).mean_accuracy;
  const double b = cross_validate(as_missing, 5, rf, 3).mean_accuracy;
  CHECK(std::abs(a - b) <= 0.02);
}
