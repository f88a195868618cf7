#include <cmath>
#include <numeric>

#include "linkwatch/core/error.hpp"
#include "linkwatch/learn/train.hpp"

namespace linkwatch::learn {

void ForestParams::validate() const {
  if (n_trees < 1) fail(ErrorKind::kInvalidArgument, "n_trees must be >= 1");
  if (features_per_split && *features_per_split < 1)
    fail(ErrorKind::kInvalidArgument, "features_per_split must be >= 1");
  tree.validate();
}

int ForestParams::resolved_features_per_split(std::size_t n_features) const {
  if (features_per_split) return *features_per_split;
  return static_cast<int>(std::floor(std::log2(static_cast<double>(n_features)))) + 1;
}

namespace {

RandomForest empty_forest(const ForestParams& params) {
  RandomForest forest;
  forest.trees.resize(static_cast<std::size_t>(params.n_trees));
  forest.tree_seeds.resize(forest.trees.size());
  const Rng root(params.seed);
  for (std::size_t t = 0; t < forest.trees.size(); ++t)
    forest.tree_seeds[t] = root.child("tree", t).seed();
  return forest;
}

DecisionTree grow_member(const Matrix& m, const ForestParams& params, std::uint64_t tree_seed) {
  Rng rng(tree_seed);
  std::vector<std::size_t> sample(m.rows);
  if (params.bootstrap) {
    for (std::size_t& s : sample) s = static_cast<std::size_t>(rng.below(m.rows));
  } else {
    std::iota(sample.begin(), sample.end(), std::size_t{0});
  }
  return grow_tree(m, sample, params.tree, params.resolved_features_per_split(m.cols), &rng);
}

TrainedModel forest_model(const Dataset& train, const ForestParams& params,
                          RandomForest (*fit)(const Matrix&, const ForestParams&)) {
  params.validate();
  train.require_trainable();
  TrainedModel model;
  model.schema = train.schema;
  model.imputation_medians = compute_medians(train);
  model.training_seed = params.seed;
  model.forest_params = params;
  model.structure = fit(to_matrix(train, model.imputation_medians), params);
  return model;
}

}  // namespace

RandomForest fit_random_forest(const Matrix& m, const ForestParams& params) {
  params.validate();
  RandomForest forest = empty_forest(params);
  const auto n = static_cast<std::int64_t>(forest.trees.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t t = 0; t < n; ++t) {
    const auto u = static_cast<std::size_t>(t);
    forest.trees[u] = grow_member(m, params, forest.tree_seeds[u]);
  }
  return forest;
}

TrainedModel train_random_forest(const Dataset& train, const ForestParams& params) {
  return forest_model(train, params, &learn::fit_random_forest);
}

namespace serial {
RandomForest fit_random_forest(const Matrix& m, const ForestParams& params) {
  params.validate();
  RandomForest forest = empty_forest(params);
  for (std::size_t t = 0; t < forest.trees.size(); ++t)
    forest.trees[t] = grow_member(m, params, forest.tree_seeds[t]);
  return forest;
}

TrainedModel train_random_forest(const Dataset& train, const ForestParams& params) {
  return forest_model(train, params, &serial::fit_random_forest);
}
}  // namespace serial

double forest_score(const RandomForest& forest, const double* x) {
  if (forest.trees.empty()) fail(ErrorKind::kInvariantViolation, "empty random forest");
  std::size_t votes = 0;
  for (const DecisionTree& t : forest.trees)
    if (label_for_score(t.score(x)) == LabelValue::kMalicious) ++votes;
  return static_cast<double>(votes) / static_cast<double>(forest.trees.size());
}

TrainedModel train(const Dataset& data, const TrainerConfig& config, std::uint64_t seed) {
  switch (config.kind) {
    case ModelKind::kNaiveBayes: {
      TrainedModel m = train_naive_bayes(data);
      m.training_seed = seed;
      return m;
    }
    case ModelKind::kDecisionTree: {
      TrainedModel m = train_decision_tree(data, config.tree);
      m.training_seed = seed;
      return m;
    }
    case ModelKind::kRandomForest: {
      ForestParams p = config.forest;
      p.seed = seed;
      return train_random_forest(data, p);
    }
  }
  fail(ErrorKind::kInvalidArgument, "unknown classifier kind");
}

}  // namespace linkwatch::learn
