#pragma once

#include <cstdint>
#include <span>

#include "linkwatch/core/random.hpp"
#include "linkwatch/learn/model.hpp"

namespace linkwatch::learn {

TrainedModel train_naive_bayes(const Dataset& train);
TrainedModel train_decision_tree(const Dataset& train, const TreeParams& params = {});
TrainedModel train_random_forest(const Dataset& train, const ForestParams& params = {});
namespace serial {
TrainedModel train_random_forest(const Dataset& train, const ForestParams& params = {});
RandomForest fit_random_forest(const Matrix& m, const ForestParams& params);
}

// Matrix-level kernels. `sample` lists matrix rows and may repeat rows.
GaussianNaiveBayes fit_naive_bayes(const Matrix& m);
// features_per_split >= cols evaluates every feature in index order and
// never touches `rng`; otherwise a fresh random subset is drawn per node.
DecisionTree grow_tree(const Matrix& m, std::span<const std::size_t> sample,
                       const TreeParams& params, int features_per_split, Rng* rng);

// Trees are grown concurrently; each owns the stream seeded by tree_seeds[t].
RandomForest fit_random_forest(const Matrix& m, const ForestParams& params);
// Vote fraction of trees whose leaf score is >= 0.5.
double forest_score(const RandomForest& forest, const double* x);

struct TrainerConfig {
  ModelKind kind = ModelKind::kRandomForest;
  TreeParams tree;
  ForestParams forest;  // forest.seed is replaced by the seed passed to train()
};

TrainedModel train(const Dataset& data, const TrainerConfig& config, std::uint64_t seed);

}  // namespace linkwatch::learn
