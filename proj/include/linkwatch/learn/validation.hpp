#pragma once

#include <cstdint>
#include <vector>

#include "linkwatch/eval/metrics.hpp"
#include "linkwatch/learn/train.hpp"

namespace linkwatch::learn {

struct FoldResult {
  int fold = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  eval::ConfusionMatrix confusion;
  double accuracy = 0.0;
  double weighted_f_measure = 0.0;
};

struct CVResult {
  int k = 0;
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double mean_weighted_f_measure = 0.0;
  eval::ConfusionMatrix pooled;
};

// Fold index per instance. Each class is shuffled on its own stream, the
// classes are concatenated and position p goes to fold p mod k, which keeps
// per-class fold counts within one of each other.
std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed);

// Fold f trains on the other folds (imputation medians included) with a
// child seed of `seed`, then tests on fold f.
CVResult cross_validate(const Dataset& data, int k, const TrainerConfig& trainer,
                        std::uint64_t seed);
namespace serial {
CVResult cross_validate(const Dataset& data, int k, const TrainerConfig& trainer,
                        std::uint64_t seed);
}

}  // namespace linkwatch::learn
