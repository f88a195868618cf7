#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "linkwatch/learn/dataset.hpp"

namespace linkwatch::learn {

inline constexpr int kModelSchemaVersion = 1;

enum class ModelKind { kNaiveBayes, kDecisionTree, kRandomForest };

const char* to_string(ModelKind kind);
ModelKind model_kind_from_string(std::string_view text);

struct TreeParams {
  std::optional<int> max_depth;  // unlimited when unset
  int min_leaf = 2;              // minimum instances in each child
  bool use_gain_ratio = false;

  void validate() const;
  bool operator==(const TreeParams&) const = default;
};

struct ForestParams {
  int n_trees = 100;
  std::optional<int> features_per_split;  // floor(log2 F) + 1 when unset
  bool bootstrap = true;
  std::uint64_t seed = 0;
  TreeParams tree;

  void validate() const;
  int resolved_features_per_split(std::size_t n_features) const;
  bool operator==(const ForestParams&) const = default;
};

// Index 0 is BENIGN, 1 is MALICIOUS throughout.
struct GaussianNaiveBayes {
  std::array<double, 2> priors{};
  std::array<std::vector<double>, 2> means;
  std::array<std::vector<double>, 2> variances;

  bool operator==(const GaussianNaiveBayes&) const = default;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;  // x[feature] <= threshold
  int right = -1;
  std::array<std::int64_t, 2> counts{};

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(const double* x) const;
  // Malicious fraction at the leaf.
  double score(const double* x) const;
  int depth() const;
  bool operator==(const DecisionTree&) const = default;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> tree_seeds;

  bool operator==(const RandomForest&) const = default;
};

struct TrainedModel {
  Schema schema = Schema::kFull;
  std::vector<double> imputation_medians;
  std::uint64_t training_seed = 0;
  TreeParams tree_params;      // DECISION_TREE
  ForestParams forest_params;  // RANDOM_FOREST
  std::variant<GaussianNaiveBayes, DecisionTree, RandomForest> structure;

  ModelKind kind() const { return static_cast<ModelKind>(structure.index()); }
  bool operator==(const TrainedModel&) const = default;
};

struct Prediction {
  LabelValue label = LabelValue::kBenign;
  double score = 0.0;  // malicious posterior, leaf fraction or vote fraction
};

inline LabelValue label_for_score(double score) {
  return score >= 0.5 ? LabelValue::kMalicious : LabelValue::kBenign;
}

// Per-class log prior plus log likelihood of an imputed row.
std::array<double, 2> log_joint(const GaussianNaiveBayes& nb, const double* x);
// Normalized malicious posterior from the two log joints.
double malicious_posterior(const std::array<double, 2>& log_joint);

double score_row(const TrainedModel& model, const double* x);
Prediction predict(const TrainedModel& model, const FeatureVector& fv);
std::vector<Prediction> predict_all(const TrainedModel& model, const Dataset& data);

nlohmann::ordered_json to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);
std::string serialize_model(const TrainedModel& model);
void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace linkwatch::learn
