#include "linkwatch/learn/model.hpp"
#include "linkwatch/learn/train.hpp"

#include "linkwatch/core/corpus_io.hpp"
#include "linkwatch/core/error.hpp"

namespace linkwatch::learn {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNaiveBayes: return "NAIVE_BAYES";
    case ModelKind::kDecisionTree: return "DECISION_TREE";
    case ModelKind::kRandomForest: return "RANDOM_FOREST";
  }
  return "?";
}

ModelKind model_kind_from_string(std::string_view text) {
  if (text == "NAIVE_BAYES" || text == "NB") return ModelKind::kNaiveBayes;
  if (text == "DECISION_TREE" || text == "DT") return ModelKind::kDecisionTree;
  if (text == "RANDOM_FOREST" || text == "RF") return ModelKind::kRandomForest;
  fail(ErrorKind::kInvalidArgument, "unknown classifier '" + std::string(text) + "'");
}

double score_row(const TrainedModel& model, const double* x) {
  switch (model.kind()) {
    case ModelKind::kNaiveBayes:
      return malicious_posterior(log_joint(std::get<GaussianNaiveBayes>(model.structure), x));
    case ModelKind::kDecisionTree:
      return std::get<DecisionTree>(model.structure).score(x);
    case ModelKind::kRandomForest:
      return forest_score(std::get<RandomForest>(model.structure), x);
  }
  fail(ErrorKind::kInvariantViolation, "unknown model kind");
}

Prediction predict(const TrainedModel& model, const FeatureVector& fv) {
  if (fv.schema != model.schema)
    fail(ErrorKind::kSchemaMismatch, std::string("model expects schema ") +
                                         features::to_string(model.schema) + ", got " +
                                         features::to_string(fv.schema));
  const std::vector<double> row = impute(fv, model.imputation_medians);
  Prediction p;
  p.score = score_row(model, row.data());
  p.label = label_for_score(p.score);
  return p;
}

std::vector<Prediction> predict_all(const TrainedModel& model, const Dataset& data) {
  std::vector<Prediction> out;
  out.reserve(data.size());
  for (const LabeledInstance& inst : data.instances) out.push_back(predict(model, inst.features));
  return out;
}

namespace {

ordered_json tree_params_json(const TreeParams& p) {
  ordered_json j;
  j["max_depth"] = p.max_depth ? json(*p.max_depth) : json(nullptr);
  j["min_leaf"] = p.min_leaf;
  j["use_gain_ratio"] = p.use_gain_ratio;
  return j;
}

TreeParams tree_params_from(const json& j) {
  TreeParams p;
  if (!j.at("max_depth").is_null()) p.max_depth = j.at("max_depth").get<int>();
  p.min_leaf = j.at("min_leaf").get<int>();
  p.use_gain_ratio = j.at("use_gain_ratio").get<bool>();
  return p;
}

ordered_json tree_json(const DecisionTree& t) {
  ordered_json nodes = ordered_json::array();
  for (const TreeNode& n : t.nodes)
    nodes.push_back({n.feature, n.threshold, n.left, n.right, n.counts[0], n.counts[1]});
  return ordered_json{{"nodes", std::move(nodes)}};
}

DecisionTree tree_from(const json& j) {
  DecisionTree t;
  for (const json& n : j.at("nodes")) {
    if (!n.is_array() || n.size() != 6)
      fail(ErrorKind::kSchemaViolation, "tree node must be [feature, threshold, left, right, n_benign, n_malicious]");
    TreeNode node;
    node.feature = n[0].get<int>();
    node.threshold = n[1].get<double>();
    node.left = n[2].get<int>();
    node.right = n[3].get<int>();
    node.counts = {n[4].get<std::int64_t>(), n[5].get<std::int64_t>()};
    t.nodes.push_back(node);
  }
  const auto size = static_cast<int>(t.nodes.size());
  if (size == 0) fail(ErrorKind::kSchemaViolation, "tree has no nodes");
  for (int i = 0; i < size; ++i) {
    const TreeNode& n = t.nodes[static_cast<std::size_t>(i)];
    if (!n.is_leaf() && (n.left <= i || n.right <= i || n.left >= size || n.right >= size))
      fail(ErrorKind::kSchemaViolation, "tree node child index out of range");
  }
  return t;
}

}  // namespace

ordered_json to_json(const TrainedModel& model) {
  ordered_json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = to_string(model.kind());
  j["schema"] = features::to_string(model.schema);
  j["feature_names"] = features::feature_names(model.schema);
  j["imputation_medians"] = model.imputation_medians;
  j["training_seed"] = model.training_seed;
  switch (model.kind()) {
    case ModelKind::kNaiveBayes: {
      const auto& nb = std::get<GaussianNaiveBayes>(model.structure);
      j["params"] = ordered_json{{"variance_floor", 1e-9}};
      ordered_json classes = ordered_json::array();
      for (int c = 0; c < 2; ++c)
        classes.push_back(ordered_json{{"label", c == 1 ? "MALICIOUS" : "BENIGN"},
                                       {"prior", nb.priors[c]},
                                       {"means", nb.means[c]},
                                       {"variances", nb.variances[c]}});
      j["structure"] = ordered_json{{"classes", std::move(classes)}};
      break;
    }
    case ModelKind::kDecisionTree:
      j["params"] = tree_params_json(model.tree_params);
      j["structure"] = tree_json(std::get<DecisionTree>(model.structure));
      break;
    case ModelKind::kRandomForest: {
      const ForestParams& p = model.forest_params;
      const auto& forest = std::get<RandomForest>(model.structure);
      j["params"] = ordered_json{
          {"n_trees", p.n_trees},
          {"features_per_split", p.features_per_split ? json(*p.features_per_split) : json(nullptr)},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed},
          {"tree", tree_params_json(p.tree)}};
      ordered_json trees = ordered_json::array();
      for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        ordered_json tj = tree_json(forest.trees[t]);
        tj["bootstrap_seed"] = forest.tree_seeds[t];
        trees.push_back(std::move(tj));
      }
      j["structure"] = ordered_json{{"trees", std::move(trees)}};
      break;
    }
  }
  return j;
}

TrainedModel model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("schema_version"))
    fail(ErrorKind::kSchemaViolation, "model file has no schema_version");
  if (!j.at("schema_version").is_number_integer() ||
      j.at("schema_version").get<int>() != kModelSchemaVersion)
    fail(ErrorKind::kSchemaViolation,
         "unsupported model schema_version " + j.at("schema_version").dump());
  try {
    TrainedModel m;
    const ModelKind kind = model_kind_from_string(j.at("kind").get<std::string>());
    m.schema = features::schema_from_string(j.at("schema").get<std::string>());
    m.imputation_medians = j.at("imputation_medians").get<std::vector<double>>();
    if (m.imputation_medians.size() != features::feature_count(m.schema))
      fail(ErrorKind::kSchemaViolation, "imputation_medians width does not match schema");
    m.training_seed = j.at("training_seed").get<std::uint64_t>();
    const json& s = j.at("structure");
    const json& p = j.at("params");
    const std::size_t width = m.imputation_medians.size();
    switch (kind) {
      case ModelKind::kNaiveBayes: {
        GaussianNaiveBayes nb;
        const json& classes = s.at("classes");
        if (classes.size() != 2) fail(ErrorKind::kSchemaViolation, "naive bayes needs two classes");
        for (int c = 0; c < 2; ++c) {
          const json& cj = classes.at(static_cast<std::size_t>(c));
          nb.priors[c] = cj.at("prior").get<double>();
          nb.means[c] = cj.at("means").get<std::vector<double>>();
          nb.variances[c] = cj.at("variances").get<std::vector<double>>();
          if (nb.means[c].size() != width || nb.variances[c].size() != width)
            fail(ErrorKind::kSchemaViolation, "naive bayes parameter width mismatch");
        }
        m.structure = std::move(nb);
        break;
      }
      case ModelKind::kDecisionTree:
        m.tree_params = tree_params_from(p);
        m.structure = tree_from(s);
        break;
      case ModelKind::kRandomForest: {
        ForestParams fp;
        fp.n_trees = p.at("n_trees").get<int>();
        if (!p.at("features_per_split").is_null())
          fp.features_per_split = p.at("features_per_split").get<int>();
        fp.bootstrap = p.at("bootstrap").get<bool>();
        fp.seed = p.at("seed").get<std::uint64_t>();
        fp.tree = tree_params_from(p.at("tree"));
        RandomForest forest;
        for (const json& tj : s.at("trees")) {
          forest.trees.push_back(tree_from(tj));
          forest.tree_seeds.push_back(tj.at("bootstrap_seed").get<std::uint64_t>());
        }
        if (forest.trees.empty()) fail(ErrorKind::kSchemaViolation, "forest has no trees");
        m.forest_params = fp;
        m.structure = std::move(forest);
        break;
      }
    }
    auto check_tree = [&](const DecisionTree& t) {
      for (const TreeNode& n : t.nodes)
        if (n.feature >= static_cast<int>(width))
          fail(ErrorKind::kSchemaViolation, "tree splits on a feature outside the schema");
    };
    if (auto* t = std::get_if<DecisionTree>(&m.structure)) check_tree(*t);
    if (auto* f = std::get_if<RandomForest>(&m.structure))
      for (const DecisionTree& t : f->trees) check_tree(t);
    return m;
  } catch (const json::exception& e) {
    fail(ErrorKind::kSchemaViolation, std::string("malformed model: ") + e.what());
  }
}

std::string serialize_model(const TrainedModel& model) { return to_json(model).dump(1) + "\n"; }

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
  write_text_file(path, serialize_model(model));
}

TrainedModel load_model(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::kSchemaViolation, path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace linkwatch::learn
