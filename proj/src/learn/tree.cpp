#include <algorithm>
#include <cmath>
#include <numeric>

#include "linkwatch/core/error.hpp"
#include "linkwatch/learn/train.hpp"

namespace linkwatch::learn {

void TreeParams::validate() const {
  if (max_depth && *max_depth <= 0) fail(ErrorKind::kInvalidArgument, "max_depth must be positive");
  if (min_leaf <= 0) fail(ErrorKind::kInvalidArgument, "min_leaf must be positive");
}

const TreeNode& DecisionTree::leaf_for(const double* x) const {
  if (nodes.empty()) fail(ErrorKind::kInvariantViolation, "empty decision tree");
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const TreeNode& n = nodes[i];
    i = static_cast<std::size_t>(x[n.feature] <= n.threshold ? n.left : n.right);
  }
  return nodes[i];
}

double DecisionTree::score(const double* x) const {
  const TreeNode& leaf = leaf_for(x);
  const auto total = leaf.counts[0] + leaf.counts[1];
  return total == 0 ? 0.5 : static_cast<double>(leaf.counts[1]) / static_cast<double>(total);
}

int DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  // Children always come after their parent.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes[i].is_leaf()) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

namespace {

// Gains below this are rounding noise around a useless split.
constexpr double kMinGain = 1e-12;

// Presorted induction. Every node owns the range [lo, hi) of each per-feature
// order array, and those ranges hold the node's sample positions sorted by
// that feature. A split stably partitions every order array in place, so no
// sorting happens below the root.
class TreeBuilder {
 public:
  TreeBuilder(const Matrix& m, std::span<const std::size_t> sample, const TreeParams& params,
              int features_per_split, Rng* rng)
      : params_(params),
        n_(sample.size()),
        f_(m.cols),
        k_(features_per_split),
        rng_(rng),
        cols_(f_, std::vector<double>(n_)),
        y_(n_),
        order_(f_, std::vector<std::uint32_t>(n_)),
        goes_left_(n_),
        scratch_(n_),
        xlogx_(n_ + 1, 0.0),
        all_features_(f_) {
    for (std::size_t p = 0; p < n_; ++p) {
      const std::size_t r = sample[p];
      y_[p] = m.malicious[r];
      for (std::size_t j = 0; j < f_; ++j) cols_[j][p] = m.at(r, j);
    }
    for (std::size_t j = 0; j < f_; ++j) {
      auto& ord = order_[j];
      std::iota(ord.begin(), ord.end(), 0u);
      const auto& col = cols_[j];
      std::stable_sort(ord.begin(), ord.end(),
                       [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
    for (std::size_t c = 1; c <= n_; ++c) {
      const double x = static_cast<double>(c);
      xlogx_[c] = x * std::log2(x);
    }
    std::iota(all_features_.begin(), all_features_.end(), 0);
  }

  DecisionTree build() {
    tree_.nodes.reserve(2 * n_ / static_cast<std::size_t>(params_.min_leaf) + 1);
    grow(0, n_, 0);
    return std::move(tree_);
  }

 private:
  struct Split {
    int feature = -1;
    double threshold = 0.0;
    double score = 0.0;
    std::size_t n_left = 0;
  };

  // n * H(c0, c1) in bits.
  double weighted_entropy(std::size_t c0, std::size_t c1) const {
    return xlogx_[c0 + c1] - xlogx_[c0] - xlogx_[c1];
  }

  const std::vector<int>& candidate_features() {
    if (k_ >= static_cast<int>(f_)) return all_features_;
    subset_ = all_features_;
    const auto k = static_cast<std::size_t>(k_);
    for (std::size_t i = 0; i < k; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng_->below(f_ - i));
      std::swap(subset_[i], subset_[j]);
    }
    subset_.resize(k);
    std::sort(subset_.begin(), subset_.end());
    return subset_;
  }

  Split best_split(std::size_t lo, std::size_t hi, std::size_t c0, std::size_t c1) {
    const std::size_t n = hi - lo;
    const auto min_leaf = static_cast<std::size_t>(params_.min_leaf);
    const double parent = weighted_entropy(c0, c1);
    Split best;
    for (int f : candidate_features()) {
      const auto& ord = order_[static_cast<std::size_t>(f)];
      const auto& col = cols_[static_cast<std::size_t>(f)];
      std::size_t l0 = 0, l1 = 0;
      for (std::size_t i = lo; i + 1 < hi; ++i) {
        const std::uint32_t p = ord[i];
        if (y_[p]) ++l1;
        else ++l0;
        const double a = col[p];
        const double b = col[ord[i + 1]];
        if (!(a < b)) continue;
        const std::size_t nl = l0 + l1;
        if (nl < min_leaf) continue;
        if (n - nl < min_leaf) break;
        const double children = weighted_entropy(l0, l1) + weighted_entropy(c0 - l0, c1 - l1);
        const double gain = (parent - children) / static_cast<double>(n);
        if (gain <= kMinGain) continue;
        double score = gain;
        if (params_.use_gain_ratio) {
          const double split_info =
              (xlogx_[n] - xlogx_[nl] - xlogx_[n - nl]) / static_cast<double>(n);
          score = gain / split_info;
        }
        if (score > best.score) {
          double t = a + (b - a) / 2.0;
          if (!(t < b)) t = a;
          best = Split{f, t, score, nl};
        }
      }
    }
    return best;
  }

  void partition(std::size_t lo, std::size_t hi, const Split& s) {
    const auto& col = cols_[static_cast<std::size_t>(s.feature)];
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint32_t p = order_[0][i];
      goes_left_[p] = col[p] <= s.threshold ? 1 : 0;
    }
    for (auto& ord : order_) {
      std::size_t left = lo, right = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        const std::uint32_t p = ord[i];
        if (goes_left_[p]) ord[left++] = p;
        else scratch_[right++] = p;
      }
      std::copy(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(right),
                ord.begin() + static_cast<std::ptrdiff_t>(left));
    }
  }

  int grow(std::size_t lo, std::size_t hi, int depth) {
    const int index = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::size_t c0 = 0, c1 = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      if (y_[order_[0][i]]) ++c1;
      else ++c0;
    }
    tree_.nodes[static_cast<std::size_t>(index)].counts = {static_cast<std::int64_t>(c0),
                                                           static_cast<std::int64_t>(c1)};
    const bool pure = c0 == 0 || c1 == 0;
    const bool too_small = hi - lo < 2 * static_cast<std::size_t>(params_.min_leaf);
    const bool depth_cap = params_.max_depth && depth >= *params_.max_depth;
    if (pure || too_small || depth_cap) return index;

    const Split s = best_split(lo, hi, c0, c1);
    if (s.feature < 0) return index;

    partition(lo, hi, s);
    const int left = grow(lo, lo + s.n_left, depth + 1);
    const int right = grow(lo + s.n_left, hi, depth + 1);
    TreeNode& node = tree_.nodes[static_cast<std::size_t>(index)];
    node.feature = s.feature;
    node.threshold = s.threshold;
    node.left = left;
    node.right = right;
    return index;
  }

  const TreeParams& params_;
  std::size_t n_;
  std::size_t f_;
  int k_;
  Rng* rng_;
  std::vector<std::vector<double>> cols_;
  std::vector<std::uint8_t> y_;
  std::vector<std::vector<std::uint32_t>> order_;
  std::vector<std::uint8_t> goes_left_;
  std::vector<std::uint32_t> scratch_;
  std::vector<double> xlogx_;
  std::vector<int> all_features_;
  std::vector<int> subset_;
  DecisionTree tree_;
};

}  // namespace

DecisionTree grow_tree(const Matrix& m, std::span<const std::size_t> sample,
                       const TreeParams& params, int features_per_split, Rng* rng) {
  params.validate();
  if (sample.empty()) fail(ErrorKind::kInvalidArgument, "grow_tree: empty sample");
  if (m.cols == 0) fail(ErrorKind::kInvalidArgument, "grow_tree: no features");
  if (features_per_split < 1) fail(ErrorKind::kInvalidArgument, "features_per_split must be >= 1");
  if (features_per_split < static_cast<int>(m.cols) && rng == nullptr)
    fail(ErrorKind::kInvalidArgument, "grow_tree: feature sampling needs a random stream");
  return TreeBuilder(m, sample, params, features_per_split, rng).build();
}

TrainedModel train_decision_tree(const Dataset& train, const TreeParams& params) {
  params.validate();
  train.require_trainable();
  TrainedModel model;
  model.schema = train.schema;
  model.imputation_medians = compute_medians(train);
  model.tree_params = params;
  const Matrix m = to_matrix(train, model.imputation_medians);
  std::vector<std::size_t> rows(m.rows);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  model.structure = grow_tree(m, rows, params, static_cast<int>(m.cols), nullptr);
  return model;
}

}  // namespace linkwatch::learn
