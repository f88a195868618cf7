#include <cmath>
#include <numbers>

#include "linkwatch/core/error.hpp"
#include "linkwatch/learn/train.hpp"

namespace linkwatch::learn {

namespace {
constexpr double kVarianceFloor = 1e-9;
}

GaussianNaiveBayes fit_naive_bayes(const Matrix& m) {
  GaussianNaiveBayes nb;
  std::array<std::size_t, 2> n{};
  for (int c = 0; c < 2; ++c) {
    nb.means[c].assign(m.cols, 0.0);
    nb.variances[c].assign(m.cols, 0.0);
  }
  for (std::size_t i = 0; i < m.rows; ++i) {
    const int c = m.malicious[i];
    ++n[c];
    for (std::size_t j = 0; j < m.cols; ++j) nb.means[c][j] += m.at(i, j);
  }
  if (n[0] == 0 || n[1] == 0)
    fail(ErrorKind::kInvalidArgument, "degenerate dataset: only one class present");
  for (int c = 0; c < 2; ++c)
    for (double& mean : nb.means[c]) mean /= static_cast<double>(n[c]);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const int c = m.malicious[i];
    for (std::size_t j = 0; j < m.cols; ++j) {
      const double d = m.at(i, j) - nb.means[c][j];
      nb.variances[c][j] += d * d;
    }
  }
  for (int c = 0; c < 2; ++c) {
    for (double& v : nb.variances[c]) v = std::max(v / static_cast<double>(n[c]), kVarianceFloor);
    nb.priors[c] = static_cast<double>(n[c]) / static_cast<double>(m.rows);
  }
  return nb;
}

std::array<double, 2> log_joint(const GaussianNaiveBayes& nb, const double* x) {
  std::array<double, 2> out{};
  for (int c = 0; c < 2; ++c) {
    double lp = std::log(nb.priors[c]);
    for (std::size_t j = 0; j < nb.means[c].size(); ++j) {
      const double v = nb.variances[c][j];
      const double d = x[j] - nb.means[c][j];
      lp += -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
    }
    out[c] = lp;
  }
  return out;
}

double malicious_posterior(const std::array<double, 2>& lj) {
  // p1 = 1 / (1 + exp(l0 - l1)), evaluated on the stable side.
  const double diff = lj[0] - lj[1];
  if (diff > 0) {
    const double e = std::exp(-diff);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(diff));
}

TrainedModel train_naive_bayes(const Dataset& train) {
  train.require_trainable();
  TrainedModel model;
  model.schema = train.schema;
  model.imputation_medians = compute_medians(train);
  model.structure = fit_naive_bayes(to_matrix(train, model.imputation_medians));
  return model;
}

}  // namespace linkwatch::learn
