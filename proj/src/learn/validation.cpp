#include "linkwatch/learn/validation.hpp"

#include "linkwatch/core/error.hpp"
#include "linkwatch/core/random.hpp"

namespace linkwatch::learn {

std::vector<int> stratified_folds(const Dataset& data, int k, std::uint64_t seed) {
  if (k < 2 || static_cast<std::size_t>(k) > data.size())
    fail(ErrorKind::kInvalidArgument, "cross-validation needs 2 <= k <= " +
                                          std::to_string(data.size()) + ", got k=" +
                                          std::to_string(k));
  const Rng rng = Rng(seed).child("cv_folds");
  std::vector<std::size_t> benign, malicious;
  for (std::size_t i = 0; i < data.size(); ++i)
    (data.instances[i].label.malicious() ? malicious : benign).push_back(i);
  Rng rb = rng.child("class", 0);
  Rng rm = rng.child("class", 1);
  rb.shuffle(benign);
  rm.shuffle(malicious);
  std::vector<int> fold(data.size());
  std::size_t p = 0;
  for (const auto* group : {&benign, &malicious})
    for (std::size_t i : *group) fold[i] = static_cast<int>(p++ % static_cast<std::size_t>(k));
  return fold;
}

namespace {

FoldResult run_fold(const Dataset& data, const std::vector<int>& fold_of, int f,
                    const TrainerConfig& trainer, std::uint64_t seed) {
  std::vector<std::size_t> train_idx, test_idx;
  for (std::size_t i = 0; i < data.size(); ++i)
    (fold_of[i] == f ? test_idx : train_idx).push_back(i);
  const Dataset train = subset(data, train_idx);
  const Dataset test = subset(data, test_idx);
  const std::uint64_t fold_seed = Rng(seed).child("cv_train", static_cast<std::uint64_t>(f)).seed();
  const TrainedModel model = learn::train(train, trainer, fold_seed);

  std::vector<LabelValue> predicted;
  predicted.reserve(test.size());
  for (const Prediction& p : predict_all(model, test)) predicted.push_back(p.label);
  const std::vector<LabelValue> truth = test.labels();

  FoldResult r;
  r.fold = f;
  r.train_size = train.size();
  r.test_size = test.size();
  r.confusion = eval::confusion_matrix(predicted, truth);
  const eval::MetricsReport m = eval::compute_metrics(r.confusion);
  r.accuracy = m.accuracy;
  r.weighted_f_measure = m.weighted_f_measure;
  return r;
}

CVResult summarize(int k, std::vector<FoldResult> folds) {
  CVResult out;
  out.k = k;
  for (const FoldResult& f : folds) {
    out.mean_accuracy += f.accuracy;
    out.mean_weighted_f_measure += f.weighted_f_measure;
    out.pooled += f.confusion;
  }
  out.mean_accuracy /= static_cast<double>(k);
  out.mean_weighted_f_measure /= static_cast<double>(k);
  out.folds = std::move(folds);
  return out;
}

}  // namespace

CVResult cross_validate(const Dataset& data, int k, const TrainerConfig& trainer,
                        std::uint64_t seed) {
  data.validate();
  const std::vector<int> fold_of = stratified_folds(data, k, seed);
  std::vector<FoldResult> folds(static_cast<std::size_t>(k));
  std::vector<std::exception_ptr> errors(folds.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int f = 0; f < k; ++f) {
    try {
      folds[static_cast<std::size_t>(f)] = run_fold(data, fold_of, f, trainer, seed);
    } catch (...) {
      errors[static_cast<std::size_t>(f)] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return summarize(k, std::move(folds));
}

namespace serial {
CVResult cross_validate(const Dataset& data, int k, const TrainerConfig& trainer,
                        std::uint64_t seed) {
  data.validate();
  const std::vector<int> fold_of = stratified_folds(data, k, seed);
  std::vector<FoldResult> folds;
  for (int f = 0; f < k; ++f) folds.push_back(run_fold(data, fold_of, f, trainer, seed));
  return summarize(k, std::move(folds));
}
}  // namespace serial

}  // namespace linkwatch::learn
