// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "linkwatch/core/synthetic.hpp"
#include "linkwatch/eval/ranking.hpp"
#include "linkwatch/features/features.hpp"
#include "linkwatch/learn/train.hpp"
#include "linkwatch/learn/validation.hpp"
#include "linkwatch/pipeline/pipeline.hpp"
#include "linkwatch/profile/profile.hpp"

using namespace linkwatch;

namespace {

const SyntheticCorpus& corpus() {
  static const SyntheticCorpus s = [] {
    GeneratorConfig cfg;
    cfg.background_accounts = 60;
    return generate_synthetic(cfg, 1);
  }();
  return s;
}

const learn::Dataset& dataset() {
  static const learn::Dataset d = [] {
    const auto run = pipeline::label_links(corpus().corpus, corpus().fixtures, false);
    return pipeline::build_dataset(corpus().corpus, run.labels, pipeline::Experiment::kFullAllFeatures, 1);
  }();
  return d;
}

const learn::Matrix& matrix() {
  static const learn::Matrix m = learn::to_matrix(dataset(), learn::compute_medians(dataset()));
  return m;
}

std::vector<EncoderProfile> posting_profiles() {
  std::vector<EncoderProfile> out;
  for (const auto& [id, p] : corpus().corpus.encoders)
    if (p.posts) out.push_back(p);
  return out;
}

void BM_Extract_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(features::serial::extract_all(corpus().corpus.links, features::Schema::kFull));
}
void BM_Extract_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(features::extract_all(corpus().corpus.links, features::Schema::kFull));
}

void BM_Forest_Serial(benchmark::State& st) {
  learn::ForestParams p;
  p.n_trees = 50;
  for (auto _ : st) benchmark::DoNotOptimize(learn::serial::fit_random_forest(matrix(), p));
}
void BM_Forest_Parallel(benchmark::State& st) {
  learn::ForestParams p;
  p.n_trees = 50;
  for (auto _ : st) benchmark::DoNotOptimize(learn::fit_random_forest(matrix(), p));
}

void BM_CrossVal_Serial(benchmark::State& st) {
  learn::TrainerConfig t;
  t.kind = learn::ModelKind::kDecisionTree;
  for (auto _ : st) benchmark::DoNotOptimize(learn::serial::cross_validate(dataset(), 10, t, 3));
}
void BM_CrossVal_Parallel(benchmark::State& st) {
  learn::TrainerConfig t;
  t.kind = learn::ModelKind::kDecisionTree;
  for (auto _ : st) benchmark::DoNotOptimize(learn::cross_validate(dataset(), 10, t, 3));
}

void BM_Rank_Serial(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(eval::serial::rank_features(dataset()));
}
void BM_Rank_Parallel(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(eval::rank_features(dataset()));
}

void BM_Overlap_Serial(benchmark::State& st) {
  const auto profiles = posting_profiles();
  for (auto _ : st) benchmark::DoNotOptimize(profile::serial::cross_account_overlap(profiles));
}
void BM_Overlap_Parallel(benchmark::State& st) {
  const auto profiles = posting_profiles();
  for (auto _ : st) benchmark::DoNotOptimize(profile::cross_account_overlap(profiles));
}

}  // namespace

BENCHMARK(BM_Extract_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Extract_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forest_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Forest_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossVal_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CrossVal_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rank_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Rank_Parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Overlap_Serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Overlap_Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
