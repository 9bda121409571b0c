#include <benchmark/benchmark.h>

#include "support/fixtures.hpp"

namespace pt = pathtext;
namespace ptt = pathtext::testing;

namespace {

std::string synthetic_report(std::size_t words) {
  static const char* vocab[] = {"Lung,", "parenchyma", "with", "FOCAL", "necrosis.",
                                "Tumor", "cells", "(grade", "2)", "lymph-node"};
  std::string text;
  for (std::size_t i = 0; i < words; ++i) text += std::string(vocab[(i * 7) % 10]) + " ";
  return text;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text = synthetic_report(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pt::normalize_and_tokenize(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(100)->Arg(1000);

void BM_TfidfTransform(benchmark::State& state) {
  const auto reports = ptt::separable_reports(static_cast<std::size_t>(state.range(0)), 3);
  std::vector<pt::Tokens> docs;
  for (const auto& r : reports) docs.push_back(r.tokens);
  const auto model = pt::TfidfModel::fit(docs);
  for (auto _ : state) {
    for (const auto& d : docs) benchmark::DoNotOptimize(model.transform(d));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * docs.size()));
}
BENCHMARK(BM_TfidfTransform)->Arg(200)->Arg(2000);

void BM_GbtTrain(benchmark::State& state) {
  const auto d = ptt::vectorize_split(ptt::separable_reports(static_cast<std::size_t>(state.range(0)), 7), 8);
  pt::ClassifierSpec s;
  s.kind = pt::ClassifierKind::Gbt;
  s.n_rounds = 20;
  s.early_stopping_rounds = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pt::train(d.X_train, d.y_train, d.encoding, d.tfidf.dimension(), s));
  }
}
BENCHMARK(BM_GbtTrain)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LdaSweep(benchmark::State& state) {
  const auto docs = ptt::two_group_docs(static_cast<std::size_t>(state.range(0)), 50, 11);
  pt::LdaConfig cfg;
  cfg.topics = 10;
  cfg.seed = 5;
  pt::LdaSampler sampler(docs, cfg);
  for (auto _ : state) sampler.sweep();
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * docs.size() * 50));
}
BENCHMARK(BM_LdaSweep)->Arg(40)->Arg(400);

}  // namespace

BENCHMARK_MAIN();
