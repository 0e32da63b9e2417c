#include <benchmark/benchmark.h>

#include "candist/annotate/parse.hpp"
#include "candist/core/label_space.hpp"
#include "candist/core/synth.hpp"
#include "candist/refinery/classifier.hpp"
#include "candist/refinery/trainer.hpp"
#include "candist/theory/theory.hpp"

using namespace candist;

static void BM_ClosedForm(benchmark::State& state) {
  theory::TheoryParams p;
  p.C = 4;
  p.m = static_cast<std::size_t>(state.range(0));
  const auto labels = theory::balanced_labels(p.m, p.C);
  const auto S = theory::build_similarity(labels, p.a, p.b);
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(4, static_cast<Eigen::Index>(p.m));
  for (std::size_t i = 0; i < p.m; ++i) Q(static_cast<Eigen::Index>(labels[i]), static_cast<Eigen::Index>(i)) = 1.0;
  for (auto _ : state) benchmark::DoNotOptimize(theory::closed_form_predictions(Q, S, p.lambda, p.C));
}
BENCHMARK(BM_ClosedForm)->Arg(100)->Arg(400)->Arg(1000);

static void BM_TrainEpoch(benchmark::State& state) {
  SynthSpec spec;
  spec.per_class = 500;
  spec.noise = {0.85, 2.0};
  const auto data = gen_synthetic(spec);
  refinery::RefineryConfig cfg;
  cfg.epochs = 2;
  cfg.warmup_epochs = state.range(0);
  for (auto _ : state) {
    auto res = refinery::train(data, refinery::make_classifier("linear", 4, 16, 0, 0), cfg);
    benchmark::DoNotOptimize(res.history);
  }
}
// 2 means plain candidate CE; 1 turns the refinery on for the second epoch.
BENCHMARK(BM_TrainEpoch)->Arg(2)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ParseCandidates(benchmark::State& state) {
  const auto labels = LabelSpace::trec();
  const std::string reply =
      "The question most likely asks for Human beings, though Locations is also possible.";
  for (auto _ : state) benchmark::DoNotOptimize(annotate::parse_candidates(reply, labels));
}
BENCHMARK(BM_ParseCandidates);
BENCHMARK_MAIN();
