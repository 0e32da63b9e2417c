#include "candist/core/synth.hpp"

#include <cmath>
#include <cstdio>

#include "candist/core/rng.hpp"
#include "candist/error.hpp"

namespace candist {

namespace {

void validate(const SynthSpec& spec) {
  const auto C = static_cast<double>(spec.num_classes);
  if (spec.num_classes < 2) throw InputError("synthetic data needs C >= 2");
  if (spec.per_class < 1) throw InputError("synthetic data needs per_class >= 1");
  if (spec.dim < 1) throw InputError("synthetic data needs d >= 1");
  if (!(spec.sep > 0.0)) throw InputError("synthetic data needs sep > 0");
  const auto& n = spec.noise;
  if (!(n.inclusion >= 0.0 && n.inclusion <= 1.0)) {
    throw InputError("infeasible noise spec: inclusion rate must lie in [0, 1]");
  }
  if (!(n.mean_size >= 1.0 && n.mean_size <= C)) {
    throw InputError("infeasible noise spec: mean set size must lie in [1, C]");
  }
  if (n.inclusion < 1.0 && std::ceil(n.mean_size) > C - 1.0) {
    throw InputError("infeasible noise spec: sets that miss the gold label hold at most C-1 labels");
  }
}

std::vector<std::vector<double>> class_means(const SynthSpec& spec, Rng& rng) {
  // Orthogonal axes scaled by sep/sqrt(2) give pairwise distance exactly
  // sep; with more classes than dimensions fall back to random directions.
  const double scale = spec.sep / std::sqrt(2.0);
  std::vector<std::vector<double>> means(spec.num_classes, std::vector<double>(spec.dim, 0.0));
  if (spec.num_classes <= spec.dim) {
    for (std::size_t c = 0; c < spec.num_classes; ++c) means[c][c] = scale;
    return means;
  }
  for (auto& m : means) {
    double norm = 0.0;
    for (double& v : m) {
      v = rng.normal();
      norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : m) v *= scale / norm;
  }
  return means;
}

}  // namespace

Dataset gen_synthetic(const SynthSpec& spec) {
  validate(spec);
  Rng geometry = Rng::stream(spec.seed, "synth-geometry");
  Rng features = Rng::stream(spec.seed, "synth-features");
  Rng noise = Rng::stream(spec.seed, "synth-candidates");
  Rng order = Rng::stream(spec.seed, "synth-order");

  const auto means = class_means(spec, geometry);
  const std::size_t C = spec.num_classes;
  const std::size_t n = C * spec.per_class;
  const double lo = std::floor(spec.noise.mean_size);
  const double frac = spec.noise.mean_size - lo;

  std::vector<Sample> generated;
  std::vector<std::optional<CandidateSet>> cands;
  generated.reserve(n);
  cands.reserve(n);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t k = 0; k < spec.per_class; ++k) {
      Sample s;
      s.gold = c;
      s.features.resize(spec.dim);
      for (std::size_t j = 0; j < spec.dim; ++j) s.features[j] = means[c][j] + features.normal();

      auto size = static_cast<std::size_t>(lo) + (noise.bernoulli(frac) ? 1 : 0);
      const bool include = noise.bernoulli(spec.noise.inclusion);
      std::vector<Label> others;
      for (Label o = 0; o < C; ++o) {
        if (o != c) others.push_back(o);
      }
      // Partial Fisher-Yates: the first `take` entries become distractors.
      const std::size_t take = include ? size - 1 : size;
      for (std::size_t i = 0; i < take; ++i) {
        std::swap(others[i], others[i + noise.index(others.size() - i)]);
      }
      std::vector<Label> labels(others.begin(), others.begin() + static_cast<long>(take));
      if (include) labels.push_back(c);
      cands.emplace_back(CandidateSet(std::move(labels), C));
      generated.push_back(std::move(s));
    }
  }

  const auto perm = order.permutation(n);
  std::vector<Sample> samples(n);
  std::vector<std::optional<CandidateSet>> shuffled(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples[i] = std::move(generated[perm[i]]);
    shuffled[i] = std::move(cands[perm[i]]);
    char id[32];
    std::snprintf(id, sizeof id, "syn-%06zu", i);
    samples[i].id = id;
  }
  return Dataset(LabelSpace::numbered(C), std::move(samples), std::move(shuffled));
}

}  // namespace candist
