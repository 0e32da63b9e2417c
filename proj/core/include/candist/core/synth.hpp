#pragma once

#include <cstddef>
#include <cstdint>

#include "candist/core/dataset.hpp"

namespace candist {

/// Candidate noise: with probability `inclusion` a set contains the gold
/// label; set sizes are floor/ceil of `mean_size` mixed so the expected
/// size is exactly `mean_size`; distractors are drawn uniformly without
/// replacement from the non-gold labels.
struct NoiseSpec {
  double inclusion = 1.0;
  double mean_size = 1.0;
};

struct SynthSpec {
  std::size_t num_classes = 4;
  std::size_t per_class = 500;
  std::size_t dim = 16;
  /// Euclidean distance between any two class means.
  double sep = 3.0;
  NoiseSpec noise;
  std::uint64_t seed = 0;
};

/// Gaussian clusters (unit covariance) with gold labels and candidate sets.
/// Throws InputError on infeasible specs.
Dataset gen_synthetic(const SynthSpec& spec);

}  // namespace candist
