#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "candist/core/types.hpp"

namespace candist::annotate {

/// SC-k keeps the k most frequent labels across sampled sets; SC-All keeps
/// every label that appeared at least once.
struct ScMode {
  enum class Kind { kTopK, kAll } kind = Kind::kAll;
  std::size_t k = 1;

  static ScMode top(std::size_t k) { return {Kind::kTopK, k}; }
  static ScMode all() { return {Kind::kAll, 0}; }
};

/// Number of sets containing each label.
std::vector<std::size_t> label_frequencies(std::span<const CandidateSet> sets,
                                           std::size_t num_classes);

/// Frequency ties resolve to the lower label index. When k exceeds the
/// number of distinct labels that appeared, all of them are returned.
CandidateSet sc_aggregate(std::span<const CandidateSet> sets, ScMode mode, std::size_t num_classes);

/// Most frequent label; ties resolve to the lower index.
Label majority_vote(std::span<const CandidateSet> sets, std::size_t num_classes);

}  // namespace candist::annotate
