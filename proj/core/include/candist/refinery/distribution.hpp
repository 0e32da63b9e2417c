#pragma once

// Target-distribution pipeline of Distribution Refinery: renormalise the
// previous prediction onto the candidate set, split off out-of-candidate
// samples, pick class-wise small-loss and high-confidence samples, sharpen
// and assemble per-sample training targets.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "candist/core/types.hpp"

namespace candist::refinery {

/// l_ce(p, q) = -sum_j q_j log p_j. Entries with q_j == 0 contribute 0.
double cross_entropy(const ProbVector& p, const ProbVector& q);
/// KL(p || q) = sum_j p_j log(p_j / q_j).
double kl_divergence(const ProbVector& p, const ProbVector& q);

struct RenormalizedTarget {
  ProbVector target;
  /// True when the restricted mass was zero and the uniform fallback was used.
  bool fallback = false;
};

/// Epoch 0: uniform over s. Later epochs: `prev` restricted to s and
/// renormalised. Throws InputError if `prev` presence disagrees with `epoch`.
RenormalizedTarget renormalize_target(const std::optional<ProbVector>& prev, const CandidateSet& s,
                                      std::size_t epoch, std::size_t num_classes);

/// q^(1/gamma), renormalised. gamma in (0, 1].
ProbVector sharpen(const ProbVector& q, double gamma);

struct CandidateSplit {
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
};

/// Position i goes to `out` iff argmax(preds[i]) (lowest index on ties)
/// lies outside candidates[i].
CandidateSplit partition_out_of_candidate(std::span<const ProbVector> preds,
                                          std::span<const CandidateSet> candidates);

/// Class-wise small-loss selection over the given rows. Rows are bucketed
/// by predicted class; each non-empty bucket of size n_c keeps its
/// max(1, floor(delta * n_c)) smallest l_ce(p, q) rows, ties broken by id.
/// Returns sorted row positions.
std::vector<std::size_t> select_small_loss(std::span<const ProbVector> preds,
                                           std::span<const ProbVector> targets,
                                           std::span<const std::string> ids, double delta);

/// Rows with max_c p_c strictly greater than tau.
std::vector<std::size_t> select_high_confidence(std::span<const ProbVector> preds, double tau);

/// Per-epoch selection state for the candidate-bearing training samples.
/// All index lists are sorted positions into the training rows.
struct RefineryState {
  std::size_t epoch = 0;
  std::vector<ProbVector> cached;
  std::vector<ProbVector> renormalized;
  std::vector<std::size_t> in;
  std::vector<std::size_t> out;
  std::vector<std::size_t> small_loss;
  std::vector<std::size_t> high_conf;
  std::size_t fallbacks = 0;
};

/// Runs the renormalisation and the three selections for epoch `epoch`
/// (> 0) from the cached predictions of the previous epoch.
RefineryState refine(std::vector<ProbVector> cached, std::span<const CandidateSet> candidates,
                     std::span<const std::string> ids, std::size_t epoch, double delta,
                     double tau);

/// Targets per row: sharpened renormalised target on the small-loss set,
/// plain renormalised target on the rest of D_in, one-hot at the cached
/// argmax on D_hc, and nothing for the remaining out-of-candidate rows.
std::vector<std::optional<ProbVector>> assemble_targets(const RefineryState& state, double gamma);

/// Mean l_ce(p_i, q_i) over rows that have a target; 0 when none do.
double dr_loss(std::span<const ProbVector> preds, std::span<const std::optional<ProbVector>> targets);

struct ConsistencyLosses {
  double in = 0.0;
  double out = 0.0;
};

/// L_cr_in = mean over `in` of l_ce(p_aug, target);
/// L_cr_out = mean over `out` of KL(p_aug || p). Empty groups give 0.
ConsistencyLosses consistency_losses(std::span<const ProbVector> preds_aug,
                                     std::span<const ProbVector> preds,
                                     std::span<const std::optional<ProbVector>> targets,
                                     std::span<const std::size_t> in,
                                     std::span<const std::size_t> out);

}  // namespace candist::refinery
