#pragma once

#include <optional>
#include <span>
#include <vector>

#include "candist/core/rng.hpp"
#include "candist/core/types.hpp"
#include "candist/refinery/classifier.hpp"

namespace candist::refinery {

enum class Group { kNone, kIn, kOut };

struct BatchItem {
  std::span<const double> x;
  /// Augmented view; may be empty when the consistency terms are off.
  std::span<const double> x_aug;
  std::optional<ProbVector> target;
  Group group = Group::kNone;
};

struct MixItem {
  std::vector<double> x;
  ProbVector target;
};

struct Batch {
  std::vector<BatchItem> items;
  std::vector<MixItem> mixed;
};

struct LossBreakdown {
  double dr = 0.0;
  double cr_in = 0.0;
  double cr_out = 0.0;
  double mix = 0.0;
  double l2 = 0.0;
  double total = 0.0;
};

/// Evaluates L_dr + eta * (L_cr_in + L_cr_out + L_mix) + 0.5 * weight_decay * |W|^2
/// on one batch and, when `grad` is non-empty, writes its gradient there
/// (overwriting). Each term is a mean over the rows it covers; the
/// consistency and mixup terms are skipped entirely when eta == 0.
LossBreakdown evaluate_batch(const Classifier& model, const Batch& batch, double eta,
                             double weight_decay, std::span<double> grad);

/// Pairs every mixed row i with row partners[i] using weight omegas[i]:
/// x = w x_i + (1-w) x_j, q = w q_i + (1-w) q_j.
std::vector<MixItem> mixup_batch(std::span<const std::span<const double>> features,
                                 std::span<const ProbVector> targets,
                                 std::span<const std::size_t> partners,
                                 std::span<const double> omegas);

/// Partners from a seeded permutation, omega ~ Beta(alpha, alpha).
/// Fewer than two rows yields no mixed rows.
std::vector<MixItem> mixup_batch(std::span<const std::span<const double>> features,
                                 std::span<const ProbVector> targets, double alpha, Rng& rng);

}  // namespace candist::refinery
