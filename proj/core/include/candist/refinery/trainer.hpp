#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "candist/core/dataset.hpp"
#include "candist/refinery/classifier.hpp"
#include "candist/refinery/config.hpp"
#include "candist/refinery/distribution.hpp"
#include "candist/refinery/objective.hpp"

namespace candist::refinery {

struct EpochRecord {
  std::size_t epoch = 0;
  double loss_dr = 0.0;
  double loss_cr_in = 0.0;
  double loss_cr_out = 0.0;
  double loss_mix = 0.0;
  double eta = 0.0;
  std::size_t d_in = 0;
  std::size_t d_out = 0;
  std::size_t d_sl = 0;
  std::size_t d_hc = 0;
  /// Accuracy of the end-of-epoch model on training rows with gold labels.
  std::optional<double> train_acc;
  std::size_t fallbacks = 0;
};

struct TrainHooks {
  /// Called after every gradient step with the batch losses.
  std::function<void(std::size_t epoch, std::size_t step, const LossBreakdown&)> on_step;
  /// Called once per refinery epoch, after selection.
  std::function<void(const RefineryState&)> on_state;
};

struct TrainResult {
  std::unique_ptr<Classifier> model;
  std::vector<EpochRecord> history;
  /// Dataset positions of the rows that were trained on.
  std::vector<std::size_t> rows;
};

/// Trains `model` on the candidate-bearing samples of `data`. Samples
/// without a candidate set are skipped. Plain SGD with a constant step.
/// Throws DivergenceError on a non-finite loss.
TrainResult train(const Dataset& data, std::unique_ptr<Classifier> model,
                  const RefineryConfig& config, const TrainHooks& hooks = {});

struct Predictions {
  std::vector<Label> labels;
  std::vector<ProbVector> probs;
};

Predictions predict(const Classifier& model, const Dataset& data);

std::string history_csv(const std::vector<EpochRecord>& history);

}  // namespace candist::refinery
