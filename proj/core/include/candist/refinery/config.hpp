#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

namespace candist::refinery {

struct RefineryConfig {
  std::size_t epochs = 30;
  std::size_t warmup_epochs = 5;
  std::size_t batch_size = 32;
  double learning_rate = 0.1;
  /// L2 penalty weight (lambda) on the weight matrices.
  double weight_decay = 1e-4;
  double delta = 0.5;
  double gamma = 0.85;
  double tau = 0.99;
  /// Beta(alpha, alpha) concentration for mixup.
  double mixup_alpha = 4.0;
  std::size_t eta_ramp_epochs = 10;
  /// Final value of the ramped loss weight.
  double eta = 1.0;
  /// Std multiplier for the Gaussian-jitter view when a sample has no
  /// aug_features; 0 disables jitter.
  double jitter = 0.05;
  std::string classifier = "linear";
  std::size_t hidden = 64;
  std::uint64_t seed = 0;

  /// Throws InputError on out-of-range values.
  void validate() const;

  /// Weight applied to the regularisers at `epoch`: 0 through warm-up,
  /// then a linear ramp reaching `eta` after eta_ramp_epochs epochs.
  double eta_at(std::size_t epoch) const;
};

void to_json(nlohmann::json& j, const RefineryConfig& c);
void from_json(const nlohmann::json& j, RefineryConfig& c);

}  // namespace candist::refinery
