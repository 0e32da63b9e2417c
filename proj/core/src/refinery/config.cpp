#include "candist/refinery/config.hpp"

#include <algorithm>

#include "candist/error.hpp"

namespace candist::refinery {

void RefineryConfig::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (epochs == 0) throw InputError("epochs must be positive");
  if (batch_size == 0) throw InputError("batch_size must be positive");
  if (!(learning_rate > 0.0)) throw InputError("learning_rate must be positive");
  if (!(weight_decay >= 0.0)) throw InputError("weight_decay must be non-negative");
  if (!in_unit(delta)) throw InputError("delta must lie in (0, 1]");
  if (!in_unit(gamma)) throw InputError("gamma must lie in (0, 1]");
  if (!in_unit(tau)) throw InputError("tau must lie in (0, 1]");
  if (!(mixup_alpha > 0.0)) throw InputError("mixup_alpha must be positive");
  if (!(eta >= 0.0)) throw InputError("eta must be non-negative");
  if (!(jitter >= 0.0)) throw InputError("jitter must be non-negative");
  if (classifier != "linear" && classifier != "mlp") {
    throw InputError("classifier must be 'linear' or 'mlp'");
  }
  if (classifier == "mlp" && hidden == 0) throw InputError("mlp needs hidden > 0");
}

double RefineryConfig::eta_at(std::size_t epoch) const {
  if (epoch < warmup_epochs) return 0.0;
  if (eta_ramp_epochs == 0) return eta;
  const double t = static_cast<double>(epoch - warmup_epochs) / static_cast<double>(eta_ramp_epochs);
  return eta * std::min(1.0, t);
}

void to_json(nlohmann::json& j, const RefineryConfig& c) {
  j = nlohmann::json{{"epochs", c.epochs},
                     {"warmup_epochs", c.warmup_epochs},
                     {"batch_size", c.batch_size},
                     {"learning_rate", c.learning_rate},
                     {"weight_decay", c.weight_decay},
                     {"delta", c.delta},
                     {"gamma", c.gamma},
                     {"tau", c.tau},
                     {"mixup_alpha", c.mixup_alpha},
                     {"eta_ramp_epochs", c.eta_ramp_epochs},
                     {"eta", c.eta},
                     {"jitter", c.jitter},
                     {"classifier", c.classifier},
                     {"hidden", c.hidden},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, RefineryConfig& c) {
  RefineryConfig d;
  c.epochs = j.value("epochs", d.epochs);
  c.warmup_epochs = j.value("warmup_epochs", d.warmup_epochs);
  c.batch_size = j.value("batch_size", d.batch_size);
  c.learning_rate = j.value("learning_rate", d.learning_rate);
  c.weight_decay = j.value("weight_decay", d.weight_decay);
  c.delta = j.value("delta", d.delta);
  c.gamma = j.value("gamma", d.gamma);
  c.tau = j.value("tau", d.tau);
  c.mixup_alpha = j.value("mixup_alpha", d.mixup_alpha);
  c.eta_ramp_epochs = j.value("eta_ramp_epochs", d.eta_ramp_epochs);
  c.eta = j.value("eta", d.eta);
  c.jitter = j.value("jitter", d.jitter);
  c.classifier = j.value("classifier", d.classifier);
  c.hidden = j.value("hidden", d.hidden);
  c.seed = j.value("seed", d.seed);
}

}  // namespace candist::refinery
