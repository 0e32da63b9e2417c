#include "candist/refinery/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "candist/error.hpp"

namespace candist::refinery {

namespace {

struct Forward {
  std::vector<double> logp;
  std::vector<double> p;
};

Forward log_softmax(const Classifier& model, std::span<const double> x) {
  const std::size_t C = model.num_classes();
  Forward f{std::vector<double>(C), std::vector<double>(C)};
  model.logits(x, f.logp);
  const double peak = *std::max_element(f.logp.begin(), f.logp.end());
  double z = 0.0;
  for (double v : f.logp) z += std::exp(v - peak);
  const double lse = peak + std::log(z);
  for (std::size_t k = 0; k < C; ++k) {
    f.logp[k] -= lse;
    f.p[k] = std::exp(f.logp[k]);
  }
  return f;
}

// Adds scale * CE(softmax(logits(x)), q) and its gradient.
double soft_ce(const Classifier& model, std::span<const double> x, const ProbVector& q,
               double scale, std::span<double> grad, std::vector<double>& dlog) {
  const auto f = log_softmax(model, x);
  double loss = 0.0;
  for (std::size_t k = 0; k < f.p.size(); ++k) {
    if (q[k] > 0.0) loss -= q[k] * f.logp[k];
    dlog[k] = scale * (f.p[k] - q[k]);
  }
  if (!grad.empty()) model.backprop(x, dlog, grad);
  return loss;
}

}  // namespace

LossBreakdown evaluate_batch(const Classifier& model, const Batch& batch, double eta,
                             double weight_decay, std::span<double> grad) {
  const std::size_t C = model.num_classes();
  if (!grad.empty()) {
    if (grad.size() != model.parameters().size()) {
      throw InputError("evaluate_batch: gradient buffer has the wrong size");
    }
    std::fill(grad.begin(), grad.end(), 0.0);
  }
  std::size_t n_target = 0, n_in = 0, n_out = 0;
  for (const auto& it : batch.items) {
    n_target += it.target ? 1 : 0;
    n_in += it.group == Group::kIn ? 1 : 0;
    n_out += it.group == Group::kOut ? 1 : 0;
  }
  const bool reg = eta != 0.0;
  std::vector<double> dlog(C);
  LossBreakdown l;

  if (n_target > 0) {
    const double s = 1.0 / static_cast<double>(n_target);
    for (const auto& it : batch.items) {
      if (it.target) l.dr += soft_ce(model, it.x, *it.target, s, grad, dlog);
    }
    l.dr *= s;
  }

  if (reg && n_in > 0) {
    const double s = eta / static_cast<double>(n_in);
    for (const auto& it : batch.items) {
      if (it.group != Group::kIn) continue;
      if (!it.target) throw InputError("evaluate_batch: D_in row without a target");
      l.cr_in += soft_ce(model, it.x_aug, *it.target, s, grad, dlog);
    }
    l.cr_in /= static_cast<double>(n_in);
  }

  if (reg && n_out > 0) {
    const double s = eta / static_cast<double>(n_out);
    for (const auto& it : batch.items) {
      if (it.group != Group::kOut) continue;
      const auto clean = log_softmax(model, it.x);
      const auto aug = log_softmax(model, it.x_aug);
      double kl = 0.0;
      for (std::size_t k = 0; k < C; ++k) kl += aug.p[k] * (aug.logp[k] - clean.logp[k]);
      l.cr_out += kl;
      if (grad.empty()) continue;
      for (std::size_t k = 0; k < C; ++k) {
        dlog[k] = s * aug.p[k] * (aug.logp[k] - clean.logp[k] - kl);
      }
      model.backprop(it.x_aug, dlog, grad);
      for (std::size_t k = 0; k < C; ++k) dlog[k] = s * (clean.p[k] - aug.p[k]);
      model.backprop(it.x, dlog, grad);
    }
    l.cr_out /= static_cast<double>(n_out);
  }

  if (reg && !batch.mixed.empty()) {
    const double n = static_cast<double>(batch.mixed.size());
    for (const auto& mi : batch.mixed) l.mix += soft_ce(model, mi.x, mi.target, eta / n, grad, dlog);
    l.mix /= n;
  }

  l.l2 = model.l2_penalty(weight_decay, grad);
  l.total = l.dr + eta * (l.cr_in + l.cr_out + l.mix) + l.l2;
  return l;
}

std::vector<MixItem> mixup_batch(std::span<const std::span<const double>> features,
                                 std::span<const ProbVector> targets,
                                 std::span<const std::size_t> partners,
                                 std::span<const double> omegas) {
  if (features.size() != targets.size() || partners.size() != features.size() ||
      omegas.size() != features.size()) {
    throw InputError("mixup_batch: inputs not aligned");
  }
  std::vector<MixItem> out;
  out.reserve(features.size());
  for (std::size_t i = 0; i < features.size(); ++i) {
    const std::size_t j = partners[i];
    const double w = omegas[i];
    if (j >= features.size()) throw InputError("mixup_batch: partner out of range");
    if (features[i].size() != features[j].size()) throw InputError("mixup_batch: dimension mismatch");
    std::vector<double> x(features[i].size());
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = w * features[i][k] + (1.0 - w) * features[j][k];
    std::vector<double> q(targets[i].size());
    for (std::size_t k = 0; k < q.size(); ++k) q[k] = w * targets[i][k] + (1.0 - w) * targets[j][k];
    out.push_back({std::move(x), ProbVector(std::move(q))});
  }
  return out;
}

std::vector<MixItem> mixup_batch(std::span<const std::span<const double>> features,
                                 std::span<const ProbVector> targets, double alpha, Rng& rng) {
  if (!(alpha > 0.0)) throw InputError("mixup_batch: concentration must be positive");
  if (features.size() < 2) return {};
  const auto partners = rng.permutation(features.size());
  std::vector<double> omegas(features.size());
  for (double& w : omegas) w = rng.beta(alpha, alpha);
  return mixup_batch(features, targets, partners, omegas);
}

}  // namespace candist::refinery
