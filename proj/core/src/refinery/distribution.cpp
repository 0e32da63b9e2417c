#include "candist/refinery/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "candist/error.hpp"

namespace candist::refinery {

namespace {

double safe_log(double p) {
  return std::log(std::max(p, std::numeric_limits<double>::min()));
}

}  // namespace

double cross_entropy(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw InputError("cross_entropy: size mismatch");
  double loss = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (q[j] > 0.0) loss -= q[j] * safe_log(p[j]);
  }
  return loss;
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  if (p.size() != q.size()) throw InputError("kl_divergence: size mismatch");
  double kl = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) kl += p[j] * (safe_log(p[j]) - safe_log(q[j]));
  }
  return kl;
}

RenormalizedTarget renormalize_target(const std::optional<ProbVector>& prev, const CandidateSet& s,
                                      std::size_t epoch, std::size_t num_classes) {
  if (s.labels().back() >= num_classes) throw InputError("candidate label out of range");
  if ((epoch > 0) != prev.has_value()) {
    throw InputError("renormalize_target: previous prediction required iff epoch > 0");
  }
  std::vector<double> q(num_classes, 0.0);
  if (epoch > 0) {
    if (prev->size() != num_classes) throw InputError("renormalize_target: size mismatch");
    double mass = 0.0;
    for (Label c : s) mass += (*prev)[c];
    if (mass > 0.0) {
      for (Label c : s) q[c] = (*prev)[c] / mass;
      return {ProbVector(std::move(q)), false};
    }
  }
  const double u = 1.0 / static_cast<double>(s.size());
  for (Label c : s) q[c] = u;
  return {ProbVector(std::move(q)), epoch > 0};
}

ProbVector sharpen(const ProbVector& q, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw InputError("sharpen: gamma must lie in (0, 1]");
  if (gamma == 1.0) return q;
  const double power = 1.0 / gamma;
  std::vector<double> out(q.size());
  // Dividing by the max first keeps the powers away from underflow.
  const double peak = q.max();
  double total = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    out[j] = q[j] > 0.0 ? std::pow(q[j] / peak, power) : 0.0;
    total += out[j];
  }
  for (double& v : out) v /= total;
  return ProbVector(std::move(out));
}

CandidateSplit partition_out_of_candidate(std::span<const ProbVector> preds,
                                          std::span<const CandidateSet> candidates) {
  if (preds.size() != candidates.size()) {
    throw InputError("partition_out_of_candidate: inputs not aligned");
  }
  CandidateSplit split;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    (candidates[i].contains(preds[i].argmax()) ? split.in : split.out).push_back(i);
  }
  return split;
}

std::vector<std::size_t> select_small_loss(std::span<const ProbVector> preds,
                                           std::span<const ProbVector> targets,
                                           std::span<const std::string> ids, double delta) {
  if (preds.size() != targets.size() || preds.size() != ids.size()) {
    throw InputError("select_small_loss: inputs not aligned");
  }
  if (!(delta > 0.0 && delta <= 1.0)) throw InputError("select_small_loss: delta must lie in (0, 1]");
  if (preds.empty()) return {};
  const std::size_t C = preds.front().size();
  std::vector<double> loss(preds.size());
  std::vector<std::vector<std::size_t>> buckets(C);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    loss[i] = cross_entropy(preds[i], targets[i]);
    buckets[preds[i].argmax()].push_back(i);
  }
  std::vector<std::size_t> chosen;
  for (auto& bucket : buckets) {
    if (bucket.empty()) continue;
    std::sort(bucket.begin(), bucket.end(), [&](std::size_t a, std::size_t b) {
      if (loss[a] != loss[b]) return loss[a] < loss[b];
      return ids[a] < ids[b];
    });
    const auto n_c = static_cast<double>(bucket.size());
    const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(delta * n_c + 1e-9)));
    chosen.insert(chosen.end(), bucket.begin(), bucket.begin() + static_cast<long>(std::min(keep, bucket.size())));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<std::size_t> select_high_confidence(std::span<const ProbVector> preds, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw InputError("select_high_confidence: tau must lie in (0, 1]");
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i].max() > tau) chosen.push_back(i);
  }
  return chosen;
}

RefineryState refine(std::vector<ProbVector> cached, std::span<const CandidateSet> candidates,
                     std::span<const std::string> ids, std::size_t epoch, double delta,
                     double tau) {
  if (epoch == 0) throw InputError("refine: selection starts after epoch 0");
  if (cached.size() != candidates.size() || cached.size() != ids.size()) {
    throw InputError("refine: inputs not aligned");
  }
  RefineryState st;
  st.epoch = epoch;
  const std::size_t C = cached.empty() ? 0 : cached.front().size();
  st.renormalized.reserve(cached.size());
  for (std::size_t i = 0; i < cached.size(); ++i) {
    auto r = renormalize_target(cached[i], candidates[i], epoch, C);
    st.fallbacks += r.fallback ? 1 : 0;
    st.renormalized.push_back(std::move(r.target));
  }
  auto split = partition_out_of_candidate(cached, candidates);
  st.in = std::move(split.in);
  st.out = std::move(split.out);

  auto gather = [](const auto& source, const std::vector<std::size_t>& rows) {
    std::vector<std::decay_t<decltype(source[0])>> v;
    v.reserve(rows.size());
    for (auto r : rows) v.push_back(source[r]);
    return v;
  };
  const auto in_preds = gather(cached, st.in);
  const auto in_targets = gather(st.renormalized, st.in);
  std::vector<std::string> in_ids;
  for (auto r : st.in) in_ids.push_back(ids[r]);
  for (auto k : select_small_loss(in_preds, in_targets, in_ids, delta)) {
    st.small_loss.push_back(st.in[k]);
  }
  const auto out_preds = gather(cached, st.out);
  for (auto k : select_high_confidence(out_preds, tau)) st.high_conf.push_back(st.out[k]);
  st.cached = std::move(cached);
  return st;
}

std::vector<std::optional<ProbVector>> assemble_targets(const RefineryState& state, double gamma) {
  std::vector<std::optional<ProbVector>> targets(state.renormalized.size());
  for (auto i : state.in) targets[i] = state.renormalized[i];
  for (auto i : state.small_loss) targets[i] = sharpen(state.renormalized[i], gamma);
  for (auto i : state.high_conf) {
    targets[i] = ProbVector::one_hot(state.cached[i].argmax(), state.cached[i].size());
  }
  return targets;
}

double dr_loss(std::span<const ProbVector> preds,
               std::span<const std::optional<ProbVector>> targets) {
  if (preds.size() != targets.size()) throw InputError("dr_loss: inputs not aligned");
  double total = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!targets[i]) continue;
    total += cross_entropy(preds[i], *targets[i]);
    ++n;
  }
  return n == 0 ? 0.0 : total / static_cast<double>(n);
}

ConsistencyLosses consistency_losses(std::span<const ProbVector> preds_aug,
                                     std::span<const ProbVector> preds,
                                     std::span<const std::optional<ProbVector>> targets,
                                     std::span<const std::size_t> in,
                                     std::span<const std::size_t> out) {
  ConsistencyLosses l;
  for (auto i : in) {
    if (!targets[i]) throw InputError("consistency_losses: D_in row without a target");
    l.in += cross_entropy(preds_aug[i], *targets[i]);
  }
  for (auto i : out) l.out += kl_divergence(preds_aug[i], preds[i]);
  if (!in.empty()) l.in /= static_cast<double>(in.size());
  if (!out.empty()) l.out /= static_cast<double>(out.size());
  return l;
}

}  // namespace candist::refinery
