#include "candist/refinery/trainer.hpp"

#include <cmath>
#include <sstream>

#include "candist/core/io.hpp"
#include "candist/core/rng.hpp"
#include "candist/error.hpp"

namespace candist::refinery {

namespace {

struct Rows {
  std::vector<std::size_t> pos;
  std::vector<CandidateSet> cands;
  std::vector<std::string> ids;
};

Rows candidate_rows(const Dataset& data) {
  Rows r;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.candidates(i)) continue;
    r.pos.push_back(i);
    r.cands.push_back(*data.candidates(i));
    r.ids.push_back(data.sample(i).id);
  }
  return r;
}

std::vector<double> feature_std(const Dataset& data, const std::vector<std::size_t>& rows) {
  const std::size_t d = data.dim();
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (auto i : rows) {
    for (std::size_t k = 0; k < d; ++k) mean[k] += data.sample(i).features[k];
  }
  for (double& m : mean) m /= static_cast<double>(rows.size());
  for (auto i : rows) {
    for (std::size_t k = 0; k < d; ++k) {
      const double dev = data.sample(i).features[k] - mean[k];
      var[k] += dev * dev;
    }
  }
  for (double& v : var) v = std::sqrt(v / static_cast<double>(rows.size()));
  return var;
}

// One augmented view per row for this epoch: a stored view when the
// sample has any, otherwise Gaussian jitter. Empty when neither applies.
std::vector<std::vector<double>> augmented_views(const Dataset& data, const Rows& rows,
                                                 const std::vector<double>& sd,
                                                 const RefineryConfig& cfg, std::size_t epoch) {
  auto rng = Rng::stream(cfg.seed, "augment", epoch);
  std::vector<std::vector<double>> views(rows.pos.size());
  for (std::size_t r = 0; r < rows.pos.size(); ++r) {
    const Sample& s = data.sample(rows.pos[r]);
    if (!s.aug_features.empty()) {
      views[r] = s.aug_features[rng.index(s.aug_features.size())];
    } else if (cfg.jitter > 0.0) {
      views[r] = s.features;
      for (std::size_t k = 0; k < views[r].size(); ++k) {
        views[r][k] += rng.normal(0.0, cfg.jitter * sd[k]);
      }
    }
  }
  return views;
}

std::vector<ProbVector> forward_all(const Classifier& model, const Dataset& data,
                                    const std::vector<std::size_t>& rows) {
  std::vector<ProbVector> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(model.forward(data.sample(i).features));
  return out;
}

}  // namespace

TrainResult train(const Dataset& data, std::unique_ptr<Classifier> model,
                  const RefineryConfig& cfg, const TrainHooks& hooks) {
  cfg.validate();
  if (!model) throw InputError("train: no classifier");
  if (model->input_dim() != data.dim()) throw InputError("feature dimension mismatch");
  if (model->num_classes() != data.num_classes()) throw InputError("class count mismatch");
  const Rows rows = candidate_rows(data);
  if (rows.pos.empty()) throw InputError("no sample carries a candidate set");
  const std::size_t n = rows.pos.size();
  const std::size_t C = data.num_classes();
  const auto sd = feature_std(data, rows.pos);

  std::vector<std::optional<ProbVector>> uniform_targets(n);
  for (std::size_t r = 0; r < n; ++r) {
    uniform_targets[r] = renormalize_target(std::nullopt, rows.cands[r], 0, C).target;
  }

  TrainResult result;
  result.rows = rows.pos;
  std::vector<double> grad(model->parameters().size());
  std::vector<ProbVector> cached;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.eta = cfg.eta_at(epoch);
    const bool refining = epoch >= cfg.warmup_epochs && epoch > 0;

    std::vector<std::optional<ProbVector>> targets;
    std::vector<Group> group(n, Group::kNone);
    if (refining) {
      auto state = refine(std::move(cached), rows.cands, rows.ids, epoch, cfg.delta, cfg.tau);
      targets = assemble_targets(state, cfg.gamma);
      for (auto r : state.in) group[r] = Group::kIn;
      for (auto r : state.out) group[r] = Group::kOut;
      rec.d_in = state.in.size();
      rec.d_out = state.out.size();
      rec.d_sl = state.small_loss.size();
      rec.d_hc = state.high_conf.size();
      rec.fallbacks = state.fallbacks;
      if (hooks.on_state) hooks.on_state(state);
    } else {
      targets = uniform_targets;
      rec.d_in = n;
    }

    std::vector<std::vector<double>> views;
    if (rec.eta != 0.0) views = augmented_views(data, rows, sd, cfg, epoch);

    const auto order = epoch_order(cfg.seed, epoch, n);
    std::size_t steps = 0;
    for (std::size_t start = 0; start < n; start += cfg.batch_size, ++steps) {
      const std::size_t stop = std::min(n, start + cfg.batch_size);
      Batch batch;
      std::vector<std::span<const double>> mix_x;
      std::vector<ProbVector> mix_q;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t r = order[k];
        BatchItem item;
        item.x = data.sample(rows.pos[r]).features;
        item.target = targets[r];
        if (rec.eta != 0.0 && !views[r].empty()) {
          item.x_aug = views[r];
          item.group = group[r];
        }
        if (item.target && rec.eta != 0.0) {
          mix_x.push_back(item.x);
          mix_q.push_back(*item.target);
        }
        batch.items.push_back(std::move(item));
      }
      if (rec.eta != 0.0) {
        auto rng = Rng::stream(cfg.seed, "mixup", epoch * 1000003 + steps);
        batch.mixed = mixup_batch(mix_x, mix_q, cfg.mixup_alpha, rng);
      }
      const auto loss = evaluate_batch(*model, batch, rec.eta, cfg.weight_decay, grad);
      if (!std::isfinite(loss.total)) throw DivergenceError(static_cast<int>(epoch));
      auto params = model->parameters();
      for (std::size_t p = 0; p < params.size(); ++p) params[p] -= cfg.learning_rate * grad[p];
      rec.loss_dr += loss.dr;
      rec.loss_cr_in += loss.cr_in;
      rec.loss_cr_out += loss.cr_out;
      rec.loss_mix += loss.mix;
      if (hooks.on_step) hooks.on_step(epoch, steps, loss);
    }
    const double s = steps == 0 ? 0.0 : 1.0 / static_cast<double>(steps);
    rec.loss_dr *= s;
    rec.loss_cr_in *= s;
    rec.loss_cr_out *= s;
    rec.loss_mix *= s;

    // End-of-epoch predictions double as the cache for the next epoch.
    cached = forward_all(*model, data, rows.pos);
    std::size_t gold = 0, hits = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto& g = data.sample(rows.pos[r]).gold;
      if (!g) continue;
      ++gold;
      hits += cached[r].argmax() == *g ? 1 : 0;
    }
    if (gold > 0) rec.train_acc = static_cast<double>(hits) / static_cast<double>(gold);
    result.history.push_back(rec);
  }
  result.model = std::move(model);
  return result;
}

Predictions predict(const Classifier& model, const Dataset& data) {
  if (model.input_dim() != data.dim()) throw InputError("feature dimension mismatch");
  Predictions out;
  out.labels.reserve(data.size());
  out.probs.reserve(data.size());
  for (const auto& s : data.samples()) {
    out.probs.push_back(model.forward(s.features));
    out.labels.push_back(out.probs.back().argmax());
  }
  return out;
}

std::string history_csv(const std::vector<EpochRecord>& history) {
  std::ostringstream os;
  os << "epoch,loss_dr,loss_cr_in,loss_cr_out,loss_mix,eta,d_in,d_out,d_sl,d_hc,train_acc,fallbacks\n";
  for (const auto& r : history) {
    os << r.epoch << ',' << io::format_double(r.loss_dr) << ',' << io::format_double(r.loss_cr_in)
       << ',' << io::format_double(r.loss_cr_out) << ',' << io::format_double(r.loss_mix) << ','
       << io::format_double(r.eta) << ',' << r.d_in << ',' << r.d_out << ',' << r.d_sl << ','
       << r.d_hc << ',' << (r.train_acc ? io::format_double(*r.train_acc) : std::string()) << ','
       << r.fallbacks << '\n';
  }
  return os.str();
}

}  // namespace candist::refinery
