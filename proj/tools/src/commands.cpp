#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "candist/annotate/annotator.hpp"
#include "candist/core/dataset.hpp"
#include "candist/core/io.hpp"
#include "candist/core/synth.hpp"
#include "candist/error.hpp"
#include "candist/metrics/metrics.hpp"
#include "candist/refinery/model_io.hpp"
#include "candist/refinery/trainer.hpp"
#include "candist/theory/theory.hpp"
#include "candist_cli.hpp"

#ifndef CANDIST_VERSION
#define CANDIST_VERSION "0.0.0"
#endif

namespace candist::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Globals {
  std::string config;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool verbose = false;
};

void log(const Globals& g, const std::string& msg) {
  if (g.verbose) std::cerr << "[candist] " << msg << '\n';
}

fs::path out_path(const Globals& g, const std::string& name) {
  const fs::path p(name);
  if (p.is_absolute() || p.has_parent_path()) return p;
  return fs::path(g.out_dir) / p;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

/// Manifest written beside an artifact as "<artifact>.manifest.json".
class Manifest {
 public:
  Manifest(std::string command, const Globals& g)
      : command_(std::move(command)), seed_(g.seed), start_(std::chrono::steady_clock::now()) {}

  ordered_json& config() { return config_; }
  void input(const fs::path& p) { inputs_.push_back(p.string()); }
  void output(const fs::path& p) { outputs_.push_back(p.string()); }

  void write_for(const fs::path& artifact) const {
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    ordered_json j;
    j["command"] = command_;
    j["version"] = CANDIST_VERSION;
    j["seed"] = seed_;
    j["config"] = config_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["duration_seconds"] = secs;
    io::write_atomic(fs::path(artifact.string() + ".manifest.json"), j.dump(2) + "\n");
  }

  void write_all() const {
    for (const auto& o : outputs_) write_for(o);
  }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::chrono::steady_clock::time_point start_;
  ordered_json config_ = ordered_json::object();
  std::vector<std::string> inputs_;
  std::vector<std::string> outputs_;
};

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::size_t num_classes = 4;
  std::size_t per_class = 500;
  std::size_t dim = 16;
  double sep = 3.0;
  double inclusion = 1.0;
  double mean_size = 1.0;
  std::string out = "synth.jsonl";
};

void add_synth(CLI::App& app, SynthArgs& a) {
  app.add_option("--C,--num-classes", a.num_classes, "Number of classes")->capture_default_str();
  app.add_option("--per-class", a.per_class, "Samples per class")->capture_default_str();
  app.add_option("--dim", a.dim, "Feature dimension")->capture_default_str();
  app.add_option("--sep", a.sep, "Distance between class means")->capture_default_str();
  app.add_option("--inclusion", a.inclusion, "Gold-inclusion rate of candidate sets")
      ->capture_default_str();
  app.add_option("--mean-size", a.mean_size, "Mean candidate-set size")->capture_default_str();
  app.add_option("--out", a.out, "Output dataset file")->capture_default_str();
}

int cmd_synth(const Globals& g, const SynthArgs& a) {
  SynthSpec spec;
  spec.num_classes = a.num_classes;
  spec.per_class = a.per_class;
  spec.dim = a.dim;
  spec.sep = a.sep;
  spec.noise = {a.inclusion, a.mean_size};
  spec.seed = g.seed;
  const auto data = gen_synthetic(spec);
  const auto out = out_path(g, a.out);
  ensure_parent(out);
  io::write_atomic(out, dataset_to_jsonl(data));
  Manifest m("synth", g);
  m.config() = {{"num_classes", a.num_classes}, {"per_class", a.per_class}, {"dim", a.dim},
                {"sep", a.sep},                 {"inclusion", a.inclusion}, {"mean_size", a.mean_size}};
  m.output(out);
  m.write_all();
  log(g, "wrote " + std::to_string(data.size()) + " samples to " + out.string());
  return 0;
}

// ------------------------------------------------------------- annotate

struct AnnotateArgs {
  std::string data;
  std::string labels = "trec";
  std::string strategy = "ca_all";
  std::string replay;
  std::string log_path;
  std::string endpoint = annotate::LlmClientConfig{}.endpoint;
  std::string model = annotate::LlmClientConfig{}.model;
  std::string token_env = annotate::LlmClientConfig{}.token_env;
  std::optional<double> temperature;
  std::size_t sc_samples = 1;
  std::string sc_mode = "all";
  std::size_t sc_k = 1;
  std::string pool;
  std::size_t few_shot = 0;
  std::size_t concurrency = 4;
  double timeout = 60.0;
  std::size_t retry = 3;
  std::string out = "annotations.jsonl";
};

void add_annotate(CLI::App& app, AnnotateArgs& a) {
  app.add_option("--data", a.data, "Dataset file (records need text)")->required();
  app.add_option("--labels", a.labels, "Label space: trec, numbered:<C> or a JSON file")
      ->capture_default_str();
  app.add_option("--strategy", a.strategy, "sa, ca_add, ca_all or select")->capture_default_str();
  app.add_option("--replay", a.replay, "Serve responses from this replay log");
  app.add_option("--log", a.log_path, "Append every call to this replay log");
  app.add_option("--endpoint", a.endpoint, "Chat-completion URL")->capture_default_str();
  app.add_option("--model", a.model, "Model name")->capture_default_str();
  app.add_option("--token-env", a.token_env, "Environment variable holding the API token")
      ->capture_default_str();
  app.add_option("--temperature", a.temperature,
                 "Sampling temperature (default 0.3, or 0.5 with --sc-samples > 1)");
  app.add_option("--sc-samples", a.sc_samples, "Responses sampled per sample")->capture_default_str();
  app.add_option("--sc-mode", a.sc_mode, "all or k")->capture_default_str();
  app.add_option("--sc-k", a.sc_k, "k for --sc-mode k")->capture_default_str();
  app.add_option("--pool", a.pool, "Few-shot example pool file");
  app.add_option("--few-shot", a.few_shot, "Few-shot examples per prompt")->capture_default_str();
  app.add_option("--concurrency", a.concurrency, "Concurrent requests")->capture_default_str();
  app.add_option("--timeout", a.timeout, "Request timeout in seconds")->capture_default_str();
  app.add_option("--retry", a.retry, "Retries per request")->capture_default_str();
  app.add_option("--out", a.out, "Annotation output file")->capture_default_str();
}

int cmd_annotate(const Globals& g, const AnnotateArgs& a) {
  const auto labels = LabelSpace::resolve(a.labels);
  const auto data = load_dataset(a.data, labels);
  annotate::AnnotateOptions opt;
  const auto kind = annotate::parse_strategy(a.strategy);
  opt.strategy = annotate::PromptStrategy::standard(kind);
  if (a.labels == "trec") opt.task = annotate::TaskDescription::trec();
  opt.client.endpoint = a.endpoint;
  opt.client.model = a.model;
  opt.client.token_env = a.token_env;
  if (a.sc_samples == 0) throw InputError("--sc-samples must be at least 1");
  opt.client.n_samples = a.sc_samples;
  opt.client.temperature =
      a.temperature.value_or(a.sc_samples > 1 ? annotate::LlmClientConfig::kSelfConsistencyTemperature
                                              : annotate::LlmClientConfig::kAnnotationTemperature);
  if (opt.client.temperature < 0.0) throw InputError("--temperature must be non-negative");
  opt.client.max_concurrency = std::max<std::size_t>(1, a.concurrency);
  opt.client.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout * 1000.0));
  opt.client.retry = a.retry;
  if (a.sc_mode == "all") {
    opt.sc_mode = annotate::ScMode::all();
  } else if (a.sc_mode == "k") {
    if (a.sc_k == 0) throw InputError("--sc-k must be at least 1");
    opt.sc_mode = annotate::ScMode::top(a.sc_k);
  } else {
    throw InputError("--sc-mode must be 'all' or 'k'");
  }
  if (kind == annotate::StrategyKind::kSingle || kind == annotate::StrategyKind::kSelectFromCandidates) {
    opt.sc_mode.reset();
  }
  std::optional<annotate::ExamplePool> pool;
  if (!a.pool.empty()) {
    pool = annotate::ExamplePool::load(a.pool, labels);
    opt.pool = &*pool;
    opt.few_shot = a.few_shot;
  } else if (a.few_shot > 0) {
    throw InputError("--few-shot needs --pool");
  }

  Manifest m("annotate", g);
  m.input(a.data);
  std::unique_ptr<annotate::ChatClient> client;
  if (!a.replay.empty()) {
    client = std::make_unique<annotate::ReplayClient>(fs::path(a.replay));
    m.input(a.replay);
  } else {
    client = std::make_unique<annotate::HttpChatClient>(opt.client);
  }
  std::string log_path = a.log_path;
  if (log_path.empty() && a.replay.empty()) log_path = "replay.jsonl";
  std::unique_ptr<annotate::ReplayRecorder> recorder;
  if (!log_path.empty()) {
    const auto p = out_path(g, log_path);
    ensure_parent(p);
    recorder = std::make_unique<annotate::ReplayRecorder>(p);
    opt.recorder = recorder.get();
    m.output(p);
  }

  const auto records = annotate::annotate(data, *client, opt);
  const auto out = out_path(g, a.out);
  ensure_parent(out);
  io::write_atomic(out, annotate::records_to_jsonl(records));
  m.output(out);
  m.config() = {{"labels", a.labels},
                {"strategy", a.strategy},
                {"model", a.model},
                {"endpoint", a.replay.empty() ? a.endpoint : std::string()},
                {"temperature", opt.client.temperature},
                {"sc_samples", a.sc_samples},
                {"sc_mode", a.sc_mode},
                {"sc_k", a.sc_k},
                {"few_shot", a.few_shot}};
  std::size_t failures = 0;
  for (const auto& r : records) {
    if (r.ok()) continue;
    ++failures;
    std::cerr << "error: " << r.sample_id << ": " << r.error.value_or("unknown") << '\n';
  }
  m.config()["failures"] = failures;
  recorder.reset();
  m.write_all();
  log(g, std::to_string(records.size() - failures) + "/" + std::to_string(records.size()) +
             " samples annotated");
  if (failures > 0) {
    std::cerr << failures << " of " << records.size() << " samples failed\n";
    return 2;
  }
  return 0;
}

// --------------------------------------------------------------- assess

struct AssessArgs {
  std::string data;
  std::string labels = "trec";
  std::string annotations;
  std::string name;
  std::string out = "assessment.csv";
};

void add_assess(CLI::App& app, AssessArgs& a) {
  app.add_option("--data", a.data, "Dataset file with gold labels")->required();
  app.add_option("--labels", a.labels, "Label space")->capture_default_str();
  app.add_option("--annotations", a.annotations, "Annotation file (default: inline candidates)");
  app.add_option("--name", a.name, "Dataset name for the report (default: file stem)");
  app.add_option("--out", a.out, "CSV report file")->capture_default_str();
}

int cmd_assess(const Globals& g, const AssessArgs& a) {
  const auto labels = LabelSpace::resolve(a.labels);
  auto data = load_dataset(a.data, labels);
  std::string strategy = "inline";
  if (!a.annotations.empty()) {
    const auto records = annotate::load_annotations(a.annotations, labels.size());
    if (!records.empty()) strategy = std::string(annotate::to_string(records.front().strategy));
    data = data.with_candidates(annotate::candidates_by_id(records));
  }
  std::vector<CandidateSet> sets;
  std::vector<Label> gold;
  std::size_t missing_gold = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.candidates(i)) continue;
    if (!data.sample(i).gold) {
      ++missing_gold;
      continue;
    }
    sets.push_back(*data.candidates(i));
    gold.push_back(*data.sample(i).gold);
  }
  if (missing_gold > 0) {
    throw InputError(std::to_string(missing_gold) + " annotated samples have no gold label");
  }
  const auto report = metrics::assess(sets, gold, labels.size());
  const std::string name = a.name.empty() ? fs::path(a.data).stem().string() : a.name;
  const std::string row = metrics::csv_row(name, strategy, report);
  std::cout << metrics::csv_header() << '\n' << row << '\n';
  const auto out = out_path(g, a.out);
  ensure_parent(out);
  io::write_atomic(out, metrics::csv_header() + "\n" + row + "\n");
  Manifest m("assess", g);
  m.config() = {{"labels", a.labels}, {"name", name}};
  m.input(a.data);
  if (!a.annotations.empty()) m.input(a.annotations);
  m.output(out);
  m.write_all();
  return 0;
}

// -------------------------------------------------------------- distill

struct DistillArgs {
  std::string data;
  std::string labels = "trec";
  std::string annotations;
  refinery::RefineryConfig cfg;
  std::string model_out = "model.json";
  std::string history_out = "history.csv";
  std::string predictions_out = "predictions.jsonl";
};

void add_refinery_flags(CLI::App& app, refinery::RefineryConfig& c) {
  app.add_option("--epochs", c.epochs)->capture_default_str();
  app.add_option("--warmup_epochs", c.warmup_epochs)->capture_default_str();
  app.add_option("--batch_size", c.batch_size)->capture_default_str();
  app.add_option("--learning_rate", c.learning_rate)->capture_default_str();
  app.add_option("--weight_decay", c.weight_decay, "L2 penalty lambda")->capture_default_str();
  app.add_option("--delta", c.delta, "Small-loss ratio")->capture_default_str();
  app.add_option("--gamma", c.gamma, "Sharpening temperature")->capture_default_str();
  app.add_option("--tau", c.tau, "High-confidence threshold")->capture_default_str();
  app.add_option("--mixup_alpha", c.mixup_alpha, "Beta concentration for mixup")->capture_default_str();
  app.add_option("--eta_ramp_epochs", c.eta_ramp_epochs)->capture_default_str();
  app.add_option("--eta", c.eta, "Final regulariser weight")->capture_default_str();
  app.add_option("--jitter", c.jitter, "Gaussian-jitter scale for missing augmented views")
      ->capture_default_str();
  app.add_option("--classifier", c.classifier, "linear or mlp")->capture_default_str();
  app.add_option("--hidden", c.hidden, "Hidden width for mlp")->capture_default_str();
}

void add_distill(CLI::App& app, DistillArgs& a) {
  app.add_option("--data", a.data, "Dataset file with features")->required();
  app.add_option("--labels", a.labels, "Label space")->capture_default_str();
  app.add_option("--annotations", a.annotations, "Annotation file (default: inline candidates)");
  add_refinery_flags(app, a.cfg);
  app.add_option("--model-out", a.model_out)->capture_default_str();
  app.add_option("--history-out", a.history_out)->capture_default_str();
  app.add_option("--predictions-out", a.predictions_out)->capture_default_str();
}

std::string predictions_jsonl(const Dataset& data, const refinery::Predictions& preds) {
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    ordered_json j;
    j["id"] = data.sample(i).id;
    j["label"] = preds.labels[i];
    const auto v = preds.probs[i].values();
    j["probs"] = std::vector<double>(v.begin(), v.end());
    out += j.dump() + "\n";
  }
  return out;
}

std::optional<double> accuracy(const Dataset& data, const refinery::Predictions& preds) {
  std::size_t n = 0, hits = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.sample(i).gold) continue;
    ++n;
    hits += preds.labels[i] == *data.sample(i).gold ? 1 : 0;
  }
  if (n == 0) return std::nullopt;
  return static_cast<double>(hits) / static_cast<double>(n);
}

int cmd_distill(const Globals& g, DistillArgs a) {
  const auto labels = LabelSpace::resolve(a.labels);
  auto data = load_dataset(a.data, labels);
  if (!a.annotations.empty()) {
    data = data.with_candidates(
        annotate::candidates_by_id(annotate::load_annotations(a.annotations, labels.size())));
  }
  a.cfg.seed = g.seed;
  a.cfg.validate();
  auto model = refinery::make_classifier(a.cfg.classifier, labels.size(), data.dim(), a.cfg.hidden,
                                         a.cfg.seed);
  refinery::TrainHooks hooks;
  if (g.verbose) {
    hooks.on_state = [](const refinery::RefineryState& s) {
      std::cerr << "[candist] epoch " << s.epoch << " in=" << s.in.size() << " out=" << s.out.size()
                << " sl=" << s.small_loss.size() << " hc=" << s.high_conf.size() << '\n';
    };
  }
  auto result = refinery::train(data, std::move(model), a.cfg, hooks);
  const auto preds = refinery::predict(*result.model, data);

  const auto model_out = out_path(g, a.model_out);
  const auto history_out = out_path(g, a.history_out);
  const auto preds_out = out_path(g, a.predictions_out);
  for (const auto& p : {model_out, history_out, preds_out}) ensure_parent(p);
  refinery::save_model(model_out, *result.model, labels, a.cfg);
  io::write_atomic(history_out, refinery::history_csv(result.history));
  io::write_atomic(preds_out, predictions_jsonl(data, preds));

  Manifest m("distill", g);
  m.config() = ordered_json(nlohmann::json(a.cfg));
  m.config()["labels"] = a.labels;
  m.input(a.data);
  if (!a.annotations.empty()) m.input(a.annotations);
  m.output(model_out);
  m.output(history_out);
  m.output(preds_out);
  m.write_all();
  if (!result.history.empty() && result.history.back().train_acc) {
    log(g, "final training accuracy " + io::format_double(*result.history.back().train_acc));
  }
  return 0;
}

// -------------------------------------------------------------- predict

struct PredictArgs {
  std::string data;
  std::string model;
  std::string out = "predictions.jsonl";
};

void add_predict(CLI::App& app, PredictArgs& a) {
  app.add_option("--data", a.data, "Dataset file with features")->required();
  app.add_option("--model", a.model, "Model file from distill")->required();
  app.add_option("--out", a.out)->capture_default_str();
}

int cmd_predict(const Globals& g, const PredictArgs& a) {
  const auto mf = refinery::load_model(a.model);
  const auto data = load_dataset(a.data, mf.label_space);
  const auto preds = refinery::predict(*mf.model, data);
  const auto out = out_path(g, a.out);
  ensure_parent(out);
  io::write_atomic(out, predictions_jsonl(data, preds));
  Manifest m("predict", g);
  m.input(a.data);
  m.input(a.model);
  m.output(out);
  if (const auto acc = accuracy(data, preds)) {
    m.config()["accuracy"] = *acc;
    std::cout << "accuracy," << io::format_double(*acc) << '\n';
  }
  m.write_all();
  return 0;
}

// --------------------------------------------------------------- theory

struct TheoryArgs {
  theory::TheoryParams params;
  double rho = 0.0;
  std::string noise;
  double rho_min = 0.0;
  double rho_max = 0.49;
  double rho_step = 0.01;
  std::string out = "sweep.csv";
};

void add_theory_params(CLI::App& app, theory::TheoryParams& p) {
  app.add_option("--C", p.C, "Number of classes")->capture_default_str();
  app.add_option("--m", p.m, "Number of samples")->capture_default_str();
  app.add_option("--a", p.a, "Within-class similarity")->capture_default_str();
  app.add_option("--b", p.b, "Across-class similarity")->capture_default_str();
  app.add_option("--lambda", p.lambda, "L2 regularisation")->capture_default_str();
}

theory::NoiseMatrix read_noise(const std::string& path) {
  std::vector<std::vector<double>> rows;
  try {
    rows = nlohmann::json::parse(io::read_file(path)).get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 1, e.what());
  }
  Eigen::MatrixXd R(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw InputError("noise matrix must be square");
    for (std::size_t k = 0; k < rows.size(); ++k) {
      R(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return theory::NoiseMatrix(std::move(R));
}

int cmd_theory_check(const Globals&, const TheoryArgs& a) {
  const auto sh = theory::theta_phi_psi(a.params);
  const auto R = a.noise.empty() ? theory::NoiseMatrix::symmetric(a.params.C, a.rho) : read_noise(a.noise);
  if (R.size() != a.params.C) throw InputError("noise matrix size differs from --C");
  std::cout << "theta " << io::format_double(sh.theta) << "\nphi " << io::format_double(sh.phi)
            << "\npsi " << io::format_double(sh.psi) << '\n';
  std::cout << theory::format_report(theory::condition_top1(R, sh.theta, sh.phi));
  std::cout << theory::format_report(theory::condition_top2(R));
  for (auto mode : {theory::Mode::kTeacher, theory::Mode::kTop1, theory::Mode::kTop2}) {
    const auto r = theory::simulate_infinite(a.params, R, mode);
    std::cout << theory::to_string(mode) << "_accuracy " << io::format_double(r.accuracy)
              << (r.ybar_tie ? " (tied runner-up class)" : "") << '\n';
  }
  return 0;
}

int cmd_theory_sweep(const Globals& g, const TheoryArgs& a) {
  if (!(a.rho_step > 0.0)) throw InputError("--rho-step must be positive");
  if (a.rho_max < a.rho_min) throw InputError("--rho-max must not be below --rho-min");
  std::vector<double> grid;
  const auto n = static_cast<std::size_t>(std::floor((a.rho_max - a.rho_min) / a.rho_step + 1e-9));
  for (std::size_t k = 0; k <= n; ++k) {
    // Round to the step's decimal grid so 0.07 is 0.07 and not 0.07000000000000001.
    grid.push_back(std::round((a.rho_min + static_cast<double>(k) * a.rho_step) * 1e12) / 1e12);
  }
  const auto rows = theory::phase_sweep(a.params, grid);
  const auto csv = theory::sweep_csv(rows);
  std::cout << csv;
  const auto out = out_path(g, a.out);
  ensure_parent(out);
  io::write_atomic(out, csv);
  Manifest m("theory sweep", g);
  m.config() = {{"C", a.params.C},           {"m", a.params.m},         {"a", a.params.a},
                {"b", a.params.b},           {"lambda", a.params.lambda}, {"rho_min", a.rho_min},
                {"rho_max", a.rho_max},      {"rho_step", a.rho_step}};
  m.output(out);
  m.write_all();
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Candidate-annotation distillation toolkit", "candist"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", CANDIST_VERSION);
  Globals g;
  app.set_config("--config", "", "Flat key=value configuration file");
  app.add_option("--seed", g.seed, "Random seed")->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Directory for outputs")->capture_default_str();
  app.add_flag("--verbose", g.verbose, "Log progress to stderr");
  for (auto* opt : {"--seed", "--out-dir", "--verbose"}) app.get_option(opt)->configurable();

  SynthArgs synth;
  AnnotateArgs ann;
  AssessArgs assess;
  DistillArgs distill;
  PredictArgs predict;
  TheoryArgs theory_args;

  auto* s_synth = app.add_subcommand("synth", "Generate a synthetic candidate-annotated dataset");
  add_synth(*s_synth, synth);
  auto* s_ann = app.add_subcommand("annotate", "Elicit annotations from a chat endpoint or replay log");
  add_annotate(*s_ann, ann);
  auto* s_assess = app.add_subcommand("assess", "Report 1-alpha, beta and F1 of annotations");
  add_assess(*s_assess, assess);
  auto* s_distill = app.add_subcommand("distill", "Train a classifier from candidate annotations");
  add_distill(*s_distill, distill);
  auto* s_predict = app.add_subcommand("predict", "Predict labels with a distilled model");
  add_predict(*s_predict, predict);
  auto* s_theory = app.add_subcommand("theory", "Noise-tolerance conditions and sweeps");
  s_theory->require_subcommand(1);
  auto* s_check = s_theory->add_subcommand("check", "Evaluate both conditions for one noise matrix");
  add_theory_params(*s_check, theory_args.params);
  s_check->add_option("--rho", theory_args.rho, "Symmetric noise rate")->capture_default_str();
  s_check->add_option("--noise", theory_args.noise, "JSON file holding a full C x C noise matrix");
  auto* s_sweep = s_theory->add_subcommand("sweep", "Symmetric-noise phase sweep as CSV");
  add_theory_params(*s_sweep, theory_args.params);
  s_sweep->add_option("--rho-min", theory_args.rho_min)->capture_default_str();
  s_sweep->add_option("--rho-max", theory_args.rho_max)->capture_default_str();
  s_sweep->add_option("--rho-step", theory_args.rho_step)->capture_default_str();
  s_sweep->add_option("--out", theory_args.out)->capture_default_str();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (s_synth->parsed()) return cmd_synth(g, synth);
    if (s_ann->parsed()) return cmd_annotate(g, ann);
    if (s_assess->parsed()) return cmd_assess(g, assess);
    if (s_distill->parsed()) return cmd_distill(g, distill);
    if (s_predict->parsed()) return cmd_predict(g, predict);
    if (s_check->parsed()) return cmd_theory_check(g, theory_args);
    if (s_sweep->parsed()) return cmd_theory_sweep(g, theory_args);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const RuntimeFailure& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace candist::cli
