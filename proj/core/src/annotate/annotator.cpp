#include "candist/annotate/annotator.hpp"

#include <atomic>
#include <sstream>
#include <thread>

#include "candist/annotate/parse.hpp"
#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist::annotate {

namespace {

bool single_answer(StrategyKind kind) {
  return kind == StrategyKind::kSingle || kind == StrategyKind::kSelectFromCandidates;
}

}  // namespace

CandidateSet aggregate_responses(const std::vector<std::string>& responses, StrategyKind strategy,
                                 ScMode mode, const LabelSpace& labels) {
  const std::size_t C = labels.size();
  std::vector<CandidateSet> sets;
  std::string first_error;
  for (const auto& r : responses) {
    try {
      if (single_answer(strategy)) {
        auto mentions = parse_mentions(r, labels);
        if (mentions.empty()) throw NoLabelFound("no category named in response");
        sets.push_back(CandidateSet::singleton(mentions.front(), C));
      } else {
        sets.push_back(parse_candidates(r, labels));
      }
    } catch (const NoLabelFound& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  if (sets.empty()) {
    throw NoLabelFound(first_error.empty() ? "no responses received" : first_error);
  }
  if (single_answer(strategy)) return CandidateSet::singleton(majority_vote(sets, C), C);
  return sc_aggregate(sets, mode, C);
}

std::vector<AnnotationRecord> annotate(const Dataset& data, ChatClient& client,
                                       const AnnotateOptions& options) {
  const auto& labels = data.label_space();
  const auto kind = options.strategy.kind;
  const ScMode mode = options.sc_mode.value_or(single_answer(kind) ? ScMode::top(1) : ScMode::all());

  // Prompts are rendered up front so input errors surface before any call.
  std::vector<std::string> prompts(data.size());
  std::vector<std::vector<std::string>> shot_ids(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data.sample(i);
    std::vector<FewShotExample> shots;
    if (options.pool != nullptr && options.few_shot > 0) {
      shots = retrieve_few_shot(s.features, *options.pool, options.few_shot);
      for (const auto& e : shots) shot_ids[i].push_back(e.id);
    }
    std::optional<CandidateSet> given;
    if (kind == StrategyKind::kSelectFromCandidates) {
      given = data.candidates(i);
      if (!given) throw InputError("selection prompt needs a candidate set for \"" + s.id + "\"");
    }
    prompts[i] = build_prompt(s, options.strategy, labels, shots, options.task, given);
  }

  std::vector<AnnotationRecord> records(data.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < data.size(); i = next++) {
      auto& rec = records[i];
      rec.sample_id = data.sample(i).id;
      rec.strategy = kind;
      rec.few_shot_ids = shot_ids[i];
      const ChatRequest request{rec.sample_id, prompts[i], options.client.temperature,
                                options.client.n_samples};
      std::string failure;
      for (std::size_t attempt = 0; attempt <= options.client.retry; ++attempt) {
        try {
          rec.raw_responses = client.complete(request);
          failure.clear();
          break;
        } catch (const ReplayMiss& e) {
          failure = e.what();
          break;
        } catch (const RuntimeFailure& e) {
          failure = e.what();
          if (attempt < options.client.retry) {
            std::this_thread::sleep_for(options.retry_backoff * (1 << std::min<std::size_t>(attempt, 6)));
          }
        }
      }
      if (!failure.empty()) {
        rec.error = failure;
        continue;
      }
      if (options.recorder != nullptr) {
        options.recorder->append(ReplayEntry{rec.sample_id, prompts[i], rec.raw_responses});
      }
      try {
        rec.parsed = aggregate_responses(rec.raw_responses, kind, mode, labels);
      } catch (const NoLabelFound& e) {
        rec.error = e.what();
      }
    }
  };

  const std::size_t threads =
      std::max<std::size_t>(1, std::min(options.client.max_concurrency, data.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  return records;
}

nlohmann::ordered_json to_json(const AnnotationRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.sample_id;
  j["strategy"] = std::string(to_string(record.strategy));
  if (record.parsed) j["candidates"] = record.parsed->labels();
  j["raw"] = record.raw_responses;
  if (!record.few_shot_ids.empty()) j["few_shot"] = record.few_shot_ids;
  if (record.error) j["error"] = *record.error;
  return j;
}

AnnotationRecord record_from_json(const nlohmann::json& j, std::size_t num_classes) {
  AnnotationRecord r;
  r.sample_id = j.at("id").get<std::string>();
  r.strategy = parse_strategy(j.at("strategy").get<std::string>());
  if (j.contains("candidates")) {
    r.parsed = CandidateSet(j["candidates"].get<std::vector<Label>>(), num_classes);
  }
  if (j.contains("raw")) r.raw_responses = j["raw"].get<std::vector<std::string>>();
  if (j.contains("few_shot")) r.few_shot_ids = j["few_shot"].get<std::vector<std::string>>();
  if (j.contains("error")) r.error = j["error"].get<std::string>();
  return r;
}

std::string records_to_jsonl(const std::vector<AnnotationRecord>& records) {
  std::ostringstream out;
  for (const auto& r : records) out << to_json(r).dump() << '\n';
  return out.str();
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path,
                                               std::size_t num_classes) {
  std::vector<AnnotationRecord> out;
  io::for_each_line(path, [&](const std::string& line, std::size_t number) {
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line), num_classes));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), number, e.what());
    } catch (const InputError& e) {
      throw ParseError(path.string(), number, e.what());
    }
  });
  return out;
}

std::unordered_map<std::string, CandidateSet> candidates_by_id(
    const std::vector<AnnotationRecord>& records) {
  std::unordered_map<std::string, CandidateSet> out;
  for (const auto& r : records) {
    if (r.parsed) out.insert_or_assign(r.sample_id, *r.parsed);
  }
  return out;
}

}  // namespace candist::annotate
