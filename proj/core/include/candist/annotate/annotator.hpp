#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "candist/annotate/aggregate.hpp"
#include "candist/annotate/client.hpp"
#include "candist/annotate/example_pool.hpp"
#include "candist/annotate/prompt.hpp"
#include "candist/core/dataset.hpp"

namespace candist::annotate {

struct AnnotationRecord {
  std::string sample_id;
  StrategyKind strategy = StrategyKind::kCandidateAll;
  std::vector<std::string> raw_responses;
  /// Absent when the sample errored (no label parsed, endpoint failure).
  std::optional<CandidateSet> parsed;
  std::optional<std::string> error;
  std::vector<std::string> few_shot_ids;

  bool ok() const noexcept { return parsed.has_value(); }
};

struct AnnotateOptions {
  PromptStrategy strategy = PromptStrategy::standard(StrategyKind::kCandidateAll);
  TaskDescription task;
  LlmClientConfig client;
  /// Aggregation over the n sampled responses; defaults to SC-All for
  /// candidate strategies and SC-1 for single annotation.
  std::optional<ScMode> sc_mode;
  const ExamplePool* pool = nullptr;
  std::size_t few_shot = 0;
  std::chrono::milliseconds retry_backoff{500};
  /// Receives every successful call (replay logging).
  ReplayRecorder* recorder = nullptr;
};

/// One record per sample, in dataset order. Per-sample failures are
/// recorded on the record and never abort the run. Throws InputError when
/// a sample has no text, or when the selection strategy meets a sample
/// without a candidate set.
std::vector<AnnotationRecord> annotate(const Dataset& data, ChatClient& client,
                                       const AnnotateOptions& options);

/// Turns raw responses into the record's candidate set.
/// Single annotation keeps the first-mentioned label of each response and
/// votes across responses; candidate strategies aggregate per `mode`.
CandidateSet aggregate_responses(const std::vector<std::string>& responses, StrategyKind strategy,
                                 ScMode mode, const LabelSpace& labels);

/// {"id", "strategy", "candidates", "raw"} plus "few_shot" / "error" when set.
nlohmann::ordered_json to_json(const AnnotationRecord& record);
AnnotationRecord record_from_json(const nlohmann::json& j, std::size_t num_classes);

std::string records_to_jsonl(const std::vector<AnnotationRecord>& records);
std::vector<AnnotationRecord> load_annotations(const std::filesystem::path& path,
                                               std::size_t num_classes);

/// Successful records keyed by sample id.
std::unordered_map<std::string, CandidateSet> candidates_by_id(
    const std::vector<AnnotationRecord>& records);

}  // namespace candist::annotate
