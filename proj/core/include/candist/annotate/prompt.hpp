#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "candist/core/label_space.hpp"
#include "candist/core/types.hpp"

namespace candist::annotate {

enum class StrategyKind { kSingle, kCandidateAdd, kCandidateAll, kSelectFromCandidates };

/// "sa", "ca_add", "ca_all", "select".
std::string_view to_string(StrategyKind kind);
StrategyKind parse_strategy(std::string_view name);

/// Clause appended by the CA_add strategy.
inline constexpr std::string_view kUnsureClause =
    "If you are unsure about your answer, please include other potential choices.";

/// Task wording shared by every strategy.
struct TaskDescription {
  std::string preamble;
  /// Noun used for the sample, e.g. "question".
  std::string item = "text";
  std::string question = "Which category does the text belong to?";

  static TaskDescription trec();
};

/// A template with slots {preamble}, {few_shot}, {item}, {text},
/// {question}, {categories} and, for selection prompts, {candidates}.
struct PromptStrategy {
  StrategyKind kind = StrategyKind::kCandidateAll;
  std::string template_text;

  static PromptStrategy standard(StrategyKind kind);
};

struct FewShotExample {
  std::string id;
  std::string text;
  CandidateSet answer;
  double similarity = 0.0;
};

/// Deterministic rendering. Few-shot examples are emitted in descending
/// similarity (stable for ties). Throws InputError when the sample has no
/// text, the template names an unknown slot, or {candidates} is used
/// without `given`.
std::string build_prompt(const Sample& sample, const PromptStrategy& strategy,
                         const LabelSpace& label_space, std::span<const FewShotExample> few_shot,
                         const TaskDescription& task = {},
                         const std::optional<CandidateSet>& given = std::nullopt);

/// "name; name; ..." in label order.
std::string render_labels(const CandidateSet& set, const LabelSpace& label_space);

}  // namespace candist::annotate
