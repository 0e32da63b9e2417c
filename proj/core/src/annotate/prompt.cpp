#include "candist/annotate/prompt.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "candist/error.hpp"

namespace candist::annotate {

std::string_view to_string(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::kSingle: return "sa";
    case StrategyKind::kCandidateAdd: return "ca_add";
    case StrategyKind::kCandidateAll: return "ca_all";
    case StrategyKind::kSelectFromCandidates: return "select";
  }
  return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
  const auto key = fold(name);
  if (key == "sa") return StrategyKind::kSingle;
  if (key == "ca_add") return StrategyKind::kCandidateAdd;
  if (key == "ca_all") return StrategyKind::kCandidateAll;
  if (key == "select") return StrategyKind::kSelectFromCandidates;
  throw InputError("unknown strategy \"" + std::string(name) + "\" (sa|ca_add|ca_all|select)");
}

TaskDescription TaskDescription::trec() {
  TaskDescription t;
  t.preamble = "Task: label each question by the kind of answer it expects.\n\n";
  t.item = "question";
  t.question = "What does the question ask about?";
  return t;
}

PromptStrategy PromptStrategy::standard(StrategyKind kind) {
  static constexpr std::string_view kHead = "{preamble}{few_shot}Given a {item}: {text} {question} ";
  std::string body;
  switch (kind) {
    case StrategyKind::kSingle:
      body = "Please identify the {item} into one of the following types: {categories}.";
      break;
    case StrategyKind::kCandidateAdd:
      body = "Please identify the {item} into one of the following types: {categories}. " +
             std::string(kUnsureClause);
      break;
    case StrategyKind::kCandidateAll:
      body = "Please identify the {item} with all possible choices of the following types: "
             "{categories}.";
      break;
    case StrategyKind::kSelectFromCandidates:
      body = "It is known that the answer belongs to one of the following classes: {candidates}. "
             "Please select the correct answer from them.";
      break;
  }
  return PromptStrategy{kind, std::string(kHead) + body};
}

std::string render_labels(const CandidateSet& set, const LabelSpace& label_space) {
  std::string out;
  for (Label c : set) {
    if (!out.empty()) out += "; ";
    out += label_space.name(c);
  }
  return out;
}

namespace {

std::string few_shot_block(std::span<const FewShotExample> few_shot, const LabelSpace& labels,
                           const TaskDescription& task) {
  std::vector<std::size_t> order(few_shot.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return few_shot[a].similarity > few_shot[b].similarity;
  });
  std::string out;
  for (std::size_t i : order) {
    out += "Given a " + task.item + ": " + few_shot[i].text + "\nAnswer: " +
           render_labels(few_shot[i].answer, labels) + "\n\n";
  }
  return out;
}

}  // namespace

std::string build_prompt(const Sample& sample, const PromptStrategy& strategy,
                         const LabelSpace& label_space, std::span<const FewShotExample> few_shot,
                         const TaskDescription& task, const std::optional<CandidateSet>& given) {
  if (!sample.text) throw InputError("sample \"" + sample.id + "\" has no text to annotate");
  const auto& tpl = strategy.template_text;
  std::string out;
  out.reserve(tpl.size() + sample.text->size() + 256);
  std::size_t pos = 0;
  while (pos < tpl.size()) {
    const auto open = tpl.find('{', pos);
    if (open == std::string::npos) {
      out.append(tpl, pos, std::string::npos);
      break;
    }
    out.append(tpl, pos, open - pos);
    const auto close = tpl.find('}', open);
    if (close == std::string::npos) throw InputError("template slot unresolved: unterminated '{'");
    const auto slot = std::string_view(tpl).substr(open + 1, close - open - 1);
    if (slot == "preamble") {
      out += task.preamble;
    } else if (slot == "few_shot") {
      out += few_shot_block(few_shot, label_space, task);
    } else if (slot == "item") {
      out += task.item;
    } else if (slot == "text") {
      out += *sample.text;
    } else if (slot == "question") {
      out += task.question;
    } else if (slot == "categories") {
      out += render_labels(CandidateSet::full(label_space.size()), label_space);
    } else if (slot == "candidates") {
      if (!given) throw InputError("template slot unresolved: {candidates} needs a candidate set");
      out += render_labels(*given, label_space);
    } else {
      throw InputError("template slot unresolved: {" + std::string(slot) + "}");
    }
    pos = close + 1;
  }
  return out;
}

}  // namespace candist::annotate
