#include "candist/annotate/aggregate.hpp"

#include <algorithm>
#include <numeric>

#include "candist/error.hpp"

namespace candist::annotate {

std::vector<std::size_t> label_frequencies(std::span<const CandidateSet> sets,
                                           std::size_t num_classes) {
  std::vector<std::size_t> freq(num_classes, 0);
  for (const auto& s : sets) {
    for (Label c : s) {
      if (c >= num_classes) throw InputError("label out of range in aggregation");
      ++freq[c];
    }
  }
  return freq;
}

CandidateSet sc_aggregate(std::span<const CandidateSet> sets, ScMode mode,
                          std::size_t num_classes) {
  if (sets.empty()) throw InputError("sc_aggregate needs at least one sampled set");
  const auto freq = label_frequencies(sets, num_classes);
  std::vector<Label> appeared;
  for (Label c = 0; c < num_classes; ++c) {
    if (freq[c] > 0) appeared.push_back(c);
  }
  if (mode.kind == ScMode::Kind::kAll || mode.k >= appeared.size()) {
    return CandidateSet(std::move(appeared), num_classes);
  }
  if (mode.k == 0) throw InputError("SC-k needs k >= 1");
  std::stable_sort(appeared.begin(), appeared.end(),
                   [&](Label a, Label b) { return freq[a] > freq[b]; });
  appeared.resize(mode.k);
  return CandidateSet(std::move(appeared), num_classes);
}

Label majority_vote(std::span<const CandidateSet> sets, std::size_t num_classes) {
  if (sets.empty()) throw InputError("majority_vote needs at least one set");
  const auto freq = label_frequencies(sets, num_classes);
  Label best = 0;
  for (Label c = 1; c < num_classes; ++c) {
    if (freq[c] > freq[best]) best = c;
  }
  return best;
}

}  // namespace candist::annotate
