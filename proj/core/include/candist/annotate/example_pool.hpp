#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "candist/annotate/prompt.hpp"
#include "candist/core/label_space.hpp"

namespace candist::annotate {

struct PoolEntry {
  std::string id;
  std::string text;
  CandidateSet answer;
  std::vector<double> embedding;
};

/// In-context example pool (typically 100 entries). All embeddings share
/// one dimension and are nonzero.
class ExamplePool {
 public:
  ExamplePool() = default;
  explicit ExamplePool(std::vector<PoolEntry> entries);

  /// One JSON object per line: {"id", "text", "label" | "candidates", "embedding"}.
  static ExamplePool load(const std::filesystem::path& path, const LabelSpace& labels);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::size_t dim() const noexcept { return entries_.empty() ? 0 : entries_[0].embedding.size(); }
  const PoolEntry& operator[](std::size_t i) const { return entries_.at(i); }

 private:
  std::vector<PoolEntry> entries_;
};

double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Top-k entries by cosine similarity to `query`, highest first; equal
/// similarities keep pool order.
std::vector<FewShotExample> retrieve_few_shot(std::span<const double> query,
                                              const ExamplePool& pool, std::size_t k);

}  // namespace candist::annotate
