#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "candist/core/label_space.hpp"
#include "candist/core/types.hpp"

namespace candist {

/// Samples plus optional per-sample candidate sets, validated on
/// construction. Immutable afterwards.
class Dataset {
 public:
  /// `candidates` is either empty or aligned with `samples`.
  Dataset(LabelSpace label_space, std::vector<Sample> samples,
          std::vector<std::optional<CandidateSet>> candidates = {});

  const LabelSpace& label_space() const noexcept { return label_space_; }
  std::size_t num_classes() const noexcept { return label_space_.size(); }
  std::size_t size() const noexcept { return samples_.size(); }
  /// Feature dimension (0 for an empty dataset).
  std::size_t dim() const noexcept { return dim_; }

  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const Sample& sample(std::size_t i) const { return samples_.at(i); }
  const std::optional<CandidateSet>& candidates(std::size_t i) const { return candidates_.at(i); }
  const std::vector<std::optional<CandidateSet>>& all_candidates() const noexcept {
    return candidates_;
  }
  std::optional<std::size_t> index_of(const std::string& id) const;

  bool has_gold() const noexcept;

  /// Copy with the candidate column replaced; ids absent from the map get no set.
  Dataset with_candidates(const std::unordered_map<std::string, CandidateSet>& by_id) const;

  friend bool operator==(const Dataset& a, const Dataset& b) {
    return a.label_space_ == b.label_space_ && a.samples_ == b.samples_ &&
           a.candidates_ == b.candidates_;
  }

 private:
  LabelSpace label_space_;
  std::vector<Sample> samples_;
  std::vector<std::optional<CandidateSet>> candidates_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t dim_ = 0;
};

/// One record per line:
/// {"id", "text"?, "features", "aug_features"?, "gold"?, "candidates"?}.
Dataset load_dataset(const std::filesystem::path& path, const LabelSpace& label_space);

/// Serialises every record on its own line; load_dataset(save(D)) == D.
std::string dataset_to_jsonl(const Dataset& data);
void save_dataset(const Dataset& data, const std::filesystem::path& path);

nlohmann::ordered_json sample_to_json(const Sample& s, const std::optional<CandidateSet>& cands);

}  // namespace candist
