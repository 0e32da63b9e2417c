#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace candist {

using Label = std::size_t;

/// Nonempty, sorted, duplicate-free subset of the label space.
class CandidateSet {
 public:
  /// Sorts and deduplicates `labels`; throws InputError when the result is
  /// empty or an index is >= num_classes.
  CandidateSet(std::vector<Label> labels, std::size_t num_classes);
  CandidateSet(std::initializer_list<Label> labels, std::size_t num_classes)
      : CandidateSet(std::vector<Label>(labels), num_classes) {}

  static CandidateSet singleton(Label label, std::size_t num_classes) {
    return CandidateSet({label}, num_classes);
  }
  static CandidateSet full(std::size_t num_classes);

  const std::vector<Label>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }
  bool contains(Label label) const noexcept;
  auto begin() const noexcept { return labels_.begin(); }
  auto end() const noexcept { return labels_.end(); }

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;

 private:
  std::vector<Label> labels_;
};

/// Probability distribution over C classes: entries >= 0 summing to 1
/// within 1e-9.
class ProbVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  /// Validates the invariants; throws InputError on violation.
  explicit ProbVector(std::vector<double> values);

  static ProbVector uniform(std::size_t num_classes);
  static ProbVector one_hot(Label label, std::size_t num_classes);
  /// Exponentiates and normalises logits with the max-shift trick.
  static ProbVector softmax(std::span<const double> logits);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }

  /// Index of the largest entry; ties resolve to the lowest index.
  Label argmax() const noexcept;
  double max() const noexcept;

  friend bool operator==(const ProbVector&, const ProbVector&) = default;

 private:
  struct Unchecked {};
  ProbVector(Unchecked, std::vector<double> values) : values_(std::move(values)) {}
  std::vector<double> values_;
};

/// Lowest index among the maximal entries of `values`.
Label argmax(std::span<const double> values) noexcept;

struct Sample {
  std::string id;
  std::optional<std::string> text;
  std::vector<double> features;
  std::vector<std::vector<double>> aug_features;
  std::optional<Label> gold;

  friend bool operator==(const Sample&, const Sample&) = default;
};

}  // namespace candist
