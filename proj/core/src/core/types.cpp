#include "candist/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "candist/error.hpp"

namespace candist {

CandidateSet::CandidateSet(std::vector<Label> labels, std::size_t num_classes)
    : labels_(std::move(labels)) {
  if (labels_.empty()) throw InputError("candidate set is empty");
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  if (labels_.back() >= num_classes) {
    throw InputError("label out of range: " + std::to_string(labels_.back()) +
                     " >= " + std::to_string(num_classes));
  }
}

CandidateSet CandidateSet::full(std::size_t num_classes) {
  std::vector<Label> all(num_classes);
  std::iota(all.begin(), all.end(), Label{0});
  return CandidateSet(std::move(all), num_classes);
}

bool CandidateSet::contains(Label label) const noexcept {
  return std::binary_search(labels_.begin(), labels_.end(), label);
}

ProbVector::ProbVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw InputError("probability vector is empty");
  double sum = 0.0;
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InputError("probability entry negative or non-finite");
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw InputError("probability entries sum to " + std::to_string(sum));
  }
}

ProbVector ProbVector::uniform(std::size_t num_classes) {
  return ProbVector(Unchecked{}, std::vector<double>(num_classes, 1.0 / num_classes));
}

ProbVector ProbVector::one_hot(Label label, std::size_t num_classes) {
  std::vector<double> v(num_classes, 0.0);
  v.at(label) = 1.0;
  return ProbVector(Unchecked{}, std::move(v));
}

ProbVector ProbVector::softmax(std::span<const double> logits) {
  const double shift = *std::max_element(logits.begin(), logits.end());
  std::vector<double> v(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    v[i] = std::exp(logits[i] - shift);
    total += v[i];
  }
  for (double& x : v) x /= total;
  return ProbVector(Unchecked{}, std::move(v));
}

Label ProbVector::argmax() const noexcept { return candist::argmax(values_); }

double ProbVector::max() const noexcept {
  return *std::max_element(values_.begin(), values_.end());
}

Label argmax(std::span<const double> values) noexcept {
  Label best = 0;
  for (Label i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

}  // namespace candist
