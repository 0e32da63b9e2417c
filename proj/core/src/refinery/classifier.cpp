#include "candist/refinery/classifier.hpp"

#include <cmath>

#include "candist/core/rng.hpp"
#include "candist/error.hpp"

namespace candist::refinery {

ProbVector Classifier::forward(std::span<const double> x) const {
  if (x.size() != input_dim()) {
    throw InputError("feature dimension " + std::to_string(x.size()) +
                     " does not match model dimension " + std::to_string(input_dim()));
  }
  std::vector<double> z(num_classes());
  logits(x, z);
  return ProbVector::softmax(z);
}

LinearSoftmax::LinearSoftmax(std::size_t num_classes, std::size_t input_dim)
    : classes_(num_classes), dim_(input_dim), params_(num_classes * (input_dim + 1), 0.0) {
  if (num_classes < 2) throw InputError("classifier needs at least 2 classes");
}

void LinearSoftmax::logits(std::span<const double> x, std::span<double> out) const {
  const double* w = params_.data();
  const double* b = params_.data() + classes_ * dim_;
  for (std::size_t c = 0; c < classes_; ++c) {
    double z = b[c];
    for (std::size_t j = 0; j < dim_; ++j) z += w[c * dim_ + j] * x[j];
    out[c] = z;
  }
}

void LinearSoftmax::backprop(std::span<const double> x, std::span<const double> dlogits,
                             std::span<double> grad) const {
  for (std::size_t c = 0; c < classes_; ++c) {
    const double g = dlogits[c];
    if (g == 0.0) continue;
    for (std::size_t j = 0; j < dim_; ++j) grad[c * dim_ + j] += g * x[j];
    grad[classes_ * dim_ + c] += g;
  }
}

double LinearSoftmax::l2_penalty(double weight, std::span<double> grad) const {
  double sq = 0.0;
  for (std::size_t k = 0; k < classes_ * dim_; ++k) {
    sq += params_[k] * params_[k];
    if (!grad.empty()) grad[k] += weight * params_[k];
  }
  return 0.5 * weight * sq;
}

std::unique_ptr<Classifier> LinearSoftmax::clone() const {
  return std::make_unique<LinearSoftmax>(*this);
}

OneHiddenLayer::OneHiddenLayer(std::size_t num_classes, std::size_t input_dim,
                               std::size_t hidden, std::uint64_t seed)
    : classes_(num_classes),
      dim_(input_dim),
      hidden_(hidden),
      params_(hidden * (input_dim + 1) + num_classes * (hidden + 1), 0.0) {
  if (num_classes < 2) throw InputError("classifier needs at least 2 classes");
  if (hidden == 0) throw InputError("hidden layer width must be positive");
  Rng rng = Rng::stream(seed, "mlp-init");
  const double s1 = std::sqrt(2.0 / static_cast<double>(input_dim));
  const double s2 = std::sqrt(1.0 / static_cast<double>(hidden));
  for (std::size_t k = 0; k < hidden * input_dim; ++k) params_[k] = rng.normal(0.0, s1);
  const std::size_t w2 = hidden * (input_dim + 1);
  for (std::size_t k = 0; k < num_classes * hidden; ++k) params_[w2 + k] = rng.normal(0.0, s2);
}

void OneHiddenLayer::hidden_activations(std::span<const double> x, std::span<double> h) const {
  const double* w1 = params_.data();
  const double* b1 = w1 + hidden_ * dim_;
  for (std::size_t u = 0; u < hidden_; ++u) {
    double a = b1[u];
    for (std::size_t j = 0; j < dim_; ++j) a += w1[u * dim_ + j] * x[j];
    h[u] = a > 0.0 ? a : 0.0;
  }
}

void OneHiddenLayer::logits(std::span<const double> x, std::span<double> out) const {
  std::vector<double> h(hidden_);
  hidden_activations(x, h);
  const double* w2 = params_.data() + hidden_ * (dim_ + 1);
  const double* b2 = w2 + classes_ * hidden_;
  for (std::size_t c = 0; c < classes_; ++c) {
    double z = b2[c];
    for (std::size_t u = 0; u < hidden_; ++u) z += w2[c * hidden_ + u] * h[u];
    out[c] = z;
  }
}

void OneHiddenLayer::backprop(std::span<const double> x, std::span<const double> dlogits,
                              std::span<double> grad) const {
  std::vector<double> h(hidden_);
  hidden_activations(x, h);
  const std::size_t w2_off = hidden_ * (dim_ + 1);
  const std::size_t b2_off = w2_off + classes_ * hidden_;
  const double* w2 = params_.data() + w2_off;
  std::vector<double> dh(hidden_, 0.0);
  for (std::size_t c = 0; c < classes_; ++c) {
    const double g = dlogits[c];
    if (g == 0.0) continue;
    for (std::size_t u = 0; u < hidden_; ++u) {
      grad[w2_off + c * hidden_ + u] += g * h[u];
      dh[u] += g * w2[c * hidden_ + u];
    }
    grad[b2_off + c] += g;
  }
  const std::size_t b1_off = hidden_ * dim_;
  for (std::size_t u = 0; u < hidden_; ++u) {
    if (h[u] <= 0.0 || dh[u] == 0.0) continue;
    for (std::size_t j = 0; j < dim_; ++j) grad[u * dim_ + j] += dh[u] * x[j];
    grad[b1_off + u] += dh[u];
  }
}

double OneHiddenLayer::l2_penalty(double weight, std::span<double> grad) const {
  double sq = 0.0;
  auto add = [&](std::size_t begin, std::size_t count) {
    for (std::size_t k = begin; k < begin + count; ++k) {
      sq += params_[k] * params_[k];
      if (!grad.empty()) grad[k] += weight * params_[k];
    }
  };
  add(0, hidden_ * dim_);
  add(hidden_ * (dim_ + 1), classes_ * hidden_);
  return 0.5 * weight * sq;
}

std::unique_ptr<Classifier> OneHiddenLayer::clone() const {
  return std::make_unique<OneHiddenLayer>(*this);
}

std::unique_ptr<Classifier> make_classifier(const std::string& kind, std::size_t num_classes,
                                            std::size_t input_dim, std::size_t hidden,
                                            std::uint64_t seed) {
  if (kind == "linear") return std::make_unique<LinearSoftmax>(num_classes, input_dim);
  if (kind == "mlp") return std::make_unique<OneHiddenLayer>(num_classes, input_dim, hidden, seed);
  throw InputError("unknown classifier kind \"" + kind + "\" (linear|mlp)");
}

}  // namespace candist::refinery
