#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "candist/core/types.hpp"

namespace candist::refinery {

/// Differentiable softmax classifier over fixed feature vectors.
///
/// Parameters live in one flat buffer so optimisers and finite-difference
/// checks can treat every model alike. Implementations are deterministic
/// and const methods are safe to call concurrently.
class Classifier {
 public:
  virtual ~Classifier() = default;

  virtual std::string kind() const = 0;
  virtual std::size_t num_classes() const = 0;
  virtual std::size_t input_dim() const = 0;
  /// Width of the hidden layer; 0 for a linear model.
  virtual std::size_t hidden() const { return 0; }

  virtual std::span<double> parameters() = 0;
  virtual std::span<const double> parameters() const = 0;

  virtual void logits(std::span<const double> x, std::span<double> out) const = 0;
  /// grad += d(loss)/d(params), given d(loss)/d(logits) at input x.
  virtual void backprop(std::span<const double> x, std::span<const double> dlogits,
                        std::span<double> grad) const = 0;
  /// 0.5 * weight * |W|^2 over the weight matrices (biases excluded);
  /// adds its gradient to `grad` when non-empty.
  virtual double l2_penalty(double weight, std::span<double> grad) const = 0;

  virtual std::unique_ptr<Classifier> clone() const = 0;

  ProbVector forward(std::span<const double> x) const;
};

/// logits = W x + b, zero-initialised.
class LinearSoftmax final : public Classifier {
 public:
  LinearSoftmax(std::size_t num_classes, std::size_t input_dim);

  std::string kind() const override { return "linear"; }
  std::size_t num_classes() const override { return classes_; }
  std::size_t input_dim() const override { return dim_; }
  std::span<double> parameters() override { return params_; }
  std::span<const double> parameters() const override { return params_; }
  void logits(std::span<const double> x, std::span<double> out) const override;
  void backprop(std::span<const double> x, std::span<const double> dlogits,
                std::span<double> grad) const override;
  double l2_penalty(double weight, std::span<double> grad) const override;
  std::unique_ptr<Classifier> clone() const override;

  /// Row-major C x d weights followed by C biases.
  double weight(std::size_t c, std::size_t j) const { return params_[c * dim_ + j]; }
  double& weight(std::size_t c, std::size_t j) { return params_[c * dim_ + j]; }
  double& bias(std::size_t c) { return params_[classes_ * dim_ + c]; }

 private:
  std::size_t classes_;
  std::size_t dim_;
  std::vector<double> params_;
};

/// ReLU hidden layer followed by a linear softmax head; He-initialised
/// from `seed`.
class OneHiddenLayer final : public Classifier {
 public:
  OneHiddenLayer(std::size_t num_classes, std::size_t input_dim, std::size_t hidden,
                 std::uint64_t seed);

  std::string kind() const override { return "mlp"; }
  std::size_t num_classes() const override { return classes_; }
  std::size_t input_dim() const override { return dim_; }
  std::size_t hidden() const override { return hidden_; }
  std::span<double> parameters() override { return params_; }
  std::span<const double> parameters() const override { return params_; }
  void logits(std::span<const double> x, std::span<double> out) const override;
  void backprop(std::span<const double> x, std::span<const double> dlogits,
                std::span<double> grad) const override;
  double l2_penalty(double weight, std::span<double> grad) const override;
  std::unique_ptr<Classifier> clone() const override;

 private:
  void hidden_activations(std::span<const double> x, std::span<double> h) const;

  std::size_t classes_;
  std::size_t dim_;
  std::size_t hidden_;
  // [W1 (hidden x d) | b1 (hidden) | W2 (C x hidden) | b2 (C)]
  std::vector<double> params_;
};

/// `kind` is "linear" or "mlp" (which needs hidden > 0).
std::unique_ptr<Classifier> make_classifier(const std::string& kind, std::size_t num_classes,
                                            std::size_t input_dim, std::size_t hidden,
                                            std::uint64_t seed);

}  // namespace candist::refinery
