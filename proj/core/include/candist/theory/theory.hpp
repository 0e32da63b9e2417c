#pragma once

// Executable form of the noise-tolerance analysis for a linearised,
// L2-regularised softmax classifier over fixed features with block
// similarity (1 on the diagonal, a within a class, b across classes).

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "candist/core/types.hpp"

namespace candist::theory {

struct TheoryParams {
  std::size_t C = 2;
  std::size_t m = 100;
  double a = 0.8;
  double b = 0.2;
  double lambda = 0.01;

  /// Requires C >= 2, m >= C, 1 > a > b > 0, lambda > 0.
  void validate() const;
};

struct Shrinkage {
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  /// 1 - theta / (phi - theta).
  double top1_threshold() const { return 1.0 - theta / (phi - theta); }
};

Shrinkage theta_phi_psi(const TheoryParams& p);

/// Labels 0..C-1 in contiguous blocks of m/C; any remainder is assigned
/// round-robin from class 0.
std::vector<Label> balanced_labels(std::size_t m, std::size_t C);

Eigen::MatrixXd build_similarity(const std::vector<Label>& labels, double a, double b);

struct EigenFamily {
  double value = 0.0;
  std::size_t multiplicity = 0;
};

/// The three eigenvalue families of the balanced block similarity matrix,
/// in the order (1), (C-1), (m-C).
std::array<EigenFamily, 3> similarity_eigenvalues(const TheoryParams& p);

/// I - (I + S / (C m lambda))^{-1}, computed numerically.
Eigen::MatrixXd shrinkage_operator(const Eigen::MatrixXd& S, double lambda, std::size_t C);

/// ((psi - phi) / m) 11^T + ((phi - theta) C / m) Y^T Y + theta I for
/// balanced labels.
Eigen::MatrixXd analytic_shrinkage_operator(const TheoryParams& p, const std::vector<Label>& labels);

/// Linearised-model predictions P (C x m) for targets Q (C x m):
/// P = Q - A with A (I + S / (C m lambda)) = Q - 1/C.
Eigen::MatrixXd closed_form_predictions(const Eigen::MatrixXd& Q, const Eigen::MatrixXd& S,
                                        double lambda, std::size_t C);

/// theta q + (phi - theta) class_mean + (1 - phi) / C.
ProbVector quantified_prediction(const ProbVector& q, const ProbVector& class_mean, double theta,
                                 double phi);

/// Row-stochastic C x C flip matrix.
class NoiseMatrix {
 public:
  explicit NoiseMatrix(Eigen::MatrixXd R);
  /// 1 - rho on the diagonal, rho / (C - 1) elsewhere.
  static NoiseMatrix symmetric(std::size_t C, double rho);

  std::size_t size() const noexcept { return static_cast<std::size_t>(R_.rows()); }
  double operator()(std::size_t c, std::size_t k) const { return R_(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(k)); }
  const Eigen::MatrixXd& matrix() const noexcept { return R_; }

 private:
  Eigen::MatrixXd R_;
};

struct PairCheck {
  std::size_t c = 0;
  std::size_t c_prime = 0;
  /// R_{c,c'} + sum_{i != c} R_{c,i}
  double lhs = 0.0;
  /// threshold - lhs; the pair passes iff this is > 0.
  double margin = 0.0;
  bool pass = false;
};

struct ConditionReport {
  std::string name;
  double threshold = 0.0;
  std::vector<PairCheck> pairs;
  bool pass = false;
  /// Set when phi <= theta, which leaves no admissible noise level.
  bool unsatisfiable = false;
};

ConditionReport condition_top1(const NoiseMatrix& R, double theta, double phi);
ConditionReport condition_top2(const NoiseMatrix& R);

/// Human-readable summary listing every violated pair with its margin.
std::string format_report(const ConditionReport& report);

enum class Mode { kTeacher, kTop1, kTop2 };
std::string to_string(Mode mode);

struct SimulationResult {
  double accuracy = 0.0;
  /// Some row of R has several equal largest off-diagonal entries.
  bool ybar_tie = false;
};

/// m -> infinity evaluation: each (true, observed) cell is scored with the
/// quantified prediction and weighted by R_{y, y~} / C. A cell counts only
/// when the true class strictly beats every other class.
SimulationResult simulate_infinite(const TheoryParams& p, const NoiseMatrix& R, Mode mode);

/// Sampled path: balanced labels, observed labels drawn from R, teacher by
/// closed form, students trained by closed form on the teacher's top-1 or
/// top-2 columns. Argmax ties go to the lowest index.
SimulationResult simulate_finite(const TheoryParams& p, const NoiseMatrix& R, Mode mode,
                                 std::uint64_t seed);

struct SweepRow {
  double rho = 0.0;
  double teacher_acc = 0.0;
  double top1_acc = 0.0;
  double top2_acc = 0.0;
  bool cond_top1 = false;
  bool cond_top2 = false;
};

/// Symmetric-noise sweep on the infinite-m path.
std::vector<SweepRow> phase_sweep(const TheoryParams& p, const std::vector<double>& rhos);
std::string sweep_csv(const std::vector<SweepRow>& rows);

enum class GdMode { kLinearized, kSoftmax };

struct GdResult {
  Eigen::MatrixXd P;
  std::size_t steps = 0;
  double grad_norm = 0.0;
  bool converged = false;
};

struct GdOptions {
  GdMode mode = GdMode::kLinearized;
  std::size_t max_steps = 200000;
  /// 0 picks 1 / L from a Gershgorin bound on the Hessian.
  double learning_rate = 0.0;
  double tolerance = 1e-8;
};

/// Gradient descent on W over explicit features (rows of `G`, m x d).
GdResult gd_oracle(const Eigen::MatrixXd& G, const Eigen::MatrixXd& Q, double lambda,
                   const GdOptions& opts = {});
/// Same, with features taken from a Cholesky factor of the similarity matrix.
GdResult gd_oracle_similarity(const Eigen::MatrixXd& S, const Eigen::MatrixXd& Q, double lambda,
                              const GdOptions& opts = {});

}  // namespace candist::theory
