#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "candist/error.hpp"
#include "candist/theory/theory.hpp"

using namespace candist;
using namespace candist::theory;
using Eigen::MatrixXd;

namespace {

// Reads theta, phi, psi back out of I - (I + S/(Cm lambda))^{-1} built by
// plain matrix inversion: the operator has three distinct entry values on
// balanced labels (diagonal, same class, other class).
Shrinkage shrinkage_from_inverse(const TheoryParams& p) {
  const auto labels = balanced_labels(p.m, p.C);
  const MatrixXd S = build_similarity(labels, p.a, p.b);
  const auto n = static_cast<Eigen::Index>(p.m);
  const double k = static_cast<double>(p.C) * static_cast<double>(p.m) * p.lambda;
  const MatrixXd op = MatrixXd::Identity(n, n) - (MatrixXd::Identity(n, n) + S / k).inverse();
  const double m = static_cast<double>(p.m);
  const double C = static_cast<double>(p.C);
  const double diag = op(0, 0);
  const double same = op(0, 1);
  const double other = op(0, n - 1);
  Shrinkage s;
  s.theta = diag - same;
  s.phi = (same - other) * m / C + s.theta;
  s.psi = other * m + s.phi;
  return s;
}

MatrixXd one_hot_targets(const std::vector<Label>& observed, std::size_t C) {
  MatrixXd Q = MatrixXd::Zero(static_cast<Eigen::Index>(C), static_cast<Eigen::Index>(observed.size()));
  for (std::size_t i = 0; i < observed.size(); ++i) Q(static_cast<Eigen::Index>(observed[i]), static_cast<Eigen::Index>(i)) = 1.0;
  return Q;
}

}  // namespace

TEST_CASE("theta phi psi for the reference parameters") {
  const TheoryParams p;
  const auto s = theta_phi_psi(p);
  CHECK(s.theta == doctest::Approx(0.0909).epsilon(1e-3));
  CHECK(s.phi == doctest::Approx(0.93789).epsilon(1e-4));
  CHECK(s.psi == doctest::Approx(0.96169).epsilon(1e-4));
  CHECK(s.top1_threshold() == doctest::Approx(0.89267).epsilon(1e-4));
  CHECK(s.top1_threshold() / 2.0 == doctest::Approx(0.446).epsilon(1e-3));
}

TEST_CASE("shrinkage limits") {
  TheoryParams p;
  p.lambda = 1e6;
  const auto big = theta_phi_psi(p);
  CHECK(big.theta < 1e-6);
  CHECK(big.phi < 1e-6);
  CHECK(big.psi < 1e-6);
  p.lambda = 0.01;
  p.b = 0.79999;
  const auto close = theta_phi_psi(p);
  CHECK(close.phi - close.theta > 0.0);
  CHECK(std::abs(close.phi - close.theta) < 0.01);
  p.b = 0.9;
  CHECK_THROWS_AS(p.validate(), InputError);
}

TEST_CASE("block formula matches generic inversion") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 10; ++trial) {
    TheoryParams p;
    p.C = 2 + gen() % 3;
    p.m = p.C * (2 + gen() % 20);
    p.b = std::uniform_real_distribution<double>(0.05, 0.4)(gen);
    p.a = p.b + std::uniform_real_distribution<double>(0.05, 0.5)(gen);
    p.lambda = std::pow(10.0, std::uniform_real_distribution<double>(-3, 0)(gen));
    const auto want = shrinkage_from_inverse(p);
    const auto got = theta_phi_psi(p);
    CHECK(std::abs(got.theta - want.theta) < 1e-8);
    CHECK(std::abs(got.phi - want.phi) < 1e-8);
    CHECK(std::abs(got.psi - want.psi) < 1e-8);
    const auto labels = balanced_labels(p.m, p.C);
    const MatrixXd numeric = shrinkage_operator(build_similarity(labels, p.a, p.b), p.lambda, p.C);
    CHECK((numeric - analytic_shrinkage_operator(p, labels)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("eigenvalues of the block similarity") {
  for (std::size_t C : {2u, 3u, 5u}) {
    TheoryParams p;
    p.C = C;
    p.m = 10 * C;
    const auto fam = similarity_eigenvalues(p);
    CHECK(fam[0].multiplicity == 1);
    CHECK(fam[1].multiplicity == C - 1);
    CHECK(fam[2].multiplicity == p.m - C);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(build_similarity(balanced_labels(p.m, C), p.a, p.b));
    std::vector<double> numeric(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::vector<double> analytic;
    for (const auto& f : fam) analytic.insert(analytic.end(), f.multiplicity, f.value);
    std::sort(analytic.begin(), analytic.end());
    REQUIRE(analytic.size() == numeric.size());
    for (std::size_t i = 0; i < numeric.size(); ++i) CHECK(std::abs(analytic[i] - numeric[i]) < 1e-8);
  }
}

TEST_CASE("closed form agrees with the quantified prediction") {
  TheoryParams p;
  p.C = 3;
  p.m = 30;
  const auto labels = balanced_labels(p.m, p.C);
  CHECK(labels[0] == 0);
  CHECK(labels[10] == 1);
  CHECK(labels[29] == 2);
  std::vector<Label> observed = labels;
  observed[1] = 2;
  observed[12] = 0;
  observed[25] = 1;
  // Observed counts stay balanced; otherwise the 11^T term no longer cancels.
  const MatrixXd Q = one_hot_targets(observed, p.C);
  const MatrixXd P = closed_form_predictions(Q, build_similarity(labels, p.a, p.b), p.lambda, p.C);
  const auto sh = theta_phi_psi(p);
  for (std::size_t i = 0; i < p.m; ++i) {
    // class mean is (C/m) times the sum of same-class targets
    std::vector<double> mean(p.C, 0.0);
    for (std::size_t j = 0; j < p.m; ++j) {
      if (labels[j] == labels[i]) mean[observed[j]] += static_cast<double>(p.C) / static_cast<double>(p.m);
    }
    const auto want = quantified_prediction(ProbVector::one_hot(observed[i], p.C), ProbVector(mean), sh.theta, sh.phi);
    for (std::size_t c = 0; c < p.C; ++c) {
      CHECK(std::abs(P(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) - want[c]) < 1e-10);
    }
  }
  for (Eigen::Index i = 0; i < P.cols(); ++i) CHECK(std::abs(P.col(i).sum() - 1.0) < 1e-10);
}

TEST_CASE("conditions on the reference grid points") {
  const auto sh = theta_phi_psi(TheoryParams{});
  const auto r48 = NoiseMatrix::symmetric(2, 0.48);
  const auto t1 = condition_top1(r48, sh.theta, sh.phi);
  const auto t2 = condition_top2(r48);
  CHECK_FALSE(t1.pass);
  CHECK(t2.pass);
  CHECK(t2.pairs.size() == 2);
  CHECK(t2.pairs[0].lhs == doctest::Approx(0.96));
  CHECK(format_report(t1).find("violated") != std::string::npos);
  CHECK(condition_top1(NoiseMatrix::symmetric(2, 0.44), sh.theta, sh.phi).pass);
  CHECK_FALSE(condition_top1(NoiseMatrix::symmetric(2, 0.45), sh.theta, sh.phi).pass);
  CHECK(condition_top1(NoiseMatrix::symmetric(2, 0.2), 0.5, 0.4).unsatisfiable);
  CHECK(condition_top2(NoiseMatrix::symmetric(6, 0.83)).pass);
  CHECK_FALSE(condition_top2(NoiseMatrix::symmetric(6, 0.84)).pass);
  CHECK_FALSE(condition_top2(NoiseMatrix::symmetric(2, 0.5)).pass);
  MatrixXd bad(2, 2);
  bad << 0.5, 0.4, 0.5, 0.5;
  CHECK_THROWS_AS(NoiseMatrix{bad}, InputError);
}

TEST_CASE("infinite path at the separation point") {
  const TheoryParams p;
  const auto R = NoiseMatrix::symmetric(2, 0.48);
  CHECK(simulate_infinite(p, R, Mode::kTop1).accuracy < 1.0);
  CHECK(simulate_infinite(p, R, Mode::kTeacher).accuracy < 1.0);
  CHECK(simulate_infinite(p, NoiseMatrix::symmetric(2, 0.3), Mode::kTop1).accuracy == 1.0);
  CHECK(simulate_infinite(p, NoiseMatrix::symmetric(2, 0.3), Mode::kTeacher).accuracy == 1.0);
}

TEST_CASE("top-2 accuracy above C = 2") {
  TheoryParams p;
  p.C = 3;
  p.m = 90;
  MatrixXd r(3, 3);
  r << 0.6, 0.35, 0.05, 0.05, 0.6, 0.35, 0.35, 0.05, 0.6;
  const NoiseMatrix R(r);
  CHECK(condition_top2(R).pass);
  CHECK(simulate_infinite(p, R, Mode::kTop2).accuracy == 1.0);
  CHECK_FALSE(simulate_infinite(p, R, Mode::kTop2).ybar_tie);
  CHECK(simulate_infinite(p, NoiseMatrix::symmetric(3, 0.3), Mode::kTop2).ybar_tie);
}

TEST_CASE("teacher top-2 contains the true label whenever the top-2 condition holds") {
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    TheoryParams p;
    p.C = 3 + gen() % 3;
    p.m = 20 * p.C;
    MatrixXd r(static_cast<Eigen::Index>(p.C), static_cast<Eigen::Index>(p.C));
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.cols(); ++j) r(i, j) = std::uniform_real_distribution<double>(0.01, 1.0)(gen);
      r(i, i) += std::uniform_real_distribution<double>(0.0, 3.0)(gen);
      r.row(i) /= r.row(i).sum();
    }
    const NoiseMatrix R(r);
    if (!condition_top2(R).pass) continue;
    const auto sh = theta_phi_psi(p);
    for (std::size_t y = 0; y < p.C; ++y) {
      std::vector<double> mean(p.C);
      for (std::size_t k = 0; k < p.C; ++k) mean[k] = R(y, k);
      for (std::size_t o = 0; o < p.C; ++o) {
        const auto q = quantified_prediction(ProbVector::one_hot(o, p.C), ProbVector(mean), sh.theta, sh.phi);
        std::size_t above = 0;
        for (std::size_t k = 0; k < p.C; ++k) above += (k != y && q[k] > q[y]) ? 1 : 0;
        CHECK(above <= 1);
      }
    }
  }
}

TEST_CASE("top-1 threshold rises with lambda and with a - b") {
  TheoryParams p;
  double prev = -1e9;
  for (double lambda : {1e-4, 1e-3, 1e-2, 1e-1}) {
    p.lambda = lambda;
    const double t = theta_phi_psi(p).top1_threshold();
    CHECK(t > prev);
    prev = t;
  }
  p.lambda = 0.01;
  prev = -1e9;
  for (double b : {0.6, 0.4, 0.2, 0.05}) {
    p.b = b;
    const double t = theta_phi_psi(p).top1_threshold();
    CHECK(t > prev);
    prev = t;
  }
}

TEST_CASE("finite path agrees with the infinite path") {
  TheoryParams p;
  p.m = 200;
  for (double rho : {0.0, 0.2, 0.4}) {
    const auto R = NoiseMatrix::symmetric(2, rho);
    for (Mode mode : {Mode::kTeacher, Mode::kTop1}) {
      const double inf = simulate_infinite(p, R, mode).accuracy;
      const double fin = simulate_finite(p, R, mode, 7).accuracy;
      CHECK(std::abs(inf - fin) < 0.05);
    }
  }
  p.m = 2001;
  CHECK_THROWS_AS(simulate_finite(p, NoiseMatrix::symmetric(2, 0.1), Mode::kTop1, 7), InputError);
}

TEST_CASE("top-2 targets tie the true class with its runner-up when no other class has mass") {
  const TheoryParams p;
  // At C = 2 every target is (1/2, 1/2), so the student is uniform.
  for (double rho : {0.0, 0.2, 0.48}) {
    CHECK(simulate_infinite(p, NoiseMatrix::symmetric(2, rho), Mode::kTop2).accuracy == 0.0);
    CHECK(simulate_finite(p, NoiseMatrix::symmetric(2, rho), Mode::kTop2, 3).accuracy == 0.5);
  }
  TheoryParams p3 = p;
  p3.C = 3;
  p3.m = 90;
  CHECK(simulate_infinite(p3, NoiseMatrix::symmetric(3, 0.0), Mode::kTop2).accuracy == 0.0);
  CHECK(simulate_infinite(p3, NoiseMatrix::symmetric(3, 0.3), Mode::kTop2).accuracy == 1.0);
}

TEST_CASE("sampled top-2 students follow the teacher's own top-2") {
  // On noisy samples the teacher ranks the runner-up class above the
  // observed label, so sampled top-2 targets pile onto {y, ybar}.
  TheoryParams p;
  p.C = 3;
  p.m = 1800;
  MatrixXd r(3, 3);
  r << 0.6, 0.35, 0.05, 0.05, 0.6, 0.35, 0.35, 0.05, 0.6;
  const NoiseMatrix R(r);
  CHECK(simulate_infinite(p, R, Mode::kTop2).accuracy == 1.0);
  CHECK(simulate_finite(p, R, Mode::kTop2, 7).accuracy < 1.0);
}

TEST_CASE("phase sweep csv") {
  const auto rows = phase_sweep(TheoryParams{}, {0.0, 0.48});
  const auto csv = sweep_csv(rows);
  CHECK(csv.rfind("rho,teacher_acc,top1_acc,top2_acc,cond_top1,cond_top2\n", 0) == 0);
  CHECK(rows[0].teacher_acc == 1.0);
  CHECK(rows[0].cond_top1);
  CHECK_FALSE(rows[1].cond_top1);
  CHECK(rows[1].cond_top2);
}

TEST_CASE("gradient-descent oracle") {
  SUBCASE("linearised model matches the closed form") {
    std::mt19937_64 gen(21);
    for (int trial = 0; trial < 3; ++trial) {
      TheoryParams p;
      p.C = 2 + gen() % 3;
      p.m = p.C * (5 + gen() % 10);
      p.lambda = 0.05;
      const auto labels = balanced_labels(p.m, p.C);
      std::vector<Label> observed = labels;
      for (auto& o : observed) {
        if (gen() % 5 == 0) o = gen() % p.C;
      }
      const MatrixXd Q = one_hot_targets(observed, p.C);
      const MatrixXd S = build_similarity(labels, p.a, p.b);
      GdOptions opts;
      opts.tolerance = 1e-11;
      const auto gd = gd_oracle_similarity(S, Q, p.lambda, opts);
      CHECK(gd.converged);
      CHECK((gd.P - closed_form_predictions(Q, S, p.lambda, p.C)).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
  SUBCASE("softmax model stays near the linearisation under heavy regularisation") {
    TheoryParams p;
    p.C = 2;
    p.m = 20;
    const auto labels = balanced_labels(p.m, p.C);
    const MatrixXd Q = one_hot_targets(labels, p.C);
    const MatrixXd S = build_similarity(labels, p.a, p.b);
    GdOptions opts;
    opts.mode = GdMode::kSoftmax;
    const auto gd = gd_oracle_similarity(S, Q, 1.0, opts);
    CHECK(gd.converged);
    CHECK((gd.P - closed_form_predictions(Q, S, 1.0, p.C)).cwiseAbs().maxCoeff() < 0.02);
  }
  CHECK_THROWS_AS(gd_oracle(MatrixXd::Identity(3, 3), MatrixXd::Zero(2, 4), 0.1), InputError);
}
