#include "candist/theory/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "candist/core/io.hpp"
#include "candist/core/rng.hpp"
#include "candist/error.hpp"

namespace candist::theory {

namespace {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kTieTolerance = 1e-12;

Index ix(std::size_t i) { return static_cast<Index>(i); }

// True class strictly above every other entry.
bool strictly_correct(const VectorXd& p, std::size_t y) {
  for (Index k = 0; k < p.size(); ++k) {
    if (k != ix(y) && !(p(ix(y)) > p(k) + kTieTolerance)) return false;
  }
  return true;
}

std::size_t argmax_col(const VectorXd& v) {
  return argmax(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())));
}

// Two largest entries, ties to the lower index.
std::array<std::size_t, 2> top2(const VectorXd& v) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) { return v(ix(i)) > v(ix(j)); });
  return {idx[0], idx[1]};
}

// Most likely wrong label for true class c; lowest index on ties.
std::size_t ybar(const NoiseMatrix& R, std::size_t c) {
  std::size_t best = c == 0 ? 1 : 0;
  for (std::size_t k = 0; k < R.size(); ++k) {
    if (k != c && R(c, k) > R(c, best)) best = k;
  }
  return best;
}

bool has_ybar_tie(const NoiseMatrix& R) {
  const std::size_t C = R.size();
  for (std::size_t c = 0; c < C; ++c) {
    double best = -1.0;
    std::size_t count = 0;
    for (std::size_t k = 0; k < C; ++k) {
      if (k == c) continue;
      if (R(c, k) > best) {
        best = R(c, k);
        count = 1;
      } else if (R(c, k) == best) {
        ++count;
      }
    }
    if (count > 1) return true;
  }
  return false;
}

VectorXd quantified(const VectorXd& q, const VectorXd& mean, double theta, double phi) {
  const auto C = static_cast<double>(q.size());
  return (theta * q + (phi - theta) * mean).array() + (1.0 - phi) / C;
}

double gershgorin(const MatrixXd& S) { return S.cwiseAbs().rowwise().sum().maxCoeff(); }

}  // namespace

void TheoryParams::validate() const {
  if (C < 2) throw InputError("theory: C must be at least 2");
  if (m < C) throw InputError("theory: m must be at least C");
  if (!(a < 1.0 && a > b && b > 0.0)) throw InputError("theory: need 1 > a > b > 0");
  if (!(lambda > 0.0)) throw InputError("theory: lambda must be positive");
}

Shrinkage theta_phi_psi(const TheoryParams& p) {
  p.validate();
  const double C = static_cast<double>(p.C);
  const double m = static_cast<double>(p.m);
  const double r = C * m * p.lambda;
  const double base = 1.0 - p.a;
  const double cls = (m / C) * (p.a - p.b);
  return {1.0 - r / (r + base), 1.0 - r / (r + cls + base), 1.0 - r / (r + m * p.b + cls + base)};
}

std::vector<Label> balanced_labels(std::size_t m, std::size_t C) {
  if (C == 0) throw InputError("balanced_labels: C must be positive");
  std::vector<Label> y(m);
  const std::size_t block = m / C;
  for (std::size_t i = 0; i < m; ++i) y[i] = block > 0 && i < block * C ? i / block : (i - block * C) % C;
  return y;
}

MatrixXd build_similarity(const std::vector<Label>& labels, double a, double b) {
  const std::size_t m = labels.size();
  MatrixXd S(ix(m), ix(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      S(ix(i), ix(j)) = i == j ? 1.0 : (labels[i] == labels[j] ? a : b);
    }
  }
  return S;
}

std::array<EigenFamily, 3> similarity_eigenvalues(const TheoryParams& p) {
  p.validate();
  const double C = static_cast<double>(p.C);
  const double m = static_cast<double>(p.m);
  const double cls = (m / C) * (p.a - p.b) + 1.0 - p.a;
  return {EigenFamily{m * p.b + cls, 1}, EigenFamily{cls, p.C - 1}, EigenFamily{1.0 - p.a, p.m - p.C}};
}

MatrixXd shrinkage_operator(const MatrixXd& S, double lambda, std::size_t C) {
  if (S.rows() != S.cols()) throw InputError("similarity matrix must be square");
  const auto m = S.rows();
  const double r = static_cast<double>(C) * static_cast<double>(m) * lambda;
  const MatrixXd M = MatrixXd::Identity(m, m) + S / r;
  return MatrixXd::Identity(m, m) - M.ldlt().solve(MatrixXd::Identity(m, m));
}

MatrixXd analytic_shrinkage_operator(const TheoryParams& p, const std::vector<Label>& labels) {
  const auto sh = theta_phi_psi(p);
  if (labels.size() != p.m) throw InputError("label count differs from m");
  const double m = static_cast<double>(p.m);
  const double C = static_cast<double>(p.C);
  MatrixXd out(ix(p.m), ix(p.m));
  for (std::size_t i = 0; i < p.m; ++i) {
    for (std::size_t j = 0; j < p.m; ++j) {
      double v = (sh.psi - sh.phi) / m;
      if (labels[i] == labels[j]) v += (sh.phi - sh.theta) * C / m;
      if (i == j) v += sh.theta;
      out(ix(i), ix(j)) = v;
    }
  }
  return out;
}

MatrixXd closed_form_predictions(const MatrixXd& Q, const MatrixXd& S, double lambda,
                                 std::size_t C) {
  if (S.rows() != S.cols() || Q.cols() != S.rows()) {
    throw InputError("closed_form_predictions: dimension mismatch");
  }
  if (Q.rows() != ix(C)) throw InputError("closed_form_predictions: Q must have C rows");
  if (!(lambda > 0.0)) throw InputError("closed_form_predictions: lambda must be positive");
  const auto m = S.rows();
  const double r = static_cast<double>(C) * static_cast<double>(m) * lambda;
  const MatrixXd M = MatrixXd::Identity(m, m) + S / r;
  const MatrixXd centred = Q.array() - 1.0 / static_cast<double>(C);
  // A M = centred with M symmetric, so M A^T = centred^T.
  const MatrixXd A = M.ldlt().solve(centred.transpose()).transpose();
  return Q - A;
}

ProbVector quantified_prediction(const ProbVector& q, const ProbVector& class_mean, double theta,
                                 double phi) {
  if (q.size() != class_mean.size()) throw InputError("quantified_prediction: size mismatch");
  const double C = static_cast<double>(q.size());
  std::vector<double> out(q.size());
  for (std::size_t k = 0; k < q.size(); ++k) {
    out[k] = theta * q[k] + (phi - theta) * class_mean[k] + (1.0 - phi) / C;
  }
  return ProbVector(std::move(out));
}

NoiseMatrix::NoiseMatrix(MatrixXd R) : R_(std::move(R)) {
  if (R_.rows() != R_.cols() || R_.rows() < 2) throw InputError("noise matrix must be square with C >= 2");
  for (Index c = 0; c < R_.rows(); ++c) {
    if ((R_.row(c).array() < 0.0).any()) throw InputError("noise matrix has a negative entry");
    if (std::abs(R_.row(c).sum() - 1.0) > 1e-9) throw InputError("noise matrix row does not sum to 1");
  }
}

NoiseMatrix NoiseMatrix::symmetric(std::size_t C, double rho) {
  if (C < 2) throw InputError("noise matrix needs C >= 2");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InputError("rho must lie in [0, 1]");
  MatrixXd R = MatrixXd::Constant(ix(C), ix(C), rho / static_cast<double>(C - 1));
  R.diagonal().setConstant(1.0 - rho);
  return NoiseMatrix(std::move(R));
}

namespace {

ConditionReport check_pairs(const NoiseMatrix& R, double threshold, std::string name) {
  ConditionReport rep;
  rep.name = std::move(name);
  rep.threshold = threshold;
  rep.pass = true;
  const std::size_t C = R.size();
  for (std::size_t c = 0; c < C; ++c) {
    double off = 0.0;
    for (std::size_t i = 0; i < C; ++i) off += i == c ? 0.0 : R(c, i);
    for (std::size_t k = 0; k < C; ++k) {
      if (k == c) continue;
      PairCheck pc;
      pc.c = c;
      pc.c_prime = k;
      pc.lhs = R(c, k) + off;
      pc.margin = threshold - pc.lhs;
      pc.pass = pc.lhs < threshold;
      rep.pass = rep.pass && pc.pass;
      rep.pairs.push_back(pc);
    }
  }
  return rep;
}

}  // namespace

ConditionReport condition_top1(const NoiseMatrix& R, double theta, double phi) {
  if (!(phi > theta)) {
    ConditionReport rep;
    rep.name = "top1";
    rep.unsatisfiable = true;
    rep.threshold = -std::numeric_limits<double>::infinity();
    return rep;
  }
  return check_pairs(R, 1.0 - theta / (phi - theta), "top1");
}

ConditionReport condition_top2(const NoiseMatrix& R) { return check_pairs(R, 1.0, "top2"); }

std::string format_report(const ConditionReport& r) {
  std::ostringstream os;
  if (r.unsatisfiable) {
    os << r.name << ": UNSATISFIABLE (phi <= theta)\n";
    return os.str();
  }
  os << r.name << ": " << (r.pass ? "PASS" : "FAIL") << " (threshold " << io::format_double(r.threshold)
     << ")\n";
  for (const auto& pc : r.pairs) {
    if (pc.pass) continue;
    os << "  violated c=" << pc.c << " c'=" << pc.c_prime << " lhs=" << io::format_double(pc.lhs)
       << " margin=" << io::format_double(pc.margin) << '\n';
  }
  return os.str();
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kTeacher: return "teacher";
    case Mode::kTop1: return "top1";
    case Mode::kTop2: return "top2";
  }
  return "?";
}

SimulationResult simulate_infinite(const TheoryParams& p, const NoiseMatrix& R, Mode mode) {
  const auto sh = theta_phi_psi(p);
  if (R.size() != p.C) throw InputError("noise matrix size differs from C");
  const std::size_t C = p.C;
  const MatrixXd& Rm = R.matrix();
  SimulationResult res;
  res.ybar_tie = has_ybar_tie(R);

  // Teacher predictions per (true, observed) cell.
  std::vector<std::vector<VectorXd>> teacher(C, std::vector<VectorXd>(C));
  for (std::size_t y = 0; y < C; ++y) {
    const VectorXd mean = Rm.row(ix(y)).transpose();
    for (std::size_t o = 0; o < C; ++o) {
      teacher[y][o] = quantified(VectorXd::Unit(ix(C), ix(o)), mean, sh.theta, sh.phi);
    }
  }

  double acc = 0.0;
  for (std::size_t y = 0; y < C; ++y) {
    std::vector<VectorXd> targets(C);
    VectorXd mean = VectorXd::Zero(ix(C));
    if (mode != Mode::kTeacher) {
      for (std::size_t o = 0; o < C; ++o) {
        if (mode == Mode::kTop1) {
          targets[o] = VectorXd::Unit(ix(C), ix(argmax_col(teacher[y][o])));
        } else {
          // Case targets: 1/2 on y plus 1/2 on the observed label, or on
          // ybar for a clean cell. They presuppose that the teacher's top-2
          // holds y; where it does not, the teacher's own top-2 is used.
          auto t = top2(teacher[y][o]);
          if (t[0] == y || t[1] == y) t = {y, o == y ? ybar(R, y) : o};
          targets[o] = 0.5 * (VectorXd::Unit(ix(C), ix(t[0])) + VectorXd::Unit(ix(C), ix(t[1])));
        }
        mean += Rm(ix(y), ix(o)) * targets[o];
      }
    }
    for (std::size_t o = 0; o < C; ++o) {
      const double w = Rm(ix(y), ix(o));
      if (w == 0.0) continue;
      const VectorXd pred =
          mode == Mode::kTeacher ? teacher[y][o] : quantified(targets[o], mean, sh.theta, sh.phi);
      if (strictly_correct(pred, y)) acc += w;
    }
  }
  res.accuracy = acc / static_cast<double>(C);
  return res;
}

SimulationResult simulate_finite(const TheoryParams& p, const NoiseMatrix& R, Mode mode,
                                 std::uint64_t seed) {
  p.validate();
  if (R.size() != p.C) throw InputError("noise matrix size differs from C");
  if (p.m > 2000) throw InputError("finite-m path is capped at m = 2000");
  const std::size_t C = p.C;
  const auto labels = balanced_labels(p.m, C);
  auto rng = Rng::stream(seed, "theory-noise");
  MatrixXd Q = MatrixXd::Zero(ix(C), ix(p.m));
  for (std::size_t i = 0; i < p.m; ++i) {
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t o = C - 1;
    for (std::size_t k = 0; k < C; ++k) {
      acc += R(labels[i], k);
      if (u < acc) {
        o = k;
        break;
      }
    }
    Q(ix(o), ix(i)) = 1.0;
  }
  const MatrixXd S = build_similarity(labels, p.a, p.b);
  MatrixXd P = closed_form_predictions(Q, S, p.lambda, C);
  if (mode != Mode::kTeacher) {
    MatrixXd Qs = MatrixXd::Zero(ix(C), ix(p.m));
    for (std::size_t i = 0; i < p.m; ++i) {
      const VectorXd col = P.col(ix(i));
      if (mode == Mode::kTop1) {
        Qs(ix(argmax_col(col)), ix(i)) = 1.0;
      } else {
        const auto t = top2(col);
        Qs(ix(t[0]), ix(i)) = 0.5;
        Qs(ix(t[1]), ix(i)) = 0.5;
      }
    }
    P = closed_form_predictions(Qs, S, p.lambda, C);
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < p.m; ++i) {
    hits += argmax_col(P.col(ix(i))) == labels[i] ? 1 : 0;
  }
  return {static_cast<double>(hits) / static_cast<double>(p.m), has_ybar_tie(R)};
}

std::vector<SweepRow> phase_sweep(const TheoryParams& p, const std::vector<double>& rhos) {
  if (rhos.empty()) throw InputError("phase_sweep: empty grid");
  const auto sh = theta_phi_psi(p);
  std::vector<SweepRow> rows;
  rows.reserve(rhos.size());
  for (double rho : rhos) {
    const auto R = NoiseMatrix::symmetric(p.C, rho);
    SweepRow row;
    row.rho = rho;
    row.teacher_acc = simulate_infinite(p, R, Mode::kTeacher).accuracy;
    row.top1_acc = simulate_infinite(p, R, Mode::kTop1).accuracy;
    row.top2_acc = simulate_infinite(p, R, Mode::kTop2).accuracy;
    row.cond_top1 = condition_top1(R, sh.theta, sh.phi).pass;
    row.cond_top2 = condition_top2(R).pass;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "rho,teacher_acc,top1_acc,top2_acc,cond_top1,cond_top2\n";
  for (const auto& r : rows) {
    os << io::format_double(r.rho) << ',' << io::format_double(r.teacher_acc) << ','
       << io::format_double(r.top1_acc) << ',' << io::format_double(r.top2_acc) << ','
       << (r.cond_top1 ? "pass" : "fail") << ',' << (r.cond_top2 ? "pass" : "fail") << '\n';
  }
  return os.str();
}

GdResult gd_oracle(const MatrixXd& G, const MatrixXd& Q, double lambda, const GdOptions& opts) {
  if (G.rows() != Q.cols()) throw InputError("gd_oracle: feature rows must match target columns");
  if (!(lambda > 0.0)) throw InputError("gd_oracle: lambda must be positive");
  const auto m = G.rows();
  const auto d = G.cols();
  const auto C = Q.rows();
  const double md = static_cast<double>(m);
  const double Cd = static_cast<double>(C);
  const bool linear = opts.mode == GdMode::kLinearized;

  double lr = opts.learning_rate;
  if (lr <= 0.0) {
    const double smax = gershgorin(G * G.transpose());
    // Curvature of the data term: S / (m C) when linearised, at most S / (2m)
    // through a softmax.
    lr = 1.0 / ((linear ? smax / (md * Cd) : smax / (2.0 * md)) + lambda);
  }

  MatrixXd W = MatrixXd::Zero(d, C);
  auto predict = [&](const MatrixXd& Wc) {
    MatrixXd logits = (G * Wc).transpose();  // C x m
    if (linear) return MatrixXd((logits.array() + 1.0) / Cd);
    for (Index i = 0; i < m; ++i) {
      auto col = logits.col(i);
      col.array() -= col.maxCoeff();
      col = col.array().exp();
      col /= col.sum();
    }
    return logits;
  };

  GdResult res;
  for (std::size_t step = 0; step < opts.max_steps; ++step) {
    const MatrixXd P = predict(W);
    const MatrixXd grad = G.transpose() * (P - Q).transpose() / md + lambda * W;
    res.grad_norm = grad.norm();
    res.steps = step;
    if (res.grad_norm < opts.tolerance) {
      res.converged = true;
      break;
    }
    W -= lr * grad;
  }
  res.P = predict(W);
  return res;
}

GdResult gd_oracle_similarity(const MatrixXd& S, const MatrixXd& Q, double lambda,
                              const GdOptions& opts) {
  Eigen::LLT<MatrixXd> llt(S);
  if (llt.info() != Eigen::Success) throw InputError("gd_oracle: similarity matrix is not positive definite");
  const MatrixXd L = llt.matrixL();
  return gd_oracle(L, Q, lambda, opts);
}

}  // namespace candist::theory
