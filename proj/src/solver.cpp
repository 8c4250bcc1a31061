#include "uiss/solver.hpp"

#include "uiss/error.hpp"

#include <algorithm>
#include <cmath>

namespace uiss::solver {

namespace {

using numerics::SymEvd;

void fill_uniform(Matrix& a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = unit(rng);
}

SolverState init_state_with(const Matrix& x, const HyperParams& hyper, std::mt19937_64& rng) {
  hyper.validate(x.rows(), x.cols());
  const Eigen::Index n = x.rows();
  const Eigen::Index m = x.cols();
  const Eigen::Index k = hyper.k;

  SolverState s;
  s.P = Matrix::Identity(m, k);
  s.Q = Matrix::Identity(k, n);
  s.theta = DiagWeights::ones(m);
  s.pi = DiagWeights::ones(n);
  s.kappa = DiagWeights::ones(n);
  s.g = DiagWeights::ones(m);
  s.U.resize(n, k);
  s.V.resize(k, m);
  fill_uniform(s.U, rng);
  fill_uniform(s.V, rng);
  for (int attempt = 0;; ++attempt) {
    try {
      s.W = numerics::nearest_orthonormal(s.V);
      break;
    } catch (const DegenerateInputError&) {
      if (attempt == 10) throw;
      fill_uniform(s.V, rng);
    }
  }
  return s;
}

double relative_change(const Matrix& next, const Matrix& prev) { return (next - prev).norm() / (1.0 + prev.norm()); }

}  // namespace

std::string to_string(Scaling s) { return s == Scaling::rms ? "rms" : "none"; }

Scaling parse_scaling(const std::string& text) {
  if (text == "none") return Scaling::none;
  if (text == "rms") return Scaling::rms;
  throw ValidationError("unknown scaling '" + text + "' (expected none or rms)");
}

void HyperParams::validate(Eigen::Index n, Eigen::Index m) const {
  if (n < 2 || m < 2) throw ValidationError("need at least 2 instances and 2 features");
  if (k < 1 || k > std::min(n, m)) {
    throw ValidationError("k=" + std::to_string(k) + " must lie in [1, min(n, m)=" + std::to_string(std::min(n, m)) +
                          "]");
  }
  if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0) || !(lambda3 >= 0.0)) throw ValidationError("lambdas must be >= 0");
  if (!(tol_outer > 0.0) || !(tol_inner > 0.0)) throw ValidationError("tolerances must be > 0");
  if (max_outer < 1 || max_inner < 1) throw ValidationError("iteration caps must be >= 1");
  if (!(ridge_eps >= 0.0)) throw ValidationError("ridge_eps must be >= 0");
}

SolverState init_state(const Matrix& x, const HyperParams& hyper) {
  std::mt19937_64 rng(hyper.seed);
  return init_state_with(x, hyper, rng);
}

DiagWeights inverse_norm_weights(const Vector& norms, double scale) {
  const double guard = 1e-12 * (1.0 + scale);
  Vector w(norms.size());
  for (Eigen::Index i = 0; i < norms.size(); ++i) w[i] = norms[i] > guard ? 0.5 / norms[i] : 0.0;
  return DiagWeights(std::move(w));
}

DiagWeights reweight_theta(const Matrix& x, const Matrix& u, const Matrix& v) {
  if (u.rows() != x.rows() || v.cols() != x.cols() || u.cols() != v.rows()) {
    throw ValidationError("reweight_theta: dimension mismatch");
  }
  return inverse_norm_weights(numerics::col_norms(x - u * v), x.norm());
}

DiagWeights reweight_k(const Matrix& x, const Matrix& u, const Matrix& v) {
  if (u.rows() != x.rows() || v.cols() != x.cols() || u.cols() != v.rows()) {
    throw ValidationError("reweight_k: dimension mismatch");
  }
  return inverse_norm_weights(numerics::row_norms(x - u * v), x.norm());
}

DiagWeights reweight_pi(const Matrix& q) { return inverse_norm_weights(numerics::col_norms(q), q.norm()); }

DiagWeights reweight_g(const Matrix& p) { return inverse_norm_weights(numerics::row_norms(p), p.norm()); }

Matrix update_V(const Matrix& x, const Matrix& u, const Matrix& q, const Matrix& w, const DiagWeights& theta,
                const SymEvd& utu) {
  const Matrix& a = utu.eigvecs;
  const Vector& sigma = utu.eigvals.values();
  const Vector& th = theta.values();
  const Matrix psi = (u.transpose() * x) * th.asDiagonal() + q * x + w;
  Matrix e = a.transpose() * psi;
  for (Eigen::Index j = 0; j < e.cols(); ++j)
    for (Eigen::Index i = 0; i < e.rows(); ++i) e(i, j) /= sigma[i] * th[j] + 2.0;
  return a * e;
}

Matrix update_V(const Matrix& x, const Matrix& u, const Matrix& q, const Matrix& w, const DiagWeights& theta) {
  return update_V(x, u, q, w, theta, numerics::sym_evd(u.transpose() * u));
}

Matrix update_W(const Matrix& v) { return numerics::nearest_orthonormal(v); }

InnerLoopResult inner_VW_loop(SolverState& state, const Matrix& x, const HyperParams& hyper, const SymEvd& utu,
                              std::mt19937_64& rng) {
  InnerLoopResult result;
  for (int it = 1; it <= hyper.max_inner; ++it) {
    result.iterations = it;
    Matrix v = update_V(x, state.U, state.Q, state.W, state.theta, utu);
    Matrix w;
    try {
      w = update_W(v);
    } catch (const DegenerateInputError&) {
      // The Procrustes optimum is not unique; restart V from a random draw.
      fill_uniform(v, rng);
      w = update_W(v);
      ++result.reseeds;
    }
    const bool v_done = (v - state.V).norm() <= hyper.tol_inner * (1.0 + state.V.norm());
    const bool w_done = (w - state.W).norm() <= hyper.tol_inner * (1.0 + state.W.norm());
    state.V = std::move(v);
    state.W = std::move(w);
    if (v_done && w_done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

Matrix solve_Q_raw(const Matrix& v, const Matrix& x, const Matrix& xxt, const DiagWeights& pi, double lambda2,
                   double ridge_eps) {
  Matrix sys = xxt;
  sys.diagonal() += lambda2 * pi.values();
  if (ridge_eps > 0.0) sys.diagonal().array() += ridge_eps;
  // Q sys = V X^T with sys symmetric.
  return numerics::solve_spd(sys, x * v.transpose()).transpose();
}

Matrix update_Q(const Matrix& v, const Matrix& x, const DiagWeights& pi, double lambda2) {
  if (v.cols() != x.cols() || pi.size() != x.rows()) throw ValidationError("update_Q: dimension mismatch");
  return solve_Q_raw(v, x, x * x.transpose(), pi, lambda2).cwiseMax(0.0);
}

Matrix solve_P_raw(const Matrix& x, const Matrix& u, const Matrix& base, const DiagWeights& g, double lambda1,
                   double ridge_eps) {
  Matrix sys = base;
  sys.diagonal() += lambda1 * g.values();
  if (ridge_eps > 0.0) sys.diagonal().array() += ridge_eps;
  return numerics::solve_spd(sys, x.transpose() * u);
}

Matrix update_P(const Matrix& x, const Matrix& u, const DiagWeights& g, const graph::Laplacian& lap, double lambda1,
                double lambda3) {
  if (u.rows() != x.rows() || g.size() != x.cols() || lap.matrix.rows() != x.cols()) {
    throw ValidationError("update_P: dimension mismatch");
  }
  const Matrix base = x.transpose() * x + lambda3 * lap.matrix;
  return solve_P_raw(x, u, base, g, lambda1).cwiseMax(0.0);
}

Matrix update_U(const Matrix& x, const Matrix& p, const Matrix& v, const DiagWeights& kappa, const SymEvd& vvt) {
  const Matrix& b = vvt.eigvecs;
  const Vector& lambda = vvt.eigvals.values();
  const Vector& kv = kappa.values();
  const Matrix xi = x * p + kv.asDiagonal() * (x * v.transpose());
  Matrix h = xi * b;
  for (Eigen::Index j = 0; j < h.cols(); ++j)
    for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, j) /= kv[i] * lambda[j] + 1.0;
  return h * b.transpose();
}

Matrix update_U(const Matrix& x, const Matrix& p, const Matrix& v, const DiagWeights& kappa) {
  return update_U(x, p, v, kappa, numerics::sym_evd(v * v.transpose()));
}

ObjectiveTerms objective(const Matrix& x, const Matrix& p, const Matrix& q, const graph::Laplacian& lap,
                         const HyperParams& hyper) {
  if (p.rows() != x.cols() || q.cols() != x.rows() || p.cols() != q.rows()) {
    throw ValidationError("objective: dimension mismatch");
  }
  ObjectiveTerms t;
  const Matrix u = x * p;
  const Matrix v = q * x;
  t.reconstruction = numerics::l21_rows(x - u * v);
  t.feature_sparsity = hyper.lambda1 * numerics::l21_rows(p);
  t.instance_sparsity = hyper.lambda2 * numerics::l21_cols(q);
  t.smoothness = hyper.lambda3 * std::max(0.0, graph::dirichlet_energy(p, lap));
  t.total = t.reconstruction + t.feature_sparsity + t.instance_sparsity + t.smoothness;
  return t;
}

Solver::Solver(const Matrix& x, const graph::Laplacian& lap, const HyperParams& hyper)
    : lap_(lap), hyper_(hyper), rng_(hyper.seed) {
  numerics::require_finite(x, "X");
  if (lap.matrix.rows() != x.cols() || lap.matrix.cols() != x.cols()) {
    throw ValidationError("Laplacian has " + std::to_string(lap.matrix.rows()) + " nodes but X has " +
                          std::to_string(x.cols()) + " features");
  }
  if (hyper.scaling == Scaling::rms) {
    const double rms = x.norm() / std::sqrt(static_cast<double>(x.size()));
    if (rms > 0.0) scale_ = rms;
  }
  x_ = x / scale_;
  state_ = init_state_with(x_, hyper_, rng_);
  xxt_ = x_ * x_.transpose();
  p_base_ = x_.transpose() * x_ + hyper_.lambda3 * lap_.matrix;
}

OuterStep Solver::step() {
  SolverState& s = state_;
  OuterStep out;

  const SymEvd utu = numerics::sym_evd(s.U.transpose() * s.U);
  s.theta = reweight_theta(x_, s.U, s.V);
  out.inner = inner_VW_loop(s, x_, hyper_, utu, rng_);

  const Matrix q_prev = s.Q;
  s.Q = solve_Q_raw(s.V, x_, xxt_, s.pi, hyper_.lambda2, hyper_.ridge_eps).cwiseMax(0.0);
  s.pi = reweight_pi(s.Q);

  const SymEvd vvt = numerics::sym_evd(s.V * s.V.transpose());
  s.g = reweight_g(s.P);
  const Matrix p_prev = s.P;
  s.P = solve_P_raw(x_, s.U, p_base_, s.g, hyper_.lambda1, hyper_.ridge_eps).cwiseMax(0.0);

  s.U = update_U(x_, s.P, s.V, s.kappa, vvt);
  s.kappa = reweight_k(x_, s.U, s.V);
  ++s.outer_iter;

  out.delta_P = relative_change(s.P, p_prev);
  out.delta_Q = relative_change(s.Q, q_prev);
  if (!s.U.allFinite() || !s.V.allFinite() || !s.P.allFinite() || !s.Q.allFinite()) {
    throw SingularSystemError("iterates became non-finite at outer iteration " + std::to_string(s.outer_iter));
  }
  return out;
}

FitResult Solver::run() {
  FitReport report;
  report.data_scale = scale_;
  for (int it = 0; it < hyper_.max_outer; ++it) {
    const OuterStep st = step();
    report.outer_iters = state_.outer_iter;
    report.final_delta_P = st.delta_P;
    report.final_delta_Q = st.delta_Q;
    report.reseeds += st.inner.reseeds;
    if (!st.inner.converged) ++report.inner_nonconverged;
    report.objective_trace.push_back(objective(x_, state_.P, state_.Q, lap_, hyper_).total);
    if (std::max(st.delta_P, st.delta_Q) <= hyper_.tol_outer) {
      report.converged = true;
      break;
    }
  }
  return {state_.P, state_.Q, std::move(report)};
}

FitResult fit(const Matrix& x, const graph::Laplacian& lap, const HyperParams& hyper) {
  Solver solver(x, lap, hyper);
  return solver.run();
}

}  // namespace uiss::solver
