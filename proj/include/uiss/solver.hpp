#pragma once

// Alternating closed-form optimization for joint feature-subnetwork and
// instance selection by self-representative factorization:
//
//   min_{P,Q}  ||X - U V||_{2,1} + l1 ||P||_{2,1} + l2 ||Q^T||_{2,1} + l3 Tr(P^T L P)
//   s.t.       U = X P,  V = Q X,  V V^T = I,  P >= 0,  Q >= 0
//
// The L2,1 terms are handled by iteratively reweighted diagonal matrices
// (Theta, Pi, K, G); the constraints are relaxed into squared-Frobenius
// couplings and V's orthogonality is enforced through an auxiliary W.

#include "uiss/graph.hpp"
#include "uiss/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace uiss::solver {

// Optional rescaling of X before fitting. The objective mixes L2,1 and
// squared terms under fixed weights, so the lambdas are only meaningful
// relative to the data scale.
enum class Scaling { none, rms };

std::string to_string(Scaling s);
Scaling parse_scaling(const std::string& text);

struct HyperParams {
  double lambda1 = 0.1;  // feature selector sparsity
  double lambda2 = 0.1;  // instance selector sparsity
  double lambda3 = 1.0;  // graph smoothness
  Eigen::Index k = 10;
  double tol_outer = 1e-4;
  double tol_inner = 1e-5;
  int max_outer = 200;
  int max_inner = 100;
  double ridge_eps = 0.0;  // added to both system matrices on every solve
  std::uint64_t seed = 0;
  Scaling scaling = Scaling::none;

  // Throws ValidationError unless the parameters fit an n x m problem.
  void validate(Eigen::Index n, Eigen::Index m) const;
};

struct SolverState {
  Matrix P;  // m x k, nonnegative
  Matrix Q;  // k x n, nonnegative
  Matrix U;  // n x k
  Matrix V;  // k x m
  Matrix W;  // k x m, orthonormal rows
  DiagWeights theta;  // m, column residuals of X - U V
  DiagWeights pi;     // n, columns of Q
  DiagWeights kappa;  // n, row residuals of X - U V
  DiagWeights g;      // m, rows of P
  std::size_t outer_iter = 0;
};

struct ObjectiveTerms {
  double reconstruction = 0.0;
  double feature_sparsity = 0.0;   // lambda1 ||P||_{2,1}
  double instance_sparsity = 0.0;  // lambda2 ||Q^T||_{2,1}
  double smoothness = 0.0;         // lambda3 Tr(P^T L P)
  double total = 0.0;
};

struct FitReport {
  bool converged = false;
  std::size_t outer_iters = 0;
  std::vector<double> objective_trace;  // one entry per outer iteration
  double final_delta_P = 0.0;
  double final_delta_Q = 0.0;
  std::size_t inner_nonconverged = 0;  // outer iterations whose V/W loop hit max_inner
  std::size_t reseeds = 0;             // rank-deficient V re-randomizations
  double data_scale = 1.0;             // X was divided by this before fitting
};

struct FitResult {
  Matrix P;
  Matrix Q;
  FitReport report;
};

// P, Q rectangular identities; all weights one; U, V seeded uniform [0,1);
// W the nearest orthonormal-row matrix to V.
SolverState init_state(const Matrix& x, const HyperParams& hyper);

// Zero-guard: a norm counts as zero when <= 1e-12 (1 + scale); its weight is 0.
DiagWeights inverse_norm_weights(const Vector& norms, double scale);

DiagWeights reweight_theta(const Matrix& x, const Matrix& u, const Matrix& v);
DiagWeights reweight_pi(const Matrix& q);
DiagWeights reweight_k(const Matrix& x, const Matrix& u, const Matrix& v);
DiagWeights reweight_g(const Matrix& p);

// Solves U^T (U V - X) Theta + 2 V - Q X - W = 0 via the eigendecomposition
// of U^T U.
Matrix update_V(const Matrix& x, const Matrix& u, const Matrix& q, const Matrix& w, const DiagWeights& theta,
                const numerics::SymEvd& utu);
Matrix update_V(const Matrix& x, const Matrix& u, const Matrix& q, const Matrix& w, const DiagWeights& theta);

Matrix update_W(const Matrix& v);

struct InnerLoopResult {
  int iterations = 0;
  bool converged = false;
  std::size_t reseeds = 0;
};

// Alternates update_V / update_W with Theta and the eigendecomposition of
// U^T U held fixed. If V loses row rank it is redrawn from `rng`.
InnerLoopResult inner_VW_loop(SolverState& state, const Matrix& x, const HyperParams& hyper,
                              const numerics::SymEvd& utu, std::mt19937_64& rng);

// Unprojected solution of (Q X - V) X^T + l2 Q Pi = 0. `xxt` is X X^T.
Matrix solve_Q_raw(const Matrix& v, const Matrix& x, const Matrix& xxt, const DiagWeights& pi, double lambda2,
                   double ridge_eps = 0.0);
Matrix update_Q(const Matrix& v, const Matrix& x, const DiagWeights& pi, double lambda2);

// Unprojected solution of X^T (X P - U) + l1 G P + l3 L P = 0. `base` is
// X^T X + l3 L.
Matrix solve_P_raw(const Matrix& x, const Matrix& u, const Matrix& base, const DiagWeights& g, double lambda1,
                   double ridge_eps = 0.0);
Matrix update_P(const Matrix& x, const Matrix& u, const DiagWeights& g, const graph::Laplacian& lap, double lambda1,
                double lambda3);

// Solves K (U V - X) V^T + U - X P = 0 via the eigendecomposition of V V^T.
Matrix update_U(const Matrix& x, const Matrix& p, const Matrix& v, const DiagWeights& kappa,
                const numerics::SymEvd& vvt);
Matrix update_U(const Matrix& x, const Matrix& p, const Matrix& v, const DiagWeights& kappa);

// Objective on the constraint surface U = X P, V = Q X, with row-wise L2,1
// reconstruction.
ObjectiveTerms objective(const Matrix& x, const Matrix& p, const Matrix& q, const graph::Laplacian& lap,
                         const HyperParams& hyper);

// Relative Frobenius changes of P and Q over one outer iteration.
struct OuterStep {
  double delta_P = 0.0;
  double delta_Q = 0.0;
  InnerLoopResult inner;
};

class Solver {
 public:
  Solver(const Matrix& x, const graph::Laplacian& lap, const HyperParams& hyper);

  const SolverState& state() const { return state_; }
  // X after scaling.
  const Matrix& data() const { return x_; }
  double data_scale() const { return scale_; }
  // Runs one outer iteration in place.
  OuterStep step();
  // Iterates step() until convergence or max_outer.
  FitResult run();

 private:
  Matrix x_;
  graph::Laplacian lap_;
  HyperParams hyper_;
  double scale_ = 1.0;
  Matrix xxt_;
  Matrix p_base_;
  SolverState state_;
  std::mt19937_64 rng_;
};

FitResult fit(const Matrix& x, const graph::Laplacian& lap, const HyperParams& hyper);

}  // namespace uiss::solver
