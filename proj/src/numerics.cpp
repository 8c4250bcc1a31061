#include "uiss/numerics.hpp"

#include "uiss/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace uiss {

DiagWeights::DiagWeights(Vector values) : values_(std::move(values)) {
  for (Eigen::Index i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0) || !std::isfinite(values_[i])) {
      throw ValidationError("diagonal weight " + std::to_string(i) + " is negative or not finite");
    }
  }
}

namespace numerics {

void require_finite(const Matrix& a, const char* name) {
  if (!a.allFinite()) throw ValidationError(std::string(name) + " contains non-finite entries");
}

Vector row_norms(const Matrix& a) { return a.rowwise().norm(); }

Vector col_norms(const Matrix& a) { return a.colwise().norm().transpose(); }

double l21_rows(const Matrix& a) {
  require_finite(a, "l21 input");
  return row_norms(a).sum();
}

double l21_cols(const Matrix& a) {
  require_finite(a, "l21 input");
  return col_norms(a).sum();
}

SymEvd sym_evd(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0) throw ValidationError("sym_evd needs a nonempty square matrix");
  require_finite(s, "sym_evd input");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ValidationError("sym_evd input is not symmetric");
  }

  Eigen::SelfAdjointEigenSolver<Matrix> solver(s);
  if (solver.info() != Eigen::Success) throw ValidationError("eigendecomposition did not converge");

  const Vector& raw = solver.eigenvalues();
  const Eigen::Index n = raw.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return raw[a] > raw[b]; });

  const double top = std::max(0.0, raw.maxCoeff());
  Matrix vecs(n, n);
  Vector vals(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    double lambda = raw[src];
    if (lambda < 0.0) {
      if (lambda < -1e-8 * std::max(1.0, top)) throw ValidationError("sym_evd input is not positive semidefinite");
      lambda = 0.0;
    }
    vals[j] = lambda;
    vecs.col(j) = solver.eigenvectors().col(src);
  }
  return {std::move(vecs), DiagWeights(std::move(vals))};
}

ThinSvd thin_svd(const Matrix& v) {
  if (v.rows() == 0 || v.cols() == 0) throw ValidationError("thin_svd needs a nonempty matrix");
  if (v.rows() > v.cols()) throw ValidationError("thin_svd expects rows <= cols; transpose first");
  require_finite(v, "thin_svd input");
  Eigen::JacobiSVD<Matrix> svd(v, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), DiagWeights(svd.singularValues()), svd.matrixV()};
}

Matrix nearest_orthonormal(const Matrix& v) {
  const ThinSvd svd = thin_svd(v);
  const Vector& s = svd.values.values();
  const double cutoff = 1e-12 * s[0];
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > cutoff && s[i] > 0.0) ++rank;
  }
  if (rank < static_cast<std::size_t>(v.rows())) {
    throw DegenerateInputError("nearest_orthonormal needs full row rank, got rank " + std::to_string(rank) +
                                   " of " + std::to_string(v.rows()),
                               rank);
  }
  return svd.left * svd.right.transpose();
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols()) throw ValidationError("solve_spd needs a square system matrix");
  if (a.rows() != b.rows()) throw ValidationError("solve_spd dimension mismatch");
  require_finite(a, "solve_spd matrix");
  require_finite(b, "solve_spd right-hand side");

  const double mean_diag = a.trace() / static_cast<double>(a.rows());
  constexpr std::array<double, 3> kRidge{0.0, 1e-10, 1e-6};
  for (double ridge : kRidge) {
    Eigen::LLT<Matrix> llt;
    if (ridge == 0.0) {
      llt.compute(a);
    } else {
      Matrix shifted = a;
      shifted.diagonal().array() += ridge * std::abs(mean_diag);
      llt.compute(shifted);
    }
    if (llt.info() != Eigen::Success) continue;
    Matrix x = llt.solve(b);
    if (x.allFinite()) return x;
  }
  throw SingularSystemError("system matrix is not positive definite even after ridge escalation");
}

}  // namespace numerics
}  // namespace uiss
