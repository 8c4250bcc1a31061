#pragma once

// Dense kernels used by the alternating solver: L2,1 norms, symmetric
// eigendecomposition, thin SVD, SPD solves with ridge fallback and the
// nearest matrix with orthonormal rows.

#include <Eigen/Dense>

#include <cstddef>

namespace uiss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Nonnegative diagonal of an IRLS reweighting matrix, stored as a vector.
class DiagWeights {
 public:
  DiagWeights() = default;
  explicit DiagWeights(Vector values);
  static DiagWeights ones(Eigen::Index size) { return DiagWeights(Vector::Ones(size)); }
  static DiagWeights zeros(Eigen::Index size) { return DiagWeights(Vector::Zero(size)); }

  Eigen::Index size() const { return values_.size(); }
  double operator[](Eigen::Index i) const { return values_[i]; }
  const Vector& values() const { return values_; }
  auto asDiagonal() const { return values_.asDiagonal(); }

 private:
  Vector values_;
};

namespace numerics {

// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* name);

// Sum of Euclidean row norms.
double l21_rows(const Matrix& a);
// Sum of Euclidean column norms, i.e. l21_rows of the transpose.
double l21_cols(const Matrix& a);

Vector row_norms(const Matrix& a);
Vector col_norms(const Matrix& a);

struct SymEvd {
  Matrix eigvecs;       // orthonormal columns
  DiagWeights eigvals;  // descending
};

// Eigendecomposition of a symmetric positive semidefinite matrix. Eigenvalues
// are sorted descending with ties kept in solver order; round-off negatives
// are clamped to zero.
SymEvd sym_evd(const Matrix& s);

struct ThinSvd {
  Matrix left;          // k x k
  DiagWeights values;   // k, descending
  Matrix right;         // m x k
};

// V = left * diag(values) * right^T for a k x m matrix with k <= m.
ThinSvd thin_svd(const Matrix& v);

// Closest matrix (Frobenius) with orthonormal rows. Throws DegenerateInputError
// when a singular value falls below 1e-12 times the largest.
Matrix nearest_orthonormal(const Matrix& v);

// Solves A X = B for symmetric positive definite A. If the Cholesky
// factorization fails, a ridge of 1e-10 and then 1e-6 times trace(A)/dim is
// added before giving up with SingularSystemError.
Matrix solve_spd(const Matrix& a, const Matrix& b);

}  // namespace numerics
}  // namespace uiss
