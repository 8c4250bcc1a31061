#pragma once

// Evaluation harness: ROC/AUC for recovering planted features or outliers,
// cross-validated accuracy of a linear hinge-loss classifier on a
// feature/instance selection, and the joint feature x instance budget grid.

#include "uiss/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uiss::eval {

struct RocCurve {
  std::vector<double> thresholds;  // descending; a point at +inf opens the curve
  std::vector<double> fpr;
  std::vector<double> tpr;
  double auc = 0.0;
};

// Threshold sweep over descending scores with tied scores grouped into one
// step. AUC is the trapezoidal area, which equals P(s+ > s-) + P(s+ = s-)/2.
RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& positives);
RocCurve roc_auc(const Vector& scores, const std::vector<bool>& positives);

struct LinearModel {
  Vector weights;
  double bias = 0.0;

  double decision(const Eigen::Ref<const Eigen::RowVectorXd>& x) const { return x.dot(weights) + bias; }
};

// Mean hinge loss plus reg/2 (|w|^2 + b^2); labels are +1 / -1.
double hinge_objective(const Matrix& x, const std::vector<int>& y, const LinearModel& model, double reg);

// L2-regularized hinge loss minimized by seeded mini-batch subgradient
// descent with step 1/(reg t). Returns the best iterate seen at periodic
// full-objective checkpoints, starting from the all-zero model.
LinearModel train_linear(const Matrix& x, const std::vector<int>& y, double reg, int iters, std::uint64_t seed);

struct CvOptions {
  std::size_t folds = 5;
  std::size_t repeats = 10;
  double c = 1.0;  // reg = 1 / (c * n_train)
  int iters = 2000;
  std::uint64_t seed = 0;
};

struct CvReport {
  std::size_t folds = 0;                  // folds actually evaluated
  std::size_t skipped_folds = 0;          // training split held a single class
  std::vector<double> fold_accuracies;
  double mean = 0.0;
  double stddev = 0.0;
};

// Stratified k-fold CV (repeated `repeats` times with fresh shuffles) on the
// rows in `instances` restricted to the columns in `features`. Labels are
// 0/1; rows labelled -1 are dropped. Features are standardized with the
// training split's statistics.
CvReport cv_accuracy(const Matrix& x, const std::vector<int>& labels, const std::vector<std::size_t>& features,
                     const std::vector<std::size_t>& instances, const CvOptions& options);

// cv_accuracy over every (feature fraction, instance fraction) pair using the
// top-ranked features by row norm of P and instances by column norm of Q.
// Rows index feature fractions, columns instance fractions.
Matrix sweep_grid(const Matrix& x, const std::vector<int>& labels, const Matrix& p, const Matrix& q,
                  const std::vector<double>& feature_fracs, const std::vector<double>& instance_fracs,
                  const CvOptions& options);

std::vector<std::size_t> all_indices(std::size_t n);

}  // namespace uiss::eval
