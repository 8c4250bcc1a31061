#include "uiss/eval.hpp"

#include "uiss/error.hpp"
#include "uiss/selection.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace uiss::eval {

RocCurve roc_auc(const std::vector<double>& scores, const std::vector<bool>& positives) {
  if (scores.size() != positives.size()) throw ValidationError("roc_auc: scores and labels differ in length");
  const auto n_pos = static_cast<double>(std::count(positives.begin(), positives.end(), true));
  const auto n_neg = static_cast<double>(positives.size()) - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ValidationError("roc_auc needs at least one positive and one negative");
  for (double s : scores) {
    if (!std::isfinite(s)) throw ValidationError("roc_auc: non-finite score");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve roc;
  roc.thresholds.push_back(std::numeric_limits<double>::infinity());
  roc.fpr.push_back(0.0);
  roc.tpr.push_back(0.0);
  double tp = 0.0;
  double fp = 0.0;
  // Twice the trapezoid area in units of (1 / n_pos n_neg); an integer, so
  // the final division is the only rounding.
  double area2 = 0.0;
  double fp_prev = 0.0;
  double tp_prev = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = scores[order[i]];
    while (i < order.size() && scores[order[i]] == level) {
      if (positives[order[i]]) {
        tp += 1.0;
      } else {
        fp += 1.0;
      }
      ++i;
    }
    area2 += (fp - fp_prev) * (tp + tp_prev);
    fp_prev = fp;
    tp_prev = tp;
    const double fpr = fp / n_neg;
    const double tpr = tp / n_pos;
    roc.thresholds.push_back(level);
    roc.fpr.push_back(fpr);
    roc.tpr.push_back(tpr);
  }
  roc.auc = area2 / (2.0 * n_pos * n_neg);
  return roc;
}

RocCurve roc_auc(const Vector& scores, const std::vector<bool>& positives) {
  return roc_auc(std::vector<double>(scores.data(), scores.data() + scores.size()), positives);
}

double hinge_objective(const Matrix& x, const std::vector<int>& y, const LinearModel& model, double reg) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    loss += std::max(0.0, 1.0 - y[std::size_t(i)] * model.decision(x.row(i)));
  }
  return loss / static_cast<double>(x.rows()) +
         0.5 * reg * (model.weights.squaredNorm() + model.bias * model.bias);
}

LinearModel train_linear(const Matrix& x, const std::vector<int>& y, double reg, int iters, std::uint64_t seed) {
  if (x.rows() != static_cast<Eigen::Index>(y.size())) throw ValidationError("train_linear: label count mismatch");
  if (!(reg > 0.0) || iters < 1) throw ValidationError("train_linear: need reg > 0 and iters >= 1");
  bool has_pos = false;
  bool has_neg = false;
  for (int label : y) {
    if (label == 1) {
      has_pos = true;
    } else if (label == -1) {
      has_neg = true;
    } else {
      throw ValidationError("train_linear: labels must be +1 or -1");
    }
  }
  if (!has_pos || !has_neg) throw ValidationError("train_linear needs both classes");

  const Eigen::Index n = x.rows();
  const Eigen::Index batch = std::min<Eigen::Index>(n, 16);
  const int checkpoint = std::max(1, iters / 50);
  const double radius = 1.0 / std::sqrt(reg);

  LinearModel model{Vector::Zero(x.cols()), 0.0};
  LinearModel best = model;
  double best_obj = hinge_objective(x, y, model, reg);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Eigen::Index> pick(0, n - 1);
  Vector grad_w(x.cols());
  for (int t = 1; t <= iters; ++t) {
    const double eta = 1.0 / (reg * t);
    grad_w.setZero();
    double grad_b = 0.0;
    for (Eigen::Index s = 0; s < batch; ++s) {
      const Eigen::Index i = pick(rng);
      const double yi = y[std::size_t(i)];
      if (yi * model.decision(x.row(i)) < 1.0) {
        grad_w += yi * x.row(i).transpose();
        grad_b += yi;
      }
    }
    const double shrink = 1.0 - eta * reg;
    const double step = eta / static_cast<double>(batch);
    model.weights = shrink * model.weights + step * grad_w;
    model.bias = shrink * model.bias + step * grad_b;
    const double norm = std::sqrt(model.weights.squaredNorm() + model.bias * model.bias);
    if (norm > radius) {
      model.weights *= radius / norm;
      model.bias *= radius / norm;
    }
    if (t % checkpoint == 0 || t == iters) {
      const double obj = hinge_objective(x, y, model, reg);
      if (obj < best_obj) {
        best_obj = obj;
        best = model;
      }
    }
  }
  return best;
}

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

namespace {

Matrix gather(const Matrix& x, const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(long(i), long(j)) = x(long(rows[i]), long(cols[j]));
  return out;
}

double fold_accuracy(const Matrix& x, const std::vector<int>& y01, const std::vector<std::size_t>& train,
                     const std::vector<std::size_t>& test, const std::vector<std::size_t>& features,
                     const CvOptions& options, std::uint64_t seed) {
  Matrix xtr = gather(x, train, features);
  Matrix xte = gather(x, test, features);
  const Eigen::RowVectorXd mean = xtr.colwise().mean();
  Eigen::RowVectorXd sd = ((xtr.rowwise() - mean).array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < sd.size(); ++j)
    if (!(sd[j] > 0.0)) sd[j] = 1.0;
  xtr = (xtr.rowwise() - mean).array().rowwise() / sd.array();
  xte = (xte.rowwise() - mean).array().rowwise() / sd.array();

  std::vector<int> ytr(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) ytr[i] = y01[train[i]] == 1 ? 1 : -1;
  const double reg = 1.0 / (options.c * static_cast<double>(train.size()));
  const LinearModel model = train_linear(xtr, ytr, reg, options.iters, seed);

  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const int predicted = model.decision(xte.row(long(i))) >= 0.0 ? 1 : 0;
    if (predicted == y01[test[i]]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace

CvReport cv_accuracy(const Matrix& x, const std::vector<int>& labels, const std::vector<std::size_t>& features,
                     const std::vector<std::size_t>& instances, const CvOptions& options) {
  if (static_cast<Eigen::Index>(labels.size()) != x.rows()) throw ValidationError("cv_accuracy: label count mismatch");
  if (features.empty() || instances.empty()) throw ValidationError("cv_accuracy: empty feature or instance subset");
  if (options.folds < 2) throw ValidationError("cv_accuracy: need at least 2 folds");
  if (options.repeats < 1) throw ValidationError("cv_accuracy: need at least 1 repeat");
  for (std::size_t f : features)
    if (f >= std::size_t(x.cols())) throw ValidationError("cv_accuracy: feature index out of range");

  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i : instances) {
    if (i >= labels.size()) throw ValidationError("cv_accuracy: instance index out of range");
    if (labels[i] == 1) {
      pos.push_back(i);
    } else if (labels[i] == 0) {
      neg.push_back(i);
    } else if (labels[i] != -1) {
      throw ValidationError("cv_accuracy: labels must be 0, 1 or -1");
    }
  }
  if (pos.empty() || neg.empty()) throw ValidationError("cv_accuracy: selected instances hold a single class");

  CvReport report;
  std::mt19937_64 rng(options.seed);
  for (std::size_t rep = 0; rep < options.repeats; ++rep) {
    std::vector<std::vector<std::size_t>> fold_members(options.folds);
    // Stratified assignment: shuffle each class and deal round-robin,
    // continuing the deal across classes so fold sizes stay balanced.
    std::size_t slot = 0;
    for (auto* cls : {&pos, &neg}) {
      std::vector<std::size_t> shuffled = *cls;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (std::size_t i : shuffled) fold_members[slot++ % options.folds].push_back(i);
    }
    for (std::size_t f = 0; f < options.folds; ++f) {
      const auto& test = fold_members[f];
      if (test.empty()) continue;
      std::vector<std::size_t> train;
      bool has_pos = false;
      bool has_neg = false;
      for (std::size_t g = 0; g < options.folds; ++g) {
        if (g == f) continue;
        for (std::size_t i : fold_members[g]) {
          train.push_back(i);
          (labels[i] == 1 ? has_pos : has_neg) = true;
        }
      }
      if (!has_pos || !has_neg) {
        ++report.skipped_folds;
        continue;
      }
      std::sort(train.begin(), train.end());
      const std::uint64_t fold_seed = rng();
      report.fold_accuracies.push_back(fold_accuracy(x, labels, train, test, features, options, fold_seed));
    }
  }
  report.folds = report.fold_accuracies.size();
  if (report.folds == 0) throw ValidationError("cv_accuracy: every fold was skipped");
  const double n = static_cast<double>(report.folds);
  report.mean = std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : report.fold_accuracies) ss += (a - report.mean) * (a - report.mean);
  report.stddev = std::sqrt(ss / n);
  return report;
}

Matrix sweep_grid(const Matrix& x, const std::vector<int>& labels, const Matrix& p, const Matrix& q,
                  const std::vector<double>& feature_fracs, const std::vector<double>& instance_fracs,
                  const CvOptions& options) {
  if (p.rows() != x.cols() || q.cols() != x.rows()) throw ValidationError("sweep_grid: P/Q do not match X");
  const Vector fscores = selection::feature_scores(p);
  const Vector iscores = selection::instance_scores(q);

  struct Cell {
    std::vector<std::size_t> features;
    std::vector<std::size_t> instances;
  };
  std::vector<Cell> cells;
  for (double ff : feature_fracs) {
    for (double fi : instance_fracs) {
      Cell cell{selection::select_top(fscores, selection::Fraction{ff}),
                selection::select_top(iscores, selection::Fraction{fi})};
      std::sort(cell.features.begin(), cell.features.end());
      std::sort(cell.instances.begin(), cell.instances.end());
      cells.push_back(std::move(cell));
    }
  }

  // Cells are independent and each writes only its own slot, so the result
  // does not depend on scheduling.
  std::vector<double> acc(cells.size(), 0.0);
  std::vector<std::exception_ptr> errors(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < cells.size(); c = next++) {
      try {
        acc[c] = cv_accuracy(x, labels, cells[c].features, cells[c].instances, options).mean;
      } catch (...) {
        errors[c] = std::current_exception();
      }
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(cells.size(), std::max(1u, std::thread::hardware_concurrency()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Matrix grid(static_cast<Eigen::Index>(feature_fracs.size()), static_cast<Eigen::Index>(instance_fracs.size()));
  for (Eigen::Index i = 0; i < grid.rows(); ++i)
    for (Eigen::Index j = 0; j < grid.cols(); ++j) grid(i, j) = acc[std::size_t(i * grid.cols() + j)];
  return grid;
}

}  // namespace uiss::eval
