#include "uiss/selection.hpp"

#include "uiss/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace uiss::selection {

Vector feature_scores(const Matrix& p) { return numerics::row_norms(p); }

Vector instance_scores(const Matrix& q) { return numerics::col_norms(q); }

Vector outlier_scores(const Vector& instance_scores) {
  if (instance_scores.size() == 0) return {};
  return Vector::Constant(instance_scores.size(), instance_scores.maxCoeff()) - instance_scores;
}

std::size_t resolve_budget(const Budget& budget, std::size_t size) {
  if (size == 0) throw ValidationError("cannot select from an empty set");
  if (const auto* c = std::get_if<Count>(&budget)) {
    if (c->value == 0 || c->value > size) {
      throw ValidationError("budget " + std::to_string(c->value) + " out of range [1, " + std::to_string(size) + "]");
    }
    return c->value;
  }
  const double f = std::get<Fraction>(budget).value;
  if (!(f > 0.0) || f > 1.0) throw ValidationError("budget fraction must lie in (0, 1]");
  const auto k = static_cast<std::size_t>(std::floor(f * static_cast<double>(size)));
  return std::clamp<std::size_t>(k, 1, size);
}

std::vector<std::size_t> rank_descending(const Vector& scores) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(scores.size()));
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return scores[long(a)] > scores[long(b)]; });
  return idx;
}

std::vector<std::size_t> select_top(const Vector& scores, const Budget& budget) {
  const std::size_t k = resolve_budget(budget, static_cast<std::size_t>(scores.size()));
  auto idx = rank_descending(scores);
  idx.resize(k);
  return idx;
}

std::vector<std::vector<std::size_t>> selected_subgraph(const graph::NetworkStructure& net,
                                                        const std::vector<std::size_t>& selected_features) {
  return graph::connected_components(net, selected_features);
}

SelectionResult select(const Matrix& p, const Matrix& q, const graph::NetworkStructure& net,
                       const Budget& feature_budget, const Budget& instance_budget) {
  if (static_cast<std::size_t>(p.rows()) != net.node_count()) {
    throw ValidationError("P has " + std::to_string(p.rows()) + " rows but the network has " +
                          std::to_string(net.node_count()) + " nodes");
  }
  SelectionResult r;
  r.feature_scores = feature_scores(p);
  r.instance_scores = instance_scores(q);
  r.selected_features = select_top(r.feature_scores, feature_budget);
  r.selected_instances = select_top(r.instance_scores, instance_budget);
  r.components = selected_subgraph(net, r.selected_features);
  return r;
}

Embedding embed(const Matrix& x, const Matrix& p, Eigen::Index d) {
  if (x.cols() != p.rows()) throw ValidationError("embed: X and P dimensions disagree");
  if (d < 1 || d > p.cols()) throw ValidationError("embed: d must lie in [1, k]");
  const Matrix y = x * p;
  const Matrix centred = y.rowwise() - y.colwise().mean();
  const Matrix cov = (centred.transpose() * centred) / static_cast<double>(std::max<Eigen::Index>(1, y.rows() - 1));
  const auto evd = numerics::sym_evd(cov);

  Matrix loadings = evd.eigvecs.leftCols(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    Eigen::Index arg = 0;
    loadings.col(j).cwiseAbs().maxCoeff(&arg);
    if (loadings(arg, j) < 0.0) loadings.col(j) *= -1.0;
  }

  Embedding e;
  e.coords = centred * loadings;
  const double total = evd.eigvals.values().sum();
  e.explained_ratio = total > 0.0 ? Vector(evd.eigvals.values().head(d) / total) : Vector::Zero(d);
  return e;
}

}  // namespace uiss::selection
