#pragma once

// Turns fitted selectors into rankings: feature importance is the row norm
// of P, instance importance the column norm of Q, and outliers are the
// lowest-ranked instances.

#include "uiss/graph.hpp"
#include "uiss/numerics.hpp"

#include <cstddef>
#include <variant>
#include <vector>

namespace uiss::selection {

struct SelectionResult {
  Vector feature_scores;
  Vector instance_scores;
  std::vector<std::size_t> selected_features;
  std::vector<std::size_t> selected_instances;
  std::vector<std::vector<std::size_t>> components;
};

Vector feature_scores(const Matrix& p);
Vector instance_scores(const Matrix& q);
// max(scores) - scores.
Vector outlier_scores(const Vector& instance_scores);

// Either an absolute count or a fraction in (0, 1]. Fractions floor with a
// minimum of one item.
struct Count {
  std::size_t value;
};
struct Fraction {
  double value;
};
using Budget = std::variant<Count, Fraction>;

std::size_t resolve_budget(const Budget& budget, std::size_t size);

// All indices sorted by descending score, ties by ascending index.
std::vector<std::size_t> rank_descending(const Vector& scores);
std::vector<std::size_t> select_top(const Vector& scores, const Budget& budget);

std::vector<std::vector<std::size_t>> selected_subgraph(const graph::NetworkStructure& net,
                                                        const std::vector<std::size_t>& selected_features);

SelectionResult select(const Matrix& p, const Matrix& q, const graph::NetworkStructure& net,
                       const Budget& feature_budget, const Budget& instance_budget);

struct Embedding {
  Matrix coords;            // n x d
  Vector explained_ratio;   // d, share of total variance per component
};

// Top-d principal components of X P after subtracting its mean row. Each component is
// sign-fixed so its largest-magnitude loading is positive.
Embedding embed(const Matrix& x, const Matrix& p, Eigen::Index d);

}  // namespace uiss::selection
