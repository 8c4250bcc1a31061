#pragma once

// Shared feature network: weighted undirected graph over the m features,
// its Laplacian, the Dirichlet energy of a node embedding and connectivity
// queries on node subsets.

#include "uiss/numerics.hpp"

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace uiss::graph {

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  double weight = 1.0;
};

// Immutable after construction. Duplicate edges are merged by summing their
// weights; self-loops and negative weights are rejected.
class NetworkStructure {
 public:
  NetworkStructure(std::size_t node_count, const std::vector<Edge>& edges);

  std::size_t node_count() const { return node_count_; }
  // Merged edge list with u < v, sorted lexicographically.
  const std::vector<Edge>& edges() const { return edges_; }
  const Matrix& adjacency() const { return adjacency_; }
  const std::vector<std::vector<std::size_t>>& neighbors() const { return neighbors_; }

 private:
  std::size_t node_count_;
  std::vector<Edge> edges_;
  Matrix adjacency_;
  std::vector<std::vector<std::size_t>> neighbors_;
};

struct Laplacian {
  Matrix matrix;  // D - M
};

Laplacian build_laplacian(const NetworkStructure& net);

// Tr(P^T L P).
double dirichlet_energy(const Matrix& p, const Laplacian& lap);

// Maximal connected components of the subgraph induced by `nodes`, largest
// first; equal sizes are ordered by their smallest node. Nodes within a
// component are sorted ascending.
std::vector<std::vector<std::size_t>> connected_components(const NetworkStructure& net,
                                                           const std::vector<std::size_t>& nodes);

// Text edge list: "u v [weight]" per line, 0-based, '#' starts a comment.
// Without an explicit node count the graph spans max index + 1 nodes.
NetworkStructure parse_edge_list(std::istream& in, std::optional<std::size_t> node_count,
                                 const std::string& source = "<edges>");
NetworkStructure read_edge_list(const std::string& path, std::optional<std::size_t> node_count);
void write_edge_list(std::ostream& out, const NetworkStructure& net);

}  // namespace uiss::graph
