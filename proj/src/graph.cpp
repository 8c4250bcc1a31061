#include "uiss/graph.hpp"

#include "uiss/error.hpp"
#include "uiss/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <utility>

namespace uiss::graph {

NetworkStructure::NetworkStructure(std::size_t node_count, const std::vector<Edge>& edges)
    : node_count_(node_count), neighbors_(node_count) {
  if (node_count == 0) throw ValidationError("network needs at least one node");
  std::map<std::pair<std::size_t, std::size_t>, double> merged;
  for (const Edge& e : edges) {
    if (e.u >= node_count || e.v >= node_count) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") out of range for " +
                            std::to_string(node_count) + " nodes");
    }
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) + ") has invalid weight");
    }
    merged[std::minmax(e.u, e.v)] += e.weight;
  }

  const auto m = static_cast<Eigen::Index>(node_count);
  adjacency_ = Matrix::Zero(m, m);
  edges_.reserve(merged.size());
  for (const auto& [key, w] : merged) {
    edges_.push_back({key.first, key.second, w});
    const auto a = static_cast<Eigen::Index>(key.first);
    const auto b = static_cast<Eigen::Index>(key.second);
    adjacency_(a, b) = w;
    adjacency_(b, a) = w;
    if (w > 0.0) {
      neighbors_[key.first].push_back(key.second);
      neighbors_[key.second].push_back(key.first);
    }
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

Laplacian build_laplacian(const NetworkStructure& net) {
  const Matrix& adj = net.adjacency();
  Matrix lap = -adj;
  lap.diagonal() = adj.rowwise().sum();
  return {std::move(lap)};
}

double dirichlet_energy(const Matrix& p, const Laplacian& lap) {
  if (p.rows() != lap.matrix.rows()) {
    throw ValidationError("dirichlet_energy: P has " + std::to_string(p.rows()) + " rows, graph has " +
                          std::to_string(lap.matrix.rows()) + " nodes");
  }
  return (p.transpose() * lap.matrix * p).trace();
}

std::vector<std::vector<std::size_t>> connected_components(const NetworkStructure& net,
                                                           const std::vector<std::size_t>& nodes) {
  const std::size_t m = net.node_count();
  std::vector<char> in_set(m, 0);
  for (std::size_t v : nodes) {
    if (v >= m) throw ValidationError("node " + std::to_string(v) + " out of range");
    in_set[v] = 1;
  }

  std::vector<char> seen(m, 0);
  std::vector<std::vector<std::size_t>> components;
  for (std::size_t start = 0; start < m; ++start) {
    if (!in_set[start] || seen[start]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> frontier;
    frontier.push(start);
    seen[start] = 1;
    while (!frontier.empty()) {
      const std::size_t u = frontier.front();
      frontier.pop();
      comp.push_back(u);
      for (std::size_t v : net.neighbors()[u]) {
        if (in_set[v] && !seen[v]) {
          seen[v] = 1;
          frontier.push(v);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  // Components were discovered in order of their smallest node.
  std::stable_sort(components.begin(), components.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return components;
}

NetworkStructure parse_edge_list(std::istream& in, std::optional<std::size_t> node_count,
                                 const std::string& source) {
  std::vector<Edge> edges;
  std::size_t max_index = 0;
  bool any = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tokens = io::split_fields(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2 && tokens.size() != 3) {
      throw ParseError(source, lineno, "expected 'u v [weight]'");
    }
    Edge e;
    e.u = io::parse_index(tokens[0], source, lineno);
    e.v = io::parse_index(tokens[1], source, lineno);
    if (tokens.size() == 3) e.weight = io::parse_real(tokens[2], source, lineno);
    if (e.weight < 0.0) throw ParseError(source, lineno, "negative edge weight");
    if (e.u == e.v) throw ParseError(source, lineno, "self-loop");
    if (node_count && (e.u >= *node_count || e.v >= *node_count)) {
      throw ParseError(source, lineno, "node index out of range for " + std::to_string(*node_count) + " nodes");
    }
    max_index = std::max({max_index, e.u, e.v});
    any = true;
    edges.push_back(e);
  }
  const std::size_t m = node_count ? *node_count : (any ? max_index + 1 : 0);
  return NetworkStructure(m, edges);
}

NetworkStructure read_edge_list(const std::string& path, std::optional<std::size_t> node_count) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_edge_list(in, node_count, path);
}

void write_edge_list(std::ostream& out, const NetworkStructure& net) {
  out << "# nodes " << net.node_count() << "\n";
  for (const Edge& e : net.edges()) out << e.u << ' ' << e.v << ' ' << io::format_real(e.weight) << '\n';
}

}  // namespace uiss::graph
