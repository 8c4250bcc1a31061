#pragma once

// Synthetic network-instance benchmark: a random geometric graph in the unit
// square, a planted connected ground-truth subgraph whose values separate two
// hidden classes, per-group Gaussian noise and optional outlier instances.

#include "uiss/graph.hpp"
#include "uiss/numerics.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace uiss::synth {

// Class labels are 1 (positive) and 0 (negative); kInvalidLabel marks
// instances without a class (injected outliers).
inline constexpr int kInvalidLabel = -1;

struct SynthConfig {
  std::size_t m = 100;
  double tau = 0.2;
  std::size_t n = 400;
  std::size_t gt_size = 10;
  double noise_sigma = 5.0;
  std::size_t n_outliers = 0;
  std::uint64_t seed = 0;
  // Noise means: ground-truth nodes get 10 and the rest 70 unless swapped.
  bool swap_noise_means = false;

  void validate() const;
};

struct SynthDataset {
  Matrix X;
  graph::NetworkStructure net;
  std::vector<int> labels;
  std::vector<std::size_t> gt_nodes;  // ascending
  std::vector<bool> outlier_flags;
};

graph::NetworkStructure gen_geometric_graph(std::size_t m, double tau, std::uint64_t seed);

// First `size` nodes reached by breadth-first search from `start`, visiting
// neighbours in ascending order.
std::vector<std::size_t> bfs_ball(const graph::NetworkStructure& net, std::size_t start, std::size_t size);

// BFS ball of exactly gt_size nodes around a seeded random node of the
// largest component. Returned ascending.
std::vector<std::size_t> pick_gt_subgraph(const graph::NetworkStructure& net, std::size_t gt_size,
                                          std::uint64_t seed);

SynthDataset gen_instances(const graph::NetworkStructure& net, const std::vector<std::size_t>& gt_nodes,
                           const SynthConfig& config);

// Appends n_outliers rows of i.i.d. Gaussian entries with the mean and
// standard deviation of all existing (non-outlier) entries.
SynthDataset inject_outliers(SynthDataset ds, std::size_t n_outliers, std::uint64_t seed);

// Full pipeline: graph, ground truth, instances, outliers.
SynthDataset generate(const SynthConfig& config);

}  // namespace uiss::synth
