#include "uiss/synth.hpp"

#include "uiss/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <random>

namespace uiss::synth {

namespace {

// Independent streams per generation stage so that changing one stage's
// consumption does not shift the others.
enum Stream : std::uint64_t { kGraph = 1, kGroundTruth = 2, kInstances = 3, kOutliers = 4 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

}  // namespace

void SynthConfig::validate() const {
  if (m < 2) throw ValidationError("synth: m must be >= 2");
  if (n < 2) throw ValidationError("synth: n must be >= 2");
  if (!(tau > 0.0)) throw ValidationError("synth: tau must be > 0");
  if (gt_size < 1 || gt_size >= m) throw ValidationError("synth: gt_size must lie in [1, m)");
  if (!(noise_sigma >= 0.0)) throw ValidationError("synth: noise_sigma must be >= 0");
}

graph::NetworkStructure gen_geometric_graph(std::size_t m, double tau, std::uint64_t seed) {
  if (m < 2) throw ValidationError("geometric graph needs m >= 2");
  auto rng = make_rng(seed, kGraph);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::array<double, 2>> pos(m);
  for (auto& p : pos) {
    p[0] = unit(rng);
    p[1] = unit(rng);
  }
  std::vector<graph::Edge> edges;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      if (std::hypot(pos[a][0] - pos[b][0], pos[a][1] - pos[b][1]) < tau) edges.push_back({a, b, 1.0});
    }
  }
  return graph::NetworkStructure(m, edges);
}

std::vector<std::size_t> bfs_ball(const graph::NetworkStructure& net, std::size_t start, std::size_t size) {
  if (start >= net.node_count()) throw ValidationError("bfs_ball: start node out of range");
  std::vector<char> seen(net.node_count(), 0);
  std::vector<std::size_t> order;
  std::queue<std::size_t> frontier;
  frontier.push(start);
  seen[start] = 1;
  while (!frontier.empty() && order.size() < size) {
    const std::size_t u = frontier.front();
    frontier.pop();
    order.push_back(u);
    for (std::size_t v : net.neighbors()[u]) {
      if (!seen[v]) {
        seen[v] = 1;
        frontier.push(v);
      }
    }
  }
  return order;
}

std::vector<std::size_t> pick_gt_subgraph(const graph::NetworkStructure& net, std::size_t gt_size,
                                          std::uint64_t seed) {
  if (gt_size == 0) throw ValidationError("gt_size must be >= 1");
  std::vector<std::size_t> all(net.node_count());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const auto comps = graph::connected_components(net, all);
  const auto& largest = comps.front();
  if (largest.size() < gt_size) {
    throw GenerationError("largest component has " + std::to_string(largest.size()) + " nodes, need " +
                          std::to_string(gt_size));
  }
  auto rng = make_rng(seed, kGroundTruth);
  std::uniform_int_distribution<std::size_t> pick(0, largest.size() - 1);
  auto nodes = bfs_ball(net, largest[pick(rng)], gt_size);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

SynthDataset gen_instances(const graph::NetworkStructure& net, const std::vector<std::size_t>& gt_nodes,
                           const SynthConfig& config) {
  config.validate();
  const std::size_t m = net.node_count();
  const std::size_t n = config.n;
  std::vector<char> is_gt(m, 0);
  for (std::size_t v : gt_nodes) {
    if (v >= m) throw ValidationError("ground-truth node out of range");
    is_gt[v] = 1;
  }

  auto rng = make_rng(config.seed, kInstances);
  std::vector<int> labels(n, 0);
  for (std::size_t i = 0; i < n / 2 + n % 2; ++i) labels[i] = 1;
  std::shuffle(labels.begin(), labels.end(), rng);

  const double gt_mean = config.swap_noise_means ? 70.0 : 10.0;
  const double other_mean = config.swap_noise_means ? 10.0 : 70.0;
  std::uniform_real_distribution<double> pos_val(50.0, 100.0);
  std::uniform_real_distribution<double> neg_val(-100.0, -50.0);
  std::normal_distribution<double> noise(0.0, 1.0);

  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double base = 0.0;
      if (is_gt[j]) base = labels[i] == 1 ? pos_val(rng) : neg_val(rng);
      x(long(i), long(j)) = base + (is_gt[j] ? gt_mean : other_mean);
    }
  }
  if (config.noise_sigma > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) x(long(i), long(j)) += config.noise_sigma * noise(rng);
  }

  std::vector<std::size_t> gt_sorted = gt_nodes;
  std::sort(gt_sorted.begin(), gt_sorted.end());
  return SynthDataset{std::move(x), net, std::move(labels), std::move(gt_sorted), std::vector<bool>(n, false)};
}

SynthDataset inject_outliers(SynthDataset ds, std::size_t n_outliers, std::uint64_t seed) {
  if (n_outliers == 0) return ds;
  const Eigen::Index n0 = ds.X.rows();
  const Eigen::Index m = ds.X.cols();

  // Statistics over the rows that are not already outliers.
  double sum = 0.0;
  double count = 0.0;
  for (Eigen::Index i = 0; i < n0; ++i) {
    if (ds.outlier_flags[std::size_t(i)]) continue;
    sum += ds.X.row(i).sum();
    count += double(m);
  }
  const double mean = sum / count;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < n0; ++i) {
    if (ds.outlier_flags[std::size_t(i)]) continue;
    ss += (ds.X.row(i).array() - mean).square().sum();
  }
  const double sd = std::sqrt(ss / count);

  auto rng = make_rng(seed, kOutliers);
  std::normal_distribution<double> draw(mean, sd);
  Matrix grown(n0 + Eigen::Index(n_outliers), m);
  grown.topRows(n0) = ds.X;
  for (Eigen::Index i = n0; i < grown.rows(); ++i)
    for (Eigen::Index j = 0; j < m; ++j) grown(i, j) = draw(rng);
  ds.X = std::move(grown);
  ds.labels.insert(ds.labels.end(), n_outliers, kInvalidLabel);
  ds.outlier_flags.insert(ds.outlier_flags.end(), n_outliers, true);
  return ds;
}

SynthDataset generate(const SynthConfig& config) {
  config.validate();
  auto net = gen_geometric_graph(config.m, config.tau, config.seed);
  auto gt = pick_gt_subgraph(net, config.gt_size, config.seed);
  auto ds = gen_instances(net, gt, config);
  return inject_outliers(std::move(ds), config.n_outliers, config.seed);
}

}  // namespace uiss::synth
