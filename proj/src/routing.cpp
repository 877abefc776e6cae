#include "leoscale/routing.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "leoscale/random.hpp"

namespace leoscale {

int analytic_hop_distance(int i, int j, int side) {
  if (side < 1) throw std::domain_error("analytic_hop_distance: side < 1");
  const int n = side * side;
  if (i < 0 || i >= n || j < 0 || j >= n) {
    throw std::domain_error("analytic_hop_distance: index out of range");
  }
  const int dx = std::abs(i / side - j / side);
  const int dy = std::abs(i % side - j % side);
  return std::min(dx, side - dx) + std::min(dy, side - dy);
}

double analytic_avg_hops(int n) {
  if (n < 4) throw std::domain_error("analytic_avg_hops: n must be >= 4");
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (side * side != n) {
    throw std::domain_error("analytic_avg_hops: n=" + std::to_string(n) +
                            " is not a perfect square");
  }
  if (side % 2 == 1) {
    return static_cast<double>(side) / 2.0;
  }
  return static_cast<double>(n) * side / (2.0 * (n - 1));
}

namespace {

// BFS on ON links with early exit once dst is dequeued.
int bfs_hops(const TorusTopology& topo, int src, int dst,
             std::vector<int>& dist, std::vector<int>& queue) {
  dist.assign(static_cast<std::size_t>(topo.satellite_count()), -1);
  queue.clear();
  dist[src] = 0;
  queue.push_back(src);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int v = queue[head];
    if (v == dst) return dist[v];
    for (const auto& nb : topo.neighbors(v)) {
      if (topo.link_on(nb.link) && dist[nb.satellite] < 0) {
        dist[nb.satellite] = dist[v] + 1;
        queue.push_back(nb.satellite);
      }
    }
  }
  return kUnreachable;
}

}  // namespace

int shortest_hops(const TorusTopology& topology, int src, int dst) {
  const int n = topology.satellite_count();
  if (src < 0 || src >= n || dst < 0 || dst >= n) {
    throw std::domain_error("shortest_hops: index out of range");
  }
  if (src == dst) return 0;
  std::vector<int> dist;
  std::vector<int> queue;
  queue.reserve(static_cast<std::size_t>(n));
  return bfs_hops(topology, src, dst, dist, queue);
}

TrafficPattern uniform_pairs(int n, std::mt19937_64& rng) {
  if (n < 2) throw std::domain_error("uniform_pairs: n must be >= 2");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  // Fisher-Yates with our own draws for cross-platform determinism.
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  // Resolve fixed points: rotate them among themselves; a lone fixed point
  // is swapped with a random other position (which cannot create a new one,
  // since perm^{-1}(f) = f for a fixed point f).
  std::vector<int> fixed;
  for (int i = 0; i < n; ++i) {
    if (perm[i] == i) fixed.push_back(i);
  }
  if (fixed.size() == 1) {
    const int f = fixed[0];
    int j = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n) - 1));
    if (j >= f) ++j;
    std::swap(perm[f], perm[j]);
  } else if (fixed.size() > 1) {
    const int first = perm[fixed[0]];
    for (std::size_t t = 0; t + 1 < fixed.size(); ++t) {
      perm[fixed[t]] = perm[fixed[t + 1]];
    }
    perm[fixed.back()] = first;
  }
  TrafficPattern pattern;
  pattern.pairs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) pattern.pairs.emplace_back(i, perm[i]);
  return pattern;
}

HopMeasurement measured_avg_hops(const TorusTopology& topology,
                                 const TrafficPattern& traffic) {
  const int n = topology.satellite_count();
  const std::size_t pair_count = traffic.pairs.size();
  if (pair_count == 0) return {0.0, 0.0};

  long long hop_sum = 0;
  std::size_t reachable = 0;

  const bool all_on = topology.on_link_count() == topology.link_count();
  if (all_on && topology.geometry().is_square()) {
    // On the intact square torus BFS distance equals the closed form.
    const int side = topology.geometry().planes;
    for (const auto& [src, dst] : traffic.pairs) {
      hop_sum += analytic_hop_distance(src, dst, side);
      ++reachable;
    }
  } else {
    std::vector<int> dist;
    std::vector<int> queue;
    queue.reserve(static_cast<std::size_t>(n));
    for (const auto& [src, dst] : traffic.pairs) {
      const int hops = (src == dst) ? 0 : bfs_hops(topology, src, dst, dist, queue);
      if (hops != kUnreachable) {
        hop_sum += hops;
        ++reachable;
      }
    }
  }
  return {static_cast<double>(hop_sum) / static_cast<double>(pair_count),
          static_cast<double>(reachable) / static_cast<double>(pair_count)};
}

}  // namespace leoscale
