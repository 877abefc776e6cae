#pragma once

#include <random>
#include <utility>
#include <vector>

#include "leoscale/topology.hpp"

namespace leoscale {

/// Returned by shortest_hops when no ON-link path exists.
inline constexpr int kUnreachable = -1;

/// One source-destination pair per satellite; destinations form a
/// fixed-point-free permutation of the satellite set.
struct TrafficPattern {
  std::vector<std::pair<int, int>> pairs;
};

/// Closed-form torus distance on the all-ON square torus of side m.
int analytic_hop_distance(int i, int j, int side);

/// Exact average hop count over all ordered pairs of the n-satellite square
/// torus under the uniform traffic pattern. n must be a perfect square >= 4.
double analytic_avg_hops(int n);

/// Minimum number of ON links on any src->dst path (BFS), or kUnreachable.
int shortest_hops(const TorusTopology& topology, int src, int dst);

/// Uniformly random fixed-point-free source-destination assignment.
/// Deterministic for a given engine state. Requires n >= 2.
TrafficPattern uniform_pairs(int n, std::mt19937_64& rng);

struct HopMeasurement {
  double avg_hops;           // unreachable pairs contribute 0 hops
  double reachable_fraction;
};

/// Average shortest-hop count over the pattern's pairs on the current
/// ON-link graph. Unreachable pairs are recorded as 0 hops; the reachable
/// fraction is reported alongside so connectivity collapse is visible.
HopMeasurement measured_avg_hops(const TorusTopology& topology,
                                 const TrafficPattern& traffic);

}  // namespace leoscale
