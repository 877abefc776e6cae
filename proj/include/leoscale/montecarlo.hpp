#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "leoscale/link_dynamics.hpp"
#include "leoscale/routing.hpp"
#include "leoscale/topology.hpp"

namespace leoscale {

struct SimConfig {
  int warmup_slots = 100;   // t0
  int measure_slots = 200;  // t1
  int replications = 50;
  std::uint64_t master_seed = 1;
  MaintenancePolicy maintenance = MaintenancePolicy::finite(10);
  double sigma = 1e-12;
  // Redraw the source-destination permutation every measurement slot.
  // When false, one permutation is drawn per replication.
  bool refresh_traffic_each_slot = true;
  // Pool transition counts across all replications (and all n in a sweep)
  // before estimating (alpha, beta); per-replication estimation otherwise.
  bool pooled_estimation = false;
  int threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// Pooled per-slot link transition counts; index is (from, to).
struct TransitionCounts {
  std::uint64_t n00 = 0, n01 = 0, n10 = 0, n11 = 0;

  TransitionCounts& operator+=(const TransitionCounts& o);
};

struct DynamicsEstimate {
  std::optional<double> alpha_hat;  // empty when no ON-state samples
  std::optional<double> beta_hat;   // empty when no OFF-state samples
};

/// Maximum-likelihood estimates alpha = N10/(N10+N11), beta = N01/(N01+N00).
DynamicsEstimate estimate_dynamics(const TransitionCounts& counts);

struct ReplicationResult {
  int n = 0;
  double avg_hops = 0.0;  // unreachable pairs recorded as 0
  double reachable_fraction = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
  // True when an estimate denominator was empty and the configured
  // dynamics were substituted for the missing parameter.
  bool estimate_substituted = false;
  double tau_sim = 0.0;
  double mean_connectivity = 0.0;
  double mean_on_links = 0.0;
  TransitionCounts counts;
};

/// Simulated scalability from measured quantities:
/// 16*sqrt(n) / (1 + sigma*n*avg_hops + 4*n*hk).
double tau_from_measurement(double n, double sigma, double avg_hops, double hk);

/// One full replication: all-ON build, t0 warm-up slots, then t1
/// measurement slots of evolve + per-pair shortest hops + transition
/// counting. Seeded from (master_seed, replication_index) only.
ReplicationResult run_replication(const ConstellationGeometry& geometry,
                                  const LinkDynamics& dyn, const SimConfig& cfg,
                                  int replication_index);

struct SweepRecord {
  int n = 0;
  double tau_mean = 0.0;
  double tau_std = 0.0;
  double tau_analytic = 0.0;
  double avg_hops = 0.0;
  double reachable_fraction = 0.0;
  double alpha_hat = 0.0;
  double beta_hat = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;
  // Estimates pooled over every replication of every n (meaningful because
  // link dynamics are homogeneous); populated in both estimation modes.
  double pooled_alpha_hat = 0.0;
  double pooled_beta_hat = 0.0;
  bool pooled_estimate_substituted = false;
};

/// Replication sweep over constellation sizes. Every n must be a perfect
/// square. Replications run in parallel but aggregation is an ordered
/// reduction, so output depends only on (inputs, master_seed).
SweepResult sweep(const std::vector<int>& n_list, const LinkDynamics& dyn,
                  const SimConfig& cfg);

struct FitResult {
  double a_hat = 0.0;
  double b_hat = 0.0;
  double residual = 0.0;  // sum of squared errors of the linearized system
  bool clamped = false;   // a negative solution was clamped to zero
};

/// Least-squares fit of y(n) = 16*sqrt(n)/tau(n) - 1 against
/// a * (n * avg_hops(n)) + b * (4 * n * H_bar_k(alpha, beta)) via the
/// normal equations. Needs >= 2 sweep points with distinct n.
FitResult fit_overheads(const SweepResult& sweep_result, int k,
                        const LinkDynamics& dyn);

struct TrajectoryPoint {
  int slot = 0;
  int on_links = 0;
  double connectivity = 0.0;
};

/// Per-slot ON-link count and connectivity after each evolution step,
/// starting from the all-ON topology.
std::vector<TrajectoryPoint> trajectory(const ConstellationGeometry& geometry,
                                        const LinkDynamics& dyn,
                                        int total_slots, std::uint64_t seed);

}  // namespace leoscale
