#include "leoscale/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "leoscale/random.hpp"
#include "leoscale/scalability.hpp"

namespace leoscale {

void SimConfig::validate() const {
  if (warmup_slots < 1) throw std::invalid_argument("SimConfig: warmup_slots must be >= 1");
  if (measure_slots < 1) throw std::invalid_argument("SimConfig: measure_slots must be >= 1");
  if (replications < 1) throw std::invalid_argument("SimConfig: replications must be >= 1");
  if (!(sigma >= 0.0)) throw std::invalid_argument("SimConfig: sigma must be >= 0");
  if (threads < 0) throw std::invalid_argument("SimConfig: threads must be >= 0");
}

TransitionCounts& TransitionCounts::operator+=(const TransitionCounts& o) {
  n00 += o.n00;
  n01 += o.n01;
  n10 += o.n10;
  n11 += o.n11;
  return *this;
}

DynamicsEstimate estimate_dynamics(const TransitionCounts& counts) {
  DynamicsEstimate est;
  const std::uint64_t on_denom = counts.n10 + counts.n11;
  const std::uint64_t off_denom = counts.n00 + counts.n01;
  if (on_denom > 0) {
    est.alpha_hat = static_cast<double>(counts.n10) / static_cast<double>(on_denom);
  }
  if (off_denom > 0) {
    est.beta_hat = static_cast<double>(counts.n01) / static_cast<double>(off_denom);
  }
  return est;
}

double tau_from_measurement(double n, double sigma, double avg_hops, double hk) {
  if (!(n >= 1.0) || !(sigma >= 0.0) || !(avg_hops >= 0.0) || !(hk >= 0.0)) {
    throw std::domain_error("tau_from_measurement: inputs must be non-negative");
  }
  return 16.0 * std::sqrt(n) / (1.0 + sigma * n * avg_hops + 4.0 * n * hk);
}

namespace {

// Resolve possibly-missing estimates against the configured dynamics.
// Returns true when any substitution happened.
bool resolve_estimate(const DynamicsEstimate& est, const LinkDynamics& dyn,
                      double& alpha_hat, double& beta_hat) {
  bool substituted = false;
  alpha_hat = est.alpha_hat.value_or(dyn.alpha());
  beta_hat = est.beta_hat.value_or(dyn.beta());
  if (!est.alpha_hat || !est.beta_hat) substituted = true;
  // Both estimates present but zero: the chain looked frozen during the
  // window and the entropy bound is undefined; fall back entirely.
  if (alpha_hat + beta_hat == 0.0) {
    alpha_hat = dyn.alpha();
    beta_hat = dyn.beta();
    substituted = true;
  }
  return substituted;
}

}  // namespace

ReplicationResult run_replication(const ConstellationGeometry& geometry,
                                  const LinkDynamics& dyn, const SimConfig& cfg,
                                  int replication_index) {
  cfg.validate();
  geometry.validate();
  if (!geometry.is_square()) {
    throw std::invalid_argument("run_replication: geometry must be square (M = P)");
  }
  const int n = geometry.satellite_count();
  std::mt19937_64 rng(derive_seed(cfg.master_seed,
                                  static_cast<std::uint64_t>(replication_index)));
  TorusTopology topo(geometry);
  for (int t = 0; t < cfg.warmup_slots; ++t) topo.step(dyn, rng);

  TrafficPattern traffic;
  if (!cfg.refresh_traffic_each_slot) traffic = uniform_pairs(n, rng);

  TransitionCounts counts;
  std::vector<std::uint8_t> prev;
  double hop_sum = 0.0;
  double reachable_sum = 0.0;
  double conn_sum = 0.0;
  double on_sum = 0.0;

  for (int t = 0; t < cfg.measure_slots; ++t) {
    prev = topo.link_states();
    topo.step(dyn, rng);
    const auto& cur = topo.link_states();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      if (prev[i]) {
        if (cur[i]) ++counts.n11; else ++counts.n10;
      } else {
        if (cur[i]) ++counts.n01; else ++counts.n00;
      }
    }
    if (cfg.refresh_traffic_each_slot) traffic = uniform_pairs(n, rng);
    const HopMeasurement m = measured_avg_hops(topo, traffic);
    hop_sum += m.avg_hops;
    reachable_sum += m.reachable_fraction;
    conn_sum += topo.connectivity();
    on_sum += topo.on_link_count();
  }

  ReplicationResult r;
  r.n = n;
  r.counts = counts;
  r.avg_hops = hop_sum / cfg.measure_slots;
  r.reachable_fraction = reachable_sum / cfg.measure_slots;
  r.mean_connectivity = conn_sum / cfg.measure_slots;
  r.mean_on_links = on_sum / cfg.measure_slots;
  r.estimate_substituted =
      resolve_estimate(estimate_dynamics(counts), dyn, r.alpha_hat, r.beta_hat);
  const double hk =
      consensus_lower_bound_raw(r.alpha_hat, r.beta_hat, cfg.maintenance);
  r.tau_sim = tau_from_measurement(n, cfg.sigma, r.avg_hops, hk);
  return r;
}

SweepResult sweep(const std::vector<int>& n_list, const LinkDynamics& dyn,
                  const SimConfig& cfg) {
  cfg.validate();
  if (n_list.empty()) throw std::invalid_argument("sweep: empty n list");
  std::vector<ConstellationGeometry> geometries;
  geometries.reserve(n_list.size());
  for (int n : n_list) {
    try {
      geometries.push_back(ConstellationGeometry::square(n));
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("sweep: n=" + std::to_string(n) +
                                  " is not a perfect square (side >= 3)");
    }
  }

  const std::size_t reps = static_cast<std::size_t>(cfg.replications);
  std::vector<std::vector<ReplicationResult>> results(
      n_list.size(), std::vector<ReplicationResult>(reps));

  const std::size_t total_tasks = n_list.size() * reps;
  unsigned worker_count = cfg.threads > 0
                              ? static_cast<unsigned>(cfg.threads)
                              : std::thread::hardware_concurrency();
  if (worker_count == 0) worker_count = 1;
  worker_count =
      static_cast<unsigned>(std::min<std::size_t>(worker_count, total_tasks));

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]() {
    for (;;) {
      const std::size_t task = next.fetch_add(1);
      if (task >= total_tasks) return;
      const std::size_t ni = task / reps;
      const int rep = static_cast<int>(task % reps);
      try {
        results[ni][rep] = run_replication(geometries[ni], dyn, cfg, rep);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> workers;
  for (unsigned w = 1; w < worker_count; ++w) workers.emplace_back(work);
  work();
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);

  SweepResult out;
  TransitionCounts pooled;
  for (const auto& per_n : results) {
    for (const auto& r : per_n) pooled += r.counts;
  }
  out.pooled_estimate_substituted =
      resolve_estimate(estimate_dynamics(pooled), dyn, out.pooled_alpha_hat,
                       out.pooled_beta_hat);
  const double hk_pooled = consensus_lower_bound_raw(
      out.pooled_alpha_hat, out.pooled_beta_hat, cfg.maintenance);
  const double hk_true = consensus_lower_bound(dyn, cfg.maintenance);

  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const auto& per_n = results[ni];
    SweepRecord rec;
    rec.n = n_list[ni];

    TransitionCounts n_counts;
    double hop_sum = 0.0, reach_sum = 0.0;
    for (const auto& r : per_n) {
      n_counts += r.counts;
      hop_sum += r.avg_hops;
      reach_sum += r.reachable_fraction;
    }
    rec.avg_hops = hop_sum / static_cast<double>(reps);
    rec.reachable_fraction = reach_sum / static_cast<double>(reps);
    double a_hat, b_hat;
    resolve_estimate(estimate_dynamics(n_counts), dyn, a_hat, b_hat);
    rec.alpha_hat = a_hat;
    rec.beta_hat = b_hat;

    double tau_sum = 0.0, tau_sq_sum = 0.0;
    for (const auto& r : per_n) {
      const double tau = cfg.pooled_estimation
                             ? tau_from_measurement(rec.n, cfg.sigma,
                                                    r.avg_hops, hk_pooled)
                             : r.tau_sim;
      tau_sum += tau;
      tau_sq_sum += tau * tau;
    }
    rec.tau_mean = tau_sum / static_cast<double>(reps);
    const double var =
        std::max(0.0, tau_sq_sum / static_cast<double>(reps) -
                          rec.tau_mean * rec.tau_mean);
    rec.tau_std = std::sqrt(var);
    rec.tau_analytic = tau_upper(rec.n, cfg.sigma, hk_true);
    out.records.push_back(rec);
  }
  return out;
}

FitResult fit_overheads(const SweepResult& sweep_result, int k,
                        const LinkDynamics& dyn) {
  const auto& recs = sweep_result.records;
  if (recs.size() < 2) {
    throw std::invalid_argument("fit_overheads: need at least 2 sweep points");
  }
  bool distinct = false;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    if (recs[i].n != recs[0].n) distinct = true;
  }
  if (!distinct) {
    throw std::invalid_argument("fit_overheads: sweep points must span distinct n");
  }
  const double hk = consensus_lower_bound(dyn, MaintenancePolicy::finite(k));

  double s11 = 0.0, s12 = 0.0, s22 = 0.0, b1 = 0.0, b2 = 0.0;
  std::vector<double> xs1, xs2, ys;
  for (const auto& rec : recs) {
    if (!(rec.tau_mean > 0.0)) {
      throw std::invalid_argument("fit_overheads: non-positive tau in sweep");
    }
    const double n = static_cast<double>(rec.n);
    const double y = 16.0 * std::sqrt(n) / rec.tau_mean - 1.0;
    const double x1 = n * rec.avg_hops;
    const double x2 = 4.0 * n * hk;
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    b1 += x1 * y;
    b2 += x2 * y;
    xs1.push_back(x1);
    xs2.push_back(x2);
    ys.push_back(y);
  }
  const double det = s11 * s22 - s12 * s12;
  if (!(std::abs(det) > 1e-12 * s11 * s22)) {
    throw std::runtime_error("fit_overheads: singular normal equations");
  }
  FitResult fit;
  fit.a_hat = (b1 * s22 - b2 * s12) / det;
  fit.b_hat = (b2 * s11 - b1 * s12) / det;
  if (fit.a_hat < 0.0) {
    fit.a_hat = 0.0;
    fit.clamped = true;
  }
  if (fit.b_hat < 0.0) {
    fit.b_hat = 0.0;
    fit.clamped = true;
  }
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double e = ys[i] - fit.a_hat * xs1[i] - fit.b_hat * xs2[i];
    fit.residual += e * e;
  }
  return fit;
}

std::vector<TrajectoryPoint> trajectory(const ConstellationGeometry& geometry,
                                        const LinkDynamics& dyn,
                                        int total_slots, std::uint64_t seed) {
  geometry.validate();
  if (total_slots < 1) {
    throw std::invalid_argument("trajectory: total_slots must be >= 1");
  }
  std::mt19937_64 rng(derive_seed(seed, 0));
  TorusTopology topo(geometry);
  std::vector<TrajectoryPoint> points;
  points.reserve(static_cast<std::size_t>(total_slots));
  for (int t = 1; t <= total_slots; ++t) {
    topo.step(dyn, rng);
    points.push_back({t, topo.on_link_count(), topo.connectivity()});
  }
  return points;
}

}  // namespace leoscale
