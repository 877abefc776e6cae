#pragma once

#include <array>
#include <utility>

namespace leoscale {

/// Binary entropy h(x) in bits, with h(0) = h(1) = 0 by continuity.
/// Throws std::domain_error for x outside [0, 1].
double binary_entropy(double x);

/// Per-slot failure/recovery probabilities of a single ISL and the
/// quantities derived from them. Boundary values are rejected: the chain
/// must be able to both fail and recover.
class LinkDynamics {
 public:
  LinkDynamics(double alpha, double beta);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double mu() const { return 1.0 - alpha_ - beta_; }
  double pi0() const { return alpha_ / (alpha_ + beta_); }
  double pi1() const { return beta_ / (alpha_ + beta_); }

 private:
  double alpha_;
  double beta_;
};

/// Stationary distribution as (pi0, pi1).
std::pair<double, double> steady_state(const LinkDynamics& dyn);

/// ISL maintenance period: a finite positive number of slots, or the
/// infinite-period limit, which is a distinct analytic case rather than a
/// large sentinel value.
class MaintenancePolicy {
 public:
  static MaintenancePolicy finite(int period);
  static MaintenancePolicy infinite() { return MaintenancePolicy(-1); }

  bool is_infinite() const { return period_ < 0; }
  int period() const;  // throws std::logic_error when infinite

 private:
  explicit MaintenancePolicy(int period) : period_(period) {}
  int period_;
};

/// Row-stochastic 2x2 matrix; p[s][s'] = P(X(t+k)=s' | X(t)=s).
struct TransitionMatrix {
  std::array<std::array<double, 2>, 2> p;
};

/// Closed-form k-step transition probabilities. Requires k >= 1.
TransitionMatrix k_step_transition(const LinkDynamics& dyn, int k);

/// P(link ON after k slots | link was in prior_state), prior_state in {0,1}.
double belief(const LinkDynamics& dyn, int prior_state, int k);

/// Per-slot entropy lower bound on the consensus overhead of one ISL,
/// computed from raw probabilities. Tolerates degenerate alpha/beta in
/// [0, 1] (arising from estimation) as long as alpha + beta > 0.
double consensus_rate(double alpha, double beta);
double consensus_lower_bound_raw(double alpha, double beta,
                                 const MaintenancePolicy& policy);

/// Entropy lower bound H_bar_k on the per-slot consensus overhead: the
/// joint entropy of a k-slot state sequence divided by k, or the entropy
/// rate for the infinite-period limit.
double consensus_lower_bound(const LinkDynamics& dyn,
                             const MaintenancePolicy& policy);

enum class Region { I, II, III, IV, V };

const char* region_name(Region region);

/// Thresholds delimiting the evolution-behavior regions in the
/// (alpha, beta) plane. Defaults follow the reference classification.
struct RegionThresholds {
  double eps1 = 1e-6;
  double eps2 = 1e-4;
  double eps3 = 0.7;
  double eps4 = 0.9;

  void validate() const;  // throws std::invalid_argument when not ordered
};

/// Classify (alpha, beta) into Regions I-V. Pairs outside the analyzed
/// universe fall into Region V.
Region classify_region(const LinkDynamics& dyn,
                       const RegionThresholds& thr = RegionThresholds{});

/// Region-wise closed-form approximation of the consensus bound.
/// Region V has no closed form and throws std::invalid_argument.
double region_consensus_approx(Region region, const LinkDynamics& dyn, int k);

}  // namespace leoscale
