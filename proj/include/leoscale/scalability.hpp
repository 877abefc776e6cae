#pragma once

#include "leoscale/link_dynamics.hpp"

namespace leoscale {

/// Per-hop contention overhead in units of the 1 Gbps link rate.
struct OverheadModel {
  double sigma = 0.0;
  static constexpr double kLinkRateGbps = 1.0;

  void validate() const;  // sigma must be finite and >= 0
};

/// Scalability upper bound 16*sqrt(n) / (1 + sigma*n^1.5 + 4*n*hk),
/// with n treated as a continuous real.
double tau_upper(double n, double sigma, double hk);

struct TauEnvelope {
  double tau_1;    // consensus bound h(pi1), the k = 1 case
  double tau_inf;  // consensus bound at the infinite-period limit
};

/// Bracket tau(n, k) between its k = 1 and k -> infinity evaluations.
TauEnvelope tau_envelope(double n, double sigma, const LinkDynamics& dyn);

/// tau_inf(n) - tau_1(n); the scalability headroom obtainable by growing k.
double delta_tau(double n, double sigma, const LinkDynamics& dyn);

/// Region-wise closed-form scalability bound (Regions I-IV only).
double region_tau_bound(Region region, double n, double sigma,
                        const LinkDynamics& dyn, int k);

/// Unique root of g(n) = 2*sigma*n^1.5 + 4*n*hk - 1, the constellation size
/// maximizing tau_upper. Relative tolerance 1e-12. Throws when
/// sigma = hk = 0 (tau grows without bound).
double solve_optimal_n(double sigma, double hk);

enum class ExtremeScenario { kContentionFree, kConsensusFree };

/// Stated closed-form approximations of the optimal size in the two
/// extreme scenarios: 1/hk when contention-free, (1/(2*sigma))^(2/3) when
/// consensus-free. Note the contention-free form differs by a factor 4
/// from the exact root 1/(4*hk).
double n_star_approx(ExtremeScenario scenario, double sigma, double hk);

struct MaxScalability {
  double n_star;
  double tau_at_n_star;      // tau_upper evaluated at the root (authoritative)
  double eight_sqrt_n_star;  // 8*sqrt(n_star), for comparison; equal only at sigma = 0
};

MaxScalability max_scalability(double sigma, double hk);

}  // namespace leoscale
