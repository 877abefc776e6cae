#include "leoscale/scalability.hpp"

#include <cmath>
#include <stdexcept>

namespace leoscale {

void OverheadModel::validate() const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("OverheadModel: sigma must be finite and >= 0");
  }
}

double tau_upper(double n, double sigma, double hk) {
  if (!(n >= 1.0)) throw std::domain_error("tau_upper: n must be >= 1");
  if (!(sigma >= 0.0)) throw std::domain_error("tau_upper: sigma must be >= 0");
  if (!(hk >= 0.0)) throw std::domain_error("tau_upper: hk must be >= 0");
  return 16.0 * std::sqrt(n) / (1.0 + sigma * std::pow(n, 1.5) + 4.0 * n * hk);
}

TauEnvelope tau_envelope(double n, double sigma, const LinkDynamics& dyn) {
  const double hk1 = binary_entropy(dyn.pi1());
  const double hkinf = consensus_rate(dyn.alpha(), dyn.beta());
  return {tau_upper(n, sigma, hk1), tau_upper(n, sigma, hkinf)};
}

double delta_tau(double n, double sigma, const LinkDynamics& dyn) {
  const TauEnvelope env = tau_envelope(n, sigma, dyn);
  return env.tau_inf - env.tau_1;
}

double region_tau_bound(Region region, double n, double sigma,
                        const LinkDynamics& dyn, int k) {
  if (!(n >= 1.0)) throw std::domain_error("region_tau_bound: n must be >= 1");
  if (k < 1) throw std::domain_error("region_tau_bound: k must be >= 1");
  const double kd = static_cast<double>(k);
  const double base = kd * (1.0 + sigma * std::pow(n, 1.5));
  const double numer = 16.0 * kd * std::sqrt(n);
  switch (region) {
    case Region::I:
    case Region::III:
      return numer / (base + 4.0 * n);
    case Region::II:
      return numer / (base + 4.0 * n * (kd - 1.0) * binary_entropy(dyn.alpha()));
    case Region::IV:
      return numer / (base + 4.0 * n * (kd - 1.0) * binary_entropy(dyn.beta()));
    case Region::V:
      break;
  }
  throw std::invalid_argument("region_tau_bound: no closed form for Region V");
}

double solve_optimal_n(double sigma, double hk) {
  if (!(sigma >= 0.0) || !(hk >= 0.0)) {
    throw std::domain_error("solve_optimal_n: overheads must be >= 0");
  }
  if (sigma == 0.0 && hk == 0.0) {
    throw std::runtime_error(
        "solve_optimal_n: no optimum when both overheads are zero");
  }
  // Degenerate cases solve in closed form.
  if (sigma == 0.0) return 1.0 / (4.0 * hk);
  if (hk == 0.0) return std::pow(1.0 / (2.0 * sigma), 2.0 / 3.0);

  const auto g = [&](double n) {
    return 2.0 * sigma * std::pow(n, 1.5) + 4.0 * n * hk - 1.0;
  };
  // g is strictly increasing and unbounded; double the bracket until it
  // straddles the root.
  double lo = 0.0;
  double hi = 1.0;
  while (g(hi) <= 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 200 && (hi - lo) > 1e-13 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) <= 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double n_star_approx(ExtremeScenario scenario, double sigma, double hk) {
  switch (scenario) {
    case ExtremeScenario::kContentionFree:
      if (!(hk > 0.0)) throw std::domain_error("n_star_approx: hk must be > 0");
      return 1.0 / hk;
    case ExtremeScenario::kConsensusFree:
      if (!(sigma > 0.0)) throw std::domain_error("n_star_approx: sigma must be > 0");
      return std::pow(1.0 / (2.0 * sigma), 2.0 / 3.0);
  }
  throw std::domain_error("n_star_approx: unknown scenario");
}

MaxScalability max_scalability(double sigma, double hk) {
  const double n_star = solve_optimal_n(sigma, hk);
  return {n_star, tau_upper(n_star, sigma, hk), 8.0 * std::sqrt(n_star)};
}

}  // namespace leoscale
