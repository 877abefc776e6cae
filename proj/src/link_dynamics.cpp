#include "leoscale/link_dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace leoscale {

namespace {
constexpr double kLog2 = 0.6931471805599453094;  // ln 2
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("binary_entropy: argument outside [0, 1]");
  }
  if (x == 0.0 || x == 1.0) return 0.0;
  return -(x * std::log(x) + (1.0 - x) * std::log(1.0 - x)) / kLog2;
}

LinkDynamics::LinkDynamics(double alpha, double beta)
    : alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("LinkDynamics: alpha must be in (0, 1), got " +
                                std::to_string(alpha));
  }
  if (!(beta > 0.0 && beta < 1.0)) {
    throw std::invalid_argument("LinkDynamics: beta must be in (0, 1), got " +
                                std::to_string(beta));
  }
}

std::pair<double, double> steady_state(const LinkDynamics& dyn) {
  return {dyn.pi0(), dyn.pi1()};
}

MaintenancePolicy MaintenancePolicy::finite(int period) {
  if (period < 1) {
    throw std::invalid_argument("MaintenancePolicy: period must be >= 1");
  }
  return MaintenancePolicy(period);
}

int MaintenancePolicy::period() const {
  if (is_infinite()) {
    throw std::logic_error("MaintenancePolicy: infinite policy has no period");
  }
  return period_;
}

TransitionMatrix k_step_transition(const LinkDynamics& dyn, int k) {
  if (k < 1) {
    throw std::domain_error("k_step_transition: k must be >= 1");
  }
  const double a = dyn.alpha();
  const double b = dyn.beta();
  const double s = a + b;
  const double muk = std::pow(dyn.mu(), static_cast<double>(k));
  TransitionMatrix m;
  m.p[0][0] = (a + b * muk) / s;
  m.p[0][1] = (b - b * muk) / s;
  m.p[1][0] = (a - a * muk) / s;
  m.p[1][1] = (b + a * muk) / s;
  return m;
}

double belief(const LinkDynamics& dyn, int prior_state, int k) {
  if (prior_state != 0 && prior_state != 1) {
    throw std::domain_error("belief: prior_state must be 0 or 1");
  }
  return k_step_transition(dyn, k).p[prior_state][1];
}

double consensus_rate(double alpha, double beta) {
  const double s = alpha + beta;
  if (!(s > 0.0)) {
    throw std::domain_error("consensus_rate: alpha + beta must be positive");
  }
  const double pi1 = beta / s;
  const double pi0 = alpha / s;
  return pi1 * binary_entropy(alpha) + pi0 * binary_entropy(beta);
}

double consensus_lower_bound_raw(double alpha, double beta,
                                 const MaintenancePolicy& policy) {
  const double rate = consensus_rate(alpha, beta);
  if (policy.is_infinite()) return rate;
  const double k = static_cast<double>(policy.period());
  const double pi1 = beta / (alpha + beta);
  return (binary_entropy(pi1) + (k - 1.0) * rate) / k;
}

double consensus_lower_bound(const LinkDynamics& dyn,
                             const MaintenancePolicy& policy) {
  return consensus_lower_bound_raw(dyn.alpha(), dyn.beta(), policy);
}

const char* region_name(Region region) {
  switch (region) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    case Region::IV: return "IV";
    case Region::V: return "V";
  }
  return "?";
}

void RegionThresholds::validate() const {
  if (!(0.0 < eps1 && eps1 < eps2 && eps2 < eps3 && eps3 < eps4 && eps4 < 1.0)) {
    throw std::invalid_argument(
        "RegionThresholds: require 0 < eps1 < eps2 < eps3 < eps4 < 1");
  }
}

Region classify_region(const LinkDynamics& dyn, const RegionThresholds& thr) {
  thr.validate();
  const double a = dyn.alpha();
  const double b = dyn.beta();
  if (thr.eps1 <= a && a <= thr.eps2 && thr.eps1 <= b && b <= thr.eps2) {
    return Region::I;
  }
  if (thr.eps1 <= a && a <= thr.eps2 && thr.eps2 < b && b <= thr.eps4) {
    return Region::II;
  }
  if (thr.eps3 <= a && a <= thr.eps4 && thr.eps3 <= b && b <= thr.eps4) {
    return Region::III;
  }
  if (thr.eps2 < a && a <= thr.eps4 && thr.eps1 < b && b < thr.eps2) {
    return Region::IV;
  }
  return Region::V;
}

double region_consensus_approx(Region region, const LinkDynamics& dyn, int k) {
  if (k < 1) {
    throw std::domain_error("region_consensus_approx: k must be >= 1");
  }
  const double kd = static_cast<double>(k);
  switch (region) {
    case Region::I:
    case Region::III:
      return 1.0 / kd;
    case Region::II:
      return (kd - 1.0) / kd * binary_entropy(dyn.alpha());
    case Region::IV:
      return (kd - 1.0) / kd * binary_entropy(dyn.beta());
    case Region::V:
      break;
  }
  throw std::invalid_argument(
      "region_consensus_approx: no closed form for Region V");
}

}  // namespace leoscale
