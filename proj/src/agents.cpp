#include "fairbet/agents.hpp"

#include <cmath>
#include <stdexcept>

namespace fairbet {

namespace {

// Argmin over actions of the expected loss under mu; ties break toward the
// smaller action index.
int best_expected_action(const LossSpec& l, double mu) {
  int best = 0;
  double best_value = 0.0;
  for (int a = 0; a < l.num_actions(); ++a) {
    double value = mu * l.loss(a, 1) + (1.0 - mu) * l.loss(a, 0);
    if (a == 0 || value < best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

int best_worst_case_action(const LossSpec& l, const Forecast& f) {
  int best = 0;
  double best_value = 0.0;
  for (int a = 0; a < l.num_actions(); ++a) {
    double value = loss_bounds(l, a, f).max;
    if (a == 0 || value < best_value) {
      best = a;
      best_value = value;
    }
  }
  return best;
}

}  // namespace

AgentPolicy::AgentPolicy(AgentKind kind, double max_stake, double fixed_stake)
    : kind_(kind), max_stake_(max_stake), fixed_stake_(fixed_stake) {}

AgentPolicy AgentPolicy::honest_insured() {
  return {AgentKind::honest_insured, 0.0, 0.0};
}

AgentPolicy AgentPolicy::uninsured() { return {AgentKind::uninsured, 0.0, 0.0}; }

AgentPolicy AgentPolicy::worst_case() { return {AgentKind::worst_case, 0.0, 0.0}; }

AgentPolicy AgentPolicy::adversarial(double max_stake) {
  if (!(max_stake > 0.0)) throw std::invalid_argument("agent: max stake must be positive");
  return {AgentKind::adversarial, max_stake, 0.0};
}

AgentPolicy AgentPolicy::malicious_constant(double stake, double max_stake) {
  if (!(max_stake > 0.0)) throw std::invalid_argument("agent: max stake must be positive");
  if (!std::isfinite(stake) || std::fabs(stake) > max_stake)
    throw std::invalid_argument("agent: fixed stake exceeds the bound");
  return {AgentKind::malicious_constant, max_stake, stake};
}

AgentPolicy::Decision AgentPolicy::decide(const LossSpec& l, const Forecast& f,
                                          std::optional<double> mu_star) const {
  switch (kind_) {
    case AgentKind::honest_insured: {
      int a = best_expected_action(l, f.mu);
      return {a, optimal_stake(l, a)};
    }
    case AgentKind::uninsured:
      return {best_expected_action(l, f.mu), 0.0};
    case AgentKind::worst_case: {
      int a = best_worst_case_action(l, f);
      return {a, optimal_stake(l, a)};
    }
    case AgentKind::adversarial: {
      if (!mu_star) throw std::invalid_argument("agent: adversarial needs the true probability");
      // Maximizes the expected payout b(mu* - mu) - |b|c over [-M, M].
      double gap = *mu_star - f.mu;
      if (std::fabs(gap) <= f.c) return {0, 0.0};
      return {0, gap > 0.0 ? max_stake_ : -max_stake_};
    }
    case AgentKind::malicious_constant:
      return {0, fixed_stake_};
  }
  throw std::logic_error("agent: unreachable");
}

}  // namespace fairbet
