#pragma once

#include <optional>

#include "fairbet/core.hpp"

namespace fairbet {

enum class AgentKind { honest_insured, uninsured, worst_case, adversarial, malicious_constant };

// Maps (loss table, forecast) to (action, stake). Stateless; the
// adversarial variant additionally receives the true probability as side
// information (it never sees the outcome).
class AgentPolicy {
 public:
  static AgentPolicy honest_insured();
  static AgentPolicy uninsured();
  static AgentPolicy worst_case();
  static AgentPolicy adversarial(double max_stake);
  static AgentPolicy malicious_constant(double stake, double max_stake);

  struct Decision {
    int action = 0;
    double stake = 0.0;
  };

  Decision decide(const LossSpec& l, const Forecast& f,
                  std::optional<double> mu_star = std::nullopt) const;

  AgentKind kind() const { return kind_; }
  double max_stake() const { return max_stake_; }

 private:
  AgentPolicy(AgentKind kind, double max_stake, double fixed_stake);

  AgentKind kind_;
  double max_stake_;
  double fixed_stake_;
};

}  // namespace fairbet
