#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fairbet {

// A probability forecast with an interval half-width. c may be negative in
// exactness/market mode; strict-mode validity is checked where required.
struct Forecast {
  double mu = 0.0;
  double c = 0.0;
};

// Returns true iff (mu - c, mu + c) is a nonempty interval inside (0, 1)
// with c >= 0.
bool is_strict(const Forecast& f);

// A bounded loss table over a finite action set; table[a][y] with
// y in {0, 1} and |table[a][y]| <= bound.
class LossSpec {
 public:
  LossSpec(std::vector<std::array<double, 2>> table, double bound);

  double loss(int action, int y) const;
  int num_actions() const { return static_cast<int>(table_.size()); }
  double bound() const { return bound_; }

 private:
  std::vector<std::array<double, 2>> table_;
  double bound_;
};

// A bet's payout to the agent at each outcome.
struct BetFunction {
  double f0 = 0.0;
  double f1 = 0.0;
};

// One completed round. forecaster_payout is the money the forecaster pays
// the agent: b(y - mu) - |b|c. The transfer is zero-sum, and
// agent_total_loss = loss(action, y) - forecaster_payout.
struct RoundRecord {
  std::int64_t t = 0;
  Forecast forecast;
  int action = 0;
  double stake = 0.0;
  int outcome = 0;
  double forecaster_payout = 0.0;
  double agent_total_loss = 0.0;
};

// Forecaster's loss (paid to the agent): b(y - mu) - |b|c.
double forecaster_payout(double b, const Forecast& f, int y);

// Agent's realized total: loss(a, y) minus the side payment received.
double agent_total_loss(const LossSpec& l, int a, double b, const Forecast& f, int y);

// The hedging stake l(a,1) - l(a,0); with it the agent's total loss equals
// L_max regardless of the outcome.
double optimal_stake(const LossSpec& l, int a);

struct LossBounds {
  double min = 0.0;
  double avg = 0.0;
  double max = 0.0;
};

// Expected-loss range over mu_tilde in [mu - c, mu + c]:
// avg = mu l(a,1) + (1-mu) l(a,0), max/min = avg +- c |l(a,1) - l(a,0)|.
LossBounds loss_bounds(const LossSpec& l, int a, const Forecast& f);

struct PaymentGuarantee {
  double pay = 0.0;
  double max = 0.0;
};

// With the optimal stake, the agent's expected total under the true
// probability mu_star equals L_max exactly (any c, any mu_star).
PaymentGuarantee payment_guarantee(const LossSpec& l, int a, const Forecast& f,
                                   double mu_star);

// True iff E_{mu_tilde}[f] <= 0 for every mu_tilde in [mu - c, mu + c]
// (checked at the endpoints; the expectation is affine in mu_tilde).
// Requires a strict-mode forecast.
bool bet_is_acceptable(const BetFunction& f, const Forecast& fc);

// A stake b with f(y) <= b(y - mu) - |b|c for both outcomes, when the bet
// is acceptable; solves f1 = b(1 - mu) - |b|c (sign split on f1).
std::optional<double> dominating_stake(const BetFunction& f, const Forecast& fc);

}  // namespace fairbet
