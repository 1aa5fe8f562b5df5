#include "fairbet/core.hpp"

#include <cmath>
#include <stdexcept>

namespace fairbet {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
}

void require_outcome(int y) {
  if (y != 0 && y != 1) throw std::invalid_argument("outcome: must be 0 or 1");
}

void require_strict(const Forecast& f) {
  if (!is_strict(f)) throw std::invalid_argument("forecast: interval not inside (0, 1)");
}

}  // namespace

bool is_strict(const Forecast& f) {
  return f.c >= 0.0 && f.mu - f.c > 0.0 && f.mu + f.c < 1.0;
}

LossSpec::LossSpec(std::vector<std::array<double, 2>> table, double bound)
    : table_(std::move(table)), bound_(bound) {
  if (table_.empty()) throw std::invalid_argument("loss table: empty action set");
  if (!(bound_ > 0.0) || !std::isfinite(bound_))
    throw std::invalid_argument("loss table: bound must be positive");
  for (const auto& row : table_)
    for (double v : row)
      if (!std::isfinite(v) || std::fabs(v) > bound_)
        throw std::invalid_argument("loss table: entry exceeds bound");
}

double LossSpec::loss(int action, int y) const {
  if (action < 0 || action >= num_actions())
    throw std::invalid_argument("action: unknown action index");
  require_outcome(y);
  return table_[static_cast<std::size_t>(action)][static_cast<std::size_t>(y)];
}

double forecaster_payout(double b, const Forecast& f, int y) {
  require_finite(b, "stake");
  require_finite(f.mu, "mu");
  require_finite(f.c, "c");
  require_outcome(y);
  return b * (y - f.mu) - std::fabs(b) * f.c;
}

double agent_total_loss(const LossSpec& l, int a, double b, const Forecast& f, int y) {
  return l.loss(a, y) - forecaster_payout(b, f, y);
}

double optimal_stake(const LossSpec& l, int a) {
  return l.loss(a, 1) - l.loss(a, 0);
}

LossBounds loss_bounds(const LossSpec& l, int a, const Forecast& f) {
  double l0 = l.loss(a, 0);
  double l1 = l.loss(a, 1);
  double avg = f.mu * l1 + (1.0 - f.mu) * l0;
  double spread = f.c * std::fabs(l1 - l0);
  return {avg - spread, avg, avg + spread};
}

PaymentGuarantee payment_guarantee(const LossSpec& l, int a, const Forecast& f,
                                   double mu_star) {
  if (mu_star < 0.0 || mu_star > 1.0)
    throw std::invalid_argument("mu_star: outside [0, 1]");
  double b = optimal_stake(l, a);
  double expected_loss = mu_star * l.loss(a, 1) + (1.0 - mu_star) * l.loss(a, 0);
  double pay = expected_loss - b * (mu_star - f.mu) + std::fabs(b) * f.c;
  return {pay, loss_bounds(l, a, f).max};
}

bool bet_is_acceptable(const BetFunction& f, const Forecast& fc) {
  require_strict(fc);
  for (double mu_tilde : {fc.mu - fc.c, fc.mu + fc.c}) {
    if (mu_tilde * f.f1 + (1.0 - mu_tilde) * f.f0 > 0.0) return false;
  }
  return true;
}

std::optional<double> dominating_stake(const BetFunction& f, const Forecast& fc) {
  if (!bet_is_acceptable(f, fc)) return std::nullopt;
  // f1 >= 0 forces b >= 0 (denominator 1 - mu - c), else b < 0.
  if (f.f1 >= 0.0) return f.f1 / (1.0 - fc.mu - fc.c);
  return f.f1 / (1.0 - fc.mu + fc.c);
}

}  // namespace fairbet
