#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairbet/core.hpp"
#include "fairbet/model.hpp"
#include "fairbet/swapregret.hpp"

namespace fairbet {

// Predictions are clamped into [kProbEpsilon, 1 - kProbEpsilon]; gradients
// always use the raw outputs.
inline constexpr double kProbEpsilon = 1e-6;

enum class SelectorKind { swap, none, standard, naive_br };
enum class ForecastMode { exactness, strict, monotone };

const char* to_string(SelectorKind k);
const char* to_string(ForecastMode m);
const char* to_string(Arch a);
SelectorKind selector_from_string(const std::string& s);
ForecastMode mode_from_string(const std::string& s);
Arch arch_from_string(const std::string& s);

// The lambda correction policy. All variants consume the same (r, s)
// statistics; swap/standard emit lambda in [-1, 1), naive_br is unclipped.
class LambdaSelector {
 public:
  LambdaSelector(SelectorKind kind, int num_bins, std::uint64_t seed);

  struct Choice {
    double lambda = 0.0;
    int bin = -1;  // -1 for variants without bins
  };

  Choice select();
  void observe(const Choice& choice, double r, double s);

  SelectorKind kind() const { return kind_; }
  int num_bins() const;
  BinnedFtl* ftl() { return ftl_ ? ftl_.get() : nullptr; }
  const BinnedFtl* ftl() const { return ftl_ ? ftl_.get() : nullptr; }
  const BinStats& naive_stats() const { return naive_; }
  void restore_naive(const BinStats& stats) { naive_ = stats; }

 private:
  SelectorKind kind_;
  std::unique_ptr<BinnedFtl> ftl_;  // swap and standard
  BinStats naive_;                  // naive_br running sums
  bool awaiting_observe_ = false;
};

struct ForecasterConfig {
  Arch arch = Arch::one_hidden;
  int dim = 1;
  int hidden = 32;
  double eta = 0.01;
  std::int64_t horizon = 2;  // T, declared up front; K derives from it
  int k_override = 0;        // 0 derives K = max(1, ceil((T / ln T)^(1/4)))
  SelectorKind selector = SelectorKind::swap;
  ForecastMode mode = ForecastMode::exactness;
  double max_stake = 10.0;  // M; |b| is validated against it
  std::uint64_t seed = 0;
};

int bins_for_horizon(std::int64_t horizon);

// One completed round as seen by the forecaster.
struct ObservedRound {
  std::int64_t t = 0;
  double mu_hat = 0.0;  // clamped base probability
  double c_hat = 0.0;   // clamped base half-width
  double lambda = 0.0;
  int bin = -1;
  double mu = 0.0;  // emitted forecast
  double c = 0.0;
  double b = 0.0;
  int y = 0;
  double r = 0.0;
  double s = 0.0;
  // Betting loss b(mu - y) - |b|c of the emitted forecast; in exactness
  // and monotone modes it is computed through the one shared expression
  // b(mu_hat - y) - |b|(c_hat + lambda), which both modes emit (monotone
  // folds the width into mu and requires b >= 0).
  double betting_loss = 0.0;
  double payout = 0.0;  // money paid to the agent: b(y - mu) - |b|c
  double cum_betting_loss = 0.0;
};

// Online forecaster: a base mu/c predictor pair trained by SGD plus a
// lambda correction driving the average betting loss to zero. Strict
// predict/observe alternation; single-threaded per instance.
class ExactForecaster {
 public:
  explicit ExactForecaster(const ForecasterConfig& cfg);

  Forecast predict(const std::vector<double>& x);
  ObservedRound observe(int y, double b);

  const ForecasterConfig& config() const { return cfg_; }
  int num_bins() const { return num_bins_; }
  std::int64_t rounds_completed() const { return t_; }
  double cum_betting_loss() const { return cum_betting_loss_; }
  const BaseModel& mu_model() const { return mu_model_; }
  const BaseModel& c_model() const { return c_model_; }
  LambdaSelector& selector() { return selector_; }

  // Versioned field-tagged JSON snapshot; valid between rounds only.
  std::string save_snapshot() const;
  static ExactForecaster load_snapshot(const std::string& text);

 private:
  ForecasterConfig cfg_;
  int num_bins_;
  BaseModel mu_model_;
  BaseModel c_model_;
  LambdaSelector selector_;
  std::int64_t t_ = 0;
  double cum_betting_loss_ = 0.0;

  struct Pending {
    std::vector<double> x;
    double mu_hat_raw = 0.0;
    double c_hat_raw = 0.0;
    double mu_hat = 0.0;
    double c_hat = 0.0;
    LambdaSelector::Choice choice;
    Forecast emitted;
  };
  std::optional<Pending> pending_;
};

}  // namespace fairbet
