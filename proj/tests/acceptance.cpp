// Acceptance gate: one line per criterion, exit 0 iff every hard criterion
// passes. A JSON summary (per-criterion status plus the recorded run stats)
// is written next to the binary; pass a path to override.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairbet/agents.hpp"
#include "fairbet/core.hpp"
#include "fairbet/experiments.hpp"
#include "fairbet/forecaster.hpp"
#include "fairbet/market.hpp"
#include "fairbet/multiclass.hpp"
#include "fairbet/offline.hpp"
#include "fairbet/rng.hpp"
#include "fairbet/streams.hpp"
#include "fairbet/swapregret.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace fairbet;

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

struct Criterion {
  int id = 0;
  bool pass = false;
  bool soft = false;
  std::string detail;
};

std::vector<Criterion> g_results;
json g_extra = json::object();

void record(int id, bool pass, bool soft, const std::string& detail) {
  g_results.push_back({id, pass, soft, detail});
  const char* tag = pass ? "PASS" : (soft ? "WARN" : "FAIL");
  std::printf("AC%02d %s: %s\n", id, tag, detail.c_str());
  std::fflush(stdout);
}

// Medians of emitted widths from the honest runs, reused by the soft check.
std::vector<double> g_honest_c_medians;

// 1. Two-action example: the hedged total is -4 at both outcomes, a
// guaranteed gain of 4 over skipping; every quantity is checked exactly.
void criterion_1() {
  const LossSpec table({{2.0, -10.0}, {0.0, 0.0}}, 10.0);
  const Forecast f{0.5, 0.0};
  double b = optimal_stake(table, 0);
  auto g = payment_guarantee(table, 0, f, 0.25);
  bool pass = b == -12.0 &&
              agent_total_loss(table, 0, b, f, 1) == -4.0 &&
              agent_total_loss(table, 0, b, f, 0) == -4.0 &&
              agent_total_loss(table, 1, 0.0, f, 1) == 0.0 &&
              agent_total_loss(table, 1, 0.0, f, 0) == 0.0 &&
              g.pay == -4.0 && g.max == -4.0;
  record(1, pass, false, "hedged total -4 at both outcomes vs 0 for skipping, tolerance 0");
}

// 2. Hedged expected total equals the worst-case bound for every random
// (table, action, forecast, true probability) tuple.
void criterion_2() {
  Rng rng(202);
  const int n = 100000;
  int bad = 0;
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    int actions = 2 + static_cast<int>(rng.uniform_index(3));
    std::vector<std::array<double, 2>> rows(actions);
    for (auto& row : rows) row = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    LossSpec table(rows, 10.0);
    int a = static_cast<int>(rng.uniform_index(actions));
    Forecast f{rng.uniform(0.01, 0.99), rng.uniform(0.0, 1.0)};
    auto g = payment_guarantee(table, a, f, rng.uniform());
    double err = std::fabs(g.pay - g.max);
    worst = std::max(worst, err);
    if (!(err <= 1e-9)) ++bad;
  }
  record(2, bad == 0, false,
         fmt("|expected hedged total - worst case| <= 1e-9 on %d/%d tuples (max %.2e)",
             n - bad, n, worst));
}

// 3. A bet is acceptable iff some stake's payout dominates it pointwise.
void criterion_3() {
  Rng rng(303);
  const int n = 10000;
  int mismatches = 0, accepted = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double mu = rng.uniform(0.05, 0.95);
    Forecast fc{mu, rng.uniform(1e-3, 0.9 * std::min(mu, 1.0 - mu))};
    BetFunction bet;
    if (i % 2 == 0) {
      bet = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)};
    } else {
      // Near the acceptance boundary: a stake's payout minus signed slack.
      double b = rng.uniform(-4.0, 4.0);
      bet.f0 = forecaster_payout(b, fc, 0) - rng.uniform(-0.05, 0.3);
      bet.f1 = forecaster_payout(b, fc, 1) - rng.uniform(-0.05, 0.3);
    }
    bool acceptable = bet_is_acceptable(bet, fc);
    auto stake = dominating_stake(bet, fc);
    if (acceptable != stake.has_value()) ++mismatches;
    if (stake) {
      ++accepted;
      worst = std::max({worst, bet.f0 - forecaster_payout(*stake, fc, 0),
                        bet.f1 - forecaster_payout(*stake, fc, 1)});
    }
  }
  bool pass = mismatches == 0 && worst <= 1e-12 && accepted > 0 && accepted < n;
  record(3, pass, false,
         fmt("equivalence on %d bets (%d acceptable), max domination slack %.2e <= 1e-12",
             n, accepted, worst));
}

// 4. Multi-outcome guarantees: the candidate-grid minimum matches the
// closed form exactly, sampled feasible distributions never beat the bound,
// and the hedged expected total equals it for random true distributions.
void criterion_4() {
  Rng rng(404);
  const int n = 1000;
  int grid_bad = 0;
  double worst_primal = -std::numeric_limits<double>::infinity();
  double worst_pay = 0.0;
  for (int i = 0; i < n; ++i) {
    int k = 2 + static_cast<int>(rng.uniform_index(4));
    SimplexForecast f;
    f.mu.resize(k);
    f.c.resize(k);
    double total = 0.0;
    for (int j = 0; j < k; ++j) {
      f.mu[j] = rng.uniform(0.05, 1.0);
      total += f.mu[j];
    }
    for (int j = 0; j < k; ++j) f.mu[j] /= total;
    for (int j = 0; j < k; ++j)
      f.c[j] = rng.uniform(0.0, 0.9) * std::min(f.mu[j], 1.0 - f.mu[j]);
    std::vector<double> l(k);
    for (double& v : l) v = rng.uniform(-10.0, 10.0);

    auto closed = l_max_closed_form(f, l);

    double mu_dot_l = 0.0;
    for (int j = 0; j < k; ++j) mu_dot_l += f.mu[j] * l[j];
    double best_obj = std::numeric_limits<double>::infinity();
    for (int g = 0; g < k; ++g) {
      double obj = 0.0;
      for (int j = 0; j < k; ++j) obj += f.c[j] * std::fabs(l[j] - l[g]);
      best_obj = std::min(best_obj, obj);
    }
    if (mu_dot_l + best_obj != closed.l_max) ++grid_bad;

    for (int rep = 0; rep < 20; ++rep) {
      // Random mass-preserving direction, scaled to stay inside the box.
      std::vector<double> d(k);
      double mean = 0.0;
      for (double& v : d) {
        v = rng.uniform(-1.0, 1.0);
        mean += v;
      }
      mean /= k;
      double step = std::numeric_limits<double>::infinity();
      for (int j = 0; j < k; ++j) {
        d[j] -= mean;
        if (std::fabs(d[j]) > 1e-12) step = std::min(step, f.c[j] / std::fabs(d[j]));
      }
      if (!std::isfinite(step)) continue;
      step *= rng.uniform();
      double value = 0.0;
      for (int j = 0; j < k; ++j) value += (f.mu[j] + step * d[j]) * l[j];
      worst_primal = std::max(worst_primal, value - closed.l_max);
    }

    std::vector<double> mu_star(k);
    double star_total = 0.0;
    for (double& v : mu_star) {
      v = rng.uniform(0.01, 1.0);
      star_total += v;
    }
    for (double& v : mu_star) v /= star_total;
    worst_pay = std::max(
        worst_pay, std::fabs(multiclass_payment_guarantee(f, l, mu_star) - closed.l_max));
  }
  bool pass = grid_bad == 0 && worst_primal <= 1e-9 && worst_pay <= 1e-9;
  record(4, pass, false,
         fmt("grid==closed form on %d/%d, primal excess %.2e <= 1e-9, pay error %.2e <= 1e-9",
             n - grid_bad, n, worst_primal, worst_pay));
}

// 5. Unconstrained follow-the-leader on squared betting losses: regret
// against the best fixed correction stays under 32 log(T+1) on every
// stream with |s| <= 1 and |r/s| <= 2.
void criterion_5() {
  const int streams = 100;
  const std::int64_t T = 10000;
  const double bound = 32.0 * std::log(static_cast<double>(T) + 1.0);
  double worst = -std::numeric_limits<double>::infinity();
  int fails = 0;
  for (int i = 0; i < streams; ++i) {
    Rng rng(derive_seed(505, static_cast<std::uint64_t>(i)));
    double sum_rs = 0.0, sum_ss = 0.0, sum_rr = 0.0, played = 0.0;
    for (std::int64_t t = 0; t < T; ++t) {
      double s = rng.uniform(-1.0, 1.0);
      double r = 2.0 * rng.uniform(-1.0, 1.0) * s;
      double lambda = sum_ss > 0.0 ? -sum_rs / sum_ss : 0.0;
      double e = r + s * lambda;
      played += e * e;
      sum_rs += r * s;
      sum_ss += s * s;
      sum_rr += r * r;
    }
    double best_fixed = sum_rr - (sum_ss > 0.0 ? sum_rs * sum_rs / sum_ss : 0.0);
    double regret = played - best_fixed;
    worst = std::max(worst, regret);
    if (!(regret <= bound)) ++fails;
  }
  record(5, fails == 0, false,
         fmt("leader regret <= %.2f on %d/%d streams (max %.3f)", bound, streams - fails,
             streams, worst));
}

// 6. Normalized fourth-power sums: sum_t beta_t^4 / sum_{t'<=t} beta_t'^2
// stays under M^2 log(T+1) on random bounded sequences.
void criterion_6() {
  Rng rng(606);
  const int n = 1000;
  const std::int64_t T = 1000;
  double worst_ratio = 0.0;
  int fails = 0;
  for (int i = 0; i < n; ++i) {
    double M = rng.uniform(0.2, 3.0);
    double bound = M * M * std::log(static_cast<double>(T) + 1.0);
    double running = 0.0, total = 0.0;
    for (std::int64_t t = 0; t < T; ++t) {
      double beta = rng.uniform(-M, M);
      running += beta * beta;
      if (running > 0.0) total += beta * beta * beta * beta / running;
    }
    worst_ratio = std::max(worst_ratio, total / bound);
    if (!(total <= bound)) ++fails;
  }
  record(6, fails == 0, false,
         fmt("sum <= M^2 log(T+1) on %d/%d sequences (max ratio %.3f)", n - fails, n,
             worst_ratio));
}

// 7. Binned leader with K = 8 against adversarial credit streams: the
// discretized swap regret stays under 32 K log T on at least 95% of seeds.
void criterion_7() {
  const int K = 8;
  const std::int64_t T = 10000;
  const int seeds = 50;
  const double bound = 32.0 * K * std::log(static_cast<double>(T));
  int passes = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int seed = 0; seed < seeds; ++seed) {
    BinnedFtl ftl(K, derive_seed(707, static_cast<std::uint64_t>(seed)));
    Rng gen(derive_seed(708, static_cast<std::uint64_t>(seed)));
    std::vector<LambdaRound> history;
    history.reserve(T);
    double theta = gen.uniform(-0.98, 0.98);
    for (std::int64_t t = 0; t < T; ++t) {
      double r = 0.0, s = 0.0;
      switch (seed % 4) {
        case 0:  // block-constant targets
          if (t % 1250 == 0) theta = gen.uniform(-0.98, 0.98);
          s = (gen.bernoulli(0.5) ? 1.0 : -1.0) * gen.uniform(0.3, 1.0);
          r = -theta * s + 0.05 * gen.uniform(-1.0, 1.0) * s;
          break;
        case 1:  // periodic sign flips of the target
          theta = ((t / 500) % 2 == 0) ? 0.7 : -0.7;
          s = gen.uniform(-1.0, 1.0);
          r = -theta * s;
          break;
        case 2:  // random mix with |r/s| <= 1
          s = gen.uniform(-1.0, 1.0);
          r = gen.uniform(-1.0, 1.0) * s;
          break;
        default:  // round-alternating targets in two adjacent bins
          theta = (t % 2 == 0) ? 0.1 : -0.1;
          s = (gen.bernoulli(0.5) ? 1.0 : -1.0) * gen.uniform(0.5, 1.0);
          r = -theta * s + 0.02 * gen.uniform(-1.0, 1.0) * s;
          break;
      }
      auto sel = ftl.select();
      ftl.observe(sel.bin, r, s);
      history.push_back({sel.lambda, r, s});
    }
    double regret = measure_discretized_swap_regret(history, K);
    worst = std::max(worst, regret);
    if (regret <= bound) ++passes;
  }
  record(7, passes >= 48, false,
         fmt("swap regret <= %.1f on %d/%d seeds (need 48, max %.2f)", bound, passes, seeds,
             worst));
}

// 8. Vanishing average betting loss with honest agents on a drifting
// stream: small final average, decaying by 10x horizon growth (or already
// at the noise floor by the first checkpoint), and the scaled square stays
// under the recorded constant on every seed.
void criterion_8() {
  ExactnessConfig base;
  base.stream.kind = "drift";
  base.stream.dim = 5;
  base.task = TaskFamily::one_sided;
  base.agent.kind = "honest";
  // The drift stream's base rate needs the nonlinear family: the one-hot
  // linear model has no intercept path, so its mu stalls and the widths
  // absorb the miss.
  base.arch = Arch::one_hidden;
  base.eta = 0.01;
  base.selector = SelectorKind::swap;
  base.mode = ForecastMode::exactness;
  base.k_override = 12;
  base.T = 200000;
  const int seeds = 20;
  const double scaled_constant = 1.0;
  int ok = 0;
  double max_scaled = 0.0;
  json per_seed = json::array();
  for (int seed = 0; seed < seeds; ++seed) {
    ExactnessConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(seed);
    auto res = run_exactness_sim(cfg);
    bool small = std::fabs(res.final_avg_payout) <= 0.02;
    // When both checkpoints sit at the seed noise floor, the ratio of two
    // near-zero draws says nothing; a quarter of the final bound certifies
    // the decay finished before the first checkpoint.
    bool decayed = std::fabs(res.final_avg_payout) <=
                   std::max(0.6 * std::fabs(res.avg_payout_at_tenth), 0.005);
    if (small && decayed) ++ok;
    max_scaled = std::max(max_scaled, res.max_avg_sq_scaled);
    g_honest_c_medians.push_back(res.median_abs_c_final_half);
    per_seed.push_back({{"seed", seed},
                        {"final_avg", res.final_avg_payout},
                        {"avg_at_tenth", res.avg_payout_at_tenth},
                        {"max_avg_sq_scaled", res.max_avg_sq_scaled},
                        {"median_abs_c_final_half", res.median_abs_c_final_half}});
  }
  g_extra["vanishing_avg_loss"] = {{"scaled_constant", scaled_constant},
                                   {"max_avg_sq_scaled", max_scaled},
                                   {"per_seed", per_seed}};
  bool pass = ok >= 16 && max_scaled <= scaled_constant;
  record(8, pass, false,
         fmt("|avg| <= 0.02 and decayed on %d/20 seeds (need 16), max scaled square "
             "%.4f <= %.1f",
             ok, max_scaled, scaled_constant));
}

// 9. Correction ablation under an exploiting agent: with the binned
// selector the average betting loss vanishes, with no correction it stays
// bounded away from zero.
void criterion_9() {
  ExactnessConfig base;
  base.stream.kind = "adversarial_flip";
  base.stream.dim = 5;
  base.stream.period = 500;
  base.task = TaskFamily::one_sided;
  base.agent.kind = "adversarial";
  base.agent.max_stake = 1.0;
  base.arch = Arch::linear;
  base.eta = 0.01;
  base.mode = ForecastMode::exactness;
  base.T = 100000;
  const int seeds = 20;
  int ok = 0;
  json per_seed = json::array();
  for (int seed = 0; seed < seeds; ++seed) {
    ExactnessConfig cfg = base;
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.selector = SelectorKind::swap;
    auto with = run_exactness_sim(cfg);
    cfg.selector = SelectorKind::none;
    auto without = run_exactness_sim(cfg);
    bool pass = std::fabs(with.final_avg_payout) <= 0.05 &&
                std::fabs(without.final_avg_payout) >= 0.10;
    if (pass) ++ok;
    per_seed.push_back({{"seed", seed},
                        {"avg_with_selector", with.final_avg_payout},
                        {"avg_without_selector", without.final_avg_payout}});
  }
  g_extra["ablation"] = {{"per_seed", per_seed}};
  record(9, ok >= 16, false,
         fmt("selector |avg| <= 0.05 while none |avg| >= 0.10 on %d/20 seeds (need 16)", ok));
}

// 10. With nonnegative constant stakes the width-folded mode's betting
// loss stream is bit-identical to the interval mode's.
void criterion_10() {
  const std::int64_t T = 10000;
  ForecasterConfig fc;
  fc.arch = Arch::one_hidden;
  fc.dim = 3;
  fc.hidden = 16;
  fc.eta = 0.01;
  fc.horizon = T;
  fc.selector = SelectorKind::swap;
  fc.max_stake = 5.0;
  fc.seed = 4242;
  ForecasterConfig fm = fc;
  fc.mode = ForecastMode::exactness;
  fm.mode = ForecastMode::monotone;
  ExactForecaster interval(fc);
  ExactForecaster folded(fm);

  auto stream = make_drift(3, T, 555);
  const LossSpec table({{0.0, 1.0}, {1.0, 0.0}}, 1.0);
  std::vector<AgentPolicy> agents{
      AgentPolicy::malicious_constant(0.0, 5.0), AgentPolicy::malicious_constant(0.6, 5.0),
      AgentPolicy::malicious_constant(1.3, 5.0), AgentPolicy::malicious_constant(2.4, 5.0)};

  std::int64_t identical = 0;
  bool cum_identical = true;
  for (std::int64_t t = 0; t < T; ++t) {
    auto round = stream->next();
    Forecast fi = interval.predict(round->x);
    Forecast ff = folded.predict(round->x);
    double b = agents[t % 4].decide(table, fi).stake;
    if (agents[t % 4].decide(table, ff).stake != b) break;
    auto oi = interval.observe(round->y, b);
    auto of = folded.observe(round->y, b);
    if (std::bit_cast<std::uint64_t>(oi.betting_loss) ==
        std::bit_cast<std::uint64_t>(of.betting_loss))
      ++identical;
    if (std::bit_cast<std::uint64_t>(oi.cum_betting_loss) !=
        std::bit_cast<std::uint64_t>(of.cum_betting_loss))
      cum_identical = false;
  }
  bool pass = identical == T && cum_identical;
  record(10, pass, false,
         fmt("betting loss bit-identical across modes on %lld/%lld rounds",
             static_cast<long long>(identical), static_cast<long long>(T)));
}

// 11. Offline audit: for constant-width tables, max calibration error
// within the width is exactly equivalent to a zero padded gap.
void criterion_11() {
  Rng rng(1111);
  const int n = 1000;
  int agree = 0, calibrated = 0, uncalibrated = 0;
  const double menu[4] = {0.2, 0.35, 0.5, 0.7};
  for (int i = 0; i < n; ++i) {
    double c0 = rng.uniform(0.01, 0.3);
    int m = 4 + static_cast<int>(rng.uniform_index(5));
    std::vector<double> raw(m);
    double total = 0.0;
    for (double& w : raw) {
      w = rng.uniform(0.05, 1.0);
      total += w;
    }
    std::vector<SupportPoint> points(m);
    TableForecaster fc;
    double acc = 0.0;
    for (int j = 0; j < m; ++j) {
      points[j].id = std::to_string(j);
      double mu = menu[rng.uniform_index(4)];
      if (i % 3 == 0) {
        points[j].mu_star = mu;
      } else if (i % 3 == 1) {
        points[j].mu_star = rng.uniform();
      } else {
        points[j].mu_star =
            std::clamp(mu + c0 * rng.uniform(-1.8, 1.8), 0.0, 1.0);
      }
      fc.set(points[j].id, {mu, c0});
      // Last weight closes the mass to exactly 1.
      points[j].weight = (j + 1 < m) ? raw[j] * 0.6 / total : 1.0 - acc;
      acc += points[j].weight;
    }
    DiscreteDistribution dist(points);
    double gap = soundness_gap(dist, fc, BetClass::functions_of_mu, rng.uniform(0.5, 2.0));
    bool within = mce(dist, fc) <= c0;
    if (within == (gap == 0.0)) ++agree;
    if (within) ++calibrated;
    else ++uncalibrated;
  }
  bool pass = agree == n && calibrated > 0 && uncalibrated > 0;
  record(11, pass, false,
         fmt("(mce <= c0) == (gap == 0) on %d/%d tables (%d within, %d outside)", agree, n,
             calibrated, uncalibrated));
}

// 12. Flight market: with the mechanism on, final cumulative revenue and
// total utility are both at least the mechanism-off values.
void criterion_12() {
  MarketConfig base;
  base.num_flights = 500;
  const int seeds = 20;
  const double fracs[3] = {0.25, 0.5, 0.75};
  int ok[3] = {0, 0, 0};
  json per_frac = json::array();
  for (int fi = 0; fi < 3; ++fi) {
    json rows = json::array();
    for (int seed = 0; seed < seeds; ++seed) {
      MarketConfig cfg = base;
      cfg.cautious_frac = fracs[fi];
      cfg.seed = static_cast<std::uint64_t>(seed);
      auto on = run_market(cfg, true);
      auto off = run_market(cfg, false);
      bool pass = on.revenue_avg.back() >= off.revenue_avg.back() &&
                  on.total_utility_avg.back() >= off.total_utility_avg.back();
      if (pass) ++ok[fi];
      rows.push_back({{"seed", seed},
                      {"revenue_on", on.revenue_avg.back()},
                      {"revenue_off", off.revenue_avg.back()},
                      {"utility_on", on.total_utility_avg.back()},
                      {"utility_off", off.total_utility_avg.back()}});
    }
    per_frac.push_back({{"cautious_frac", fracs[fi]}, {"ok", ok[fi]}, {"seeds", rows}});
  }
  g_extra["market"] = per_frac;
  bool pass = ok[0] >= 16 && ok[1] >= 16 && ok[2] >= 16;
  record(12, pass, false,
         fmt("revenue and utility on >= off: %d, %d, %d of 20 seeds at cautious 0.25, "
             "0.5, 0.75 (need 16 each)",
             ok[0], ok[1], ok[2]));
}

// 13. Soft check: honest-run emitted widths stay small (median |c| over
// the final half at most 0.2). Recorded; a miss warns and never fails.
void criterion_13() {
  double worst = 0.0;
  for (double m : g_honest_c_medians) worst = std::max(worst, m);
  g_extra["honest_widths"] = {{"medians", g_honest_c_medians}, {"threshold", 0.2}};
  record(13, worst <= 0.2, true,
         fmt("max median |c| over final half = %.4f across %d honest seeds (soft "
             "threshold 0.2)",
             worst, static_cast<int>(g_honest_c_medians.size())));
}

// 14. Model gradients match central finite differences at random points.
void criterion_14() {
  Rng rng(1414);
  // raw is piecewise affine per parameter, so away from kinks the central
  // difference is exact up to roundoff; h = 1e-4 keeps perturbations below
  // the kink margin while shrinking that roundoff.
  const double h = 1e-4;
  double worst = 0.0;
  int checked = 0;
  for (Arch arch : {Arch::linear, Arch::one_hidden}) {
    for (int p = 0; p < 50; ++p) {
      int dim = 1 + static_cast<int>(rng.uniform_index(5));
      int hidden = 3 + static_cast<int>(rng.uniform_index(5));
      Rng init(derive_seed(1414, static_cast<std::uint64_t>(checked)));
      BaseModel model(arch, dim, hidden, init);
      std::vector<double> x(dim);
      for (int tries = 0;; ++tries) {
        for (double& v : x) v = rng.uniform(-2.0, 2.0);
        if (arch == Arch::linear || tries > 200) break;
        // Keep every hidden pre-activation away from the slope break.
        bool safe = true;
        const auto& q = model.params();
        for (int j = 0; j < hidden && safe; ++j) {
          double u = q[hidden * dim + j];
          for (int d = 0; d < dim; ++d) u += q[j * dim + d] * x[d];
          if (std::fabs(u) < 1e-3) safe = false;
        }
        if (safe) break;
      }
      auto grad = model.raw_gradient(x);
      std::vector<double> params = model.params();
      for (std::size_t j = 0; j < params.size(); ++j) {
        std::vector<double> bumped = params;
        bumped[j] = params[j] + h;
        model.set_params(bumped);
        double up = model.raw(x);
        bumped[j] = params[j] - h;
        model.set_params(bumped);
        double down = model.raw(x);
        model.set_params(params);
        double fd = (up - down) / (2.0 * h);
        worst = std::max(worst, std::fabs(grad[j] - fd) / std::max(1e-6, std::fabs(fd)));
      }
      ++checked;
    }
  }
  record(14, worst <= 1e-5 && checked == 100, false,
         fmt("max relative gradient error %.2e <= 1e-5 over %d points", worst, checked));
}

}  // namespace

int main(int argc, char** argv) {
  std::string out_path = argc > 1 ? argv[1] : "acceptance_summary.json";
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  criterion_13();
  criterion_14();

  int hard_total = 0, hard_passed = 0;
  json criteria = json::array();
  for (const auto& c : g_results) {
    if (!c.soft) {
      ++hard_total;
      if (c.pass) ++hard_passed;
    }
    criteria.push_back({{"id", c.id},
                        {"status", c.pass ? "pass" : (c.soft ? "warn" : "fail")},
                        {"soft", c.soft},
                        {"detail", c.detail}});
  }
  bool all_pass = hard_passed == hard_total;
  json doc{{"criteria", criteria},
           {"hard_passed", hard_passed},
           {"hard_total", hard_total},
           {"all_hard_pass", all_pass},
           {"recorded", g_extra}};
  std::ofstream out(out_path, std::ios::binary);
  out << doc.dump(2) << "\n";
  std::printf("%d/%d hard criteria passed; summary written to %s\n", hard_passed, hard_total,
              out_path.c_str());
  return all_pass ? 0 : 1;
}
