#include "fairbet/market.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairbet {

namespace {

// A quote exists only when mu + c stays below 1.
constexpr double kQuoteCap = 1.0 - 1e-9;

// Largest per-passenger delay cost, for stake normalization.
const double kMaxDelayCost = 0.2 * std::exp(9.0);

}  // namespace

double quote(double mu, double c, double b1) {
  if (!(b1 >= 0.0)) throw std::invalid_argument("quote: b1 must be >= 0");
  if (!(mu + c < 1.0)) throw std::invalid_argument("quote: mu + c must be below 1");
  return b1 * (mu + c) / (1.0 - mu - c);
}

double willingness_to_pay(const PassengerProfile& p, double mu, double c, bool mechanism_on) {
  switch (p.type) {
    case PassengerType::naive:
      return p.r_trip - p.r_alt;
    case PassengerType::trustful:
      return p.r_trip - mu * p.c_delay - p.r_alt;
    case PassengerType::cautious:
      if (mechanism_on && mu + c < kQuoteCap)
        return p.r_trip - (mu + c) * p.c_delay - p.r_alt;
      return p.r_trip - p.c_delay - p.r_alt;  // worst case: certain delay
  }
  throw std::logic_error("passenger: unreachable");
}

PassengerProfile sample_passenger(double cautious_frac, Rng& rng) {
  PassengerProfile p;
  p.r_alt = rng.uniform(0.0, 200.0);
  p.r_trip = rng.uniform(0.0, 400.0);
  p.c_delay = 0.2 * std::exp(rng.uniform(4.0, 9.0));
  double u = rng.uniform();
  if (u < cautious_frac) p.type = PassengerType::cautious;
  else if (u < cautious_frac + (1.0 - cautious_frac) / 2.0) p.type = PassengerType::naive;
  else p.type = PassengerType::trustful;
  return p;
}

FlightReport clear_flight(const std::vector<PassengerProfile>& pool, int capacity,
                          double mu_star, int y, bool mechanism_on,
                          ExactForecaster& forecaster, const std::vector<double>& x) {
  if (pool.empty()) throw std::invalid_argument("flight: empty passenger pool");
  (void)mu_star;
  Forecast f = forecaster.predict(x);
  bool quotable = mechanism_on && f.mu + f.c < kQuoteCap;

  std::vector<double> wtp(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    wtp[i] = willingness_to_pay(pool[i], f.mu, f.c, mechanism_on);

  // Price at the capacity-th largest willingness to pay; under low demand,
  // at the smallest positive one (all positive-wtp passengers fly).
  std::vector<double> sorted = wtp;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  auto cap = static_cast<std::size_t>(capacity);
  double price = 0.0;
  std::size_t positive = 0;
  while (positive < sorted.size() && sorted[positive] > 0.0) ++positive;
  if (positive >= cap) price = sorted[cap - 1];
  else if (positive > 0) price = sorted[positive - 1];

  FlightReport report;
  report.y = y;
  report.mu = f.mu;
  report.c = f.c;

  std::vector<std::size_t> flyers;
  if (positive > 0) {
    for (std::size_t i = 0; i < pool.size() && flyers.size() < cap; ++i)
      if (wtp[i] >= price) flyers.push_back(i);
  }

  // Cautious flyers insure with the risk-zeroing amount: payout
  // b1 = c_delay (1 - mu - c) on delay, premium b0 = c_delay (mu + c)
  // otherwise; either way their net delay exposure is (mu + c) c_delay.
  // The equivalent fair-bet stake is b1 / (1 - mu - c) = c_delay.
  double stake_total = 0.0;
  double payout_on_delay = 0.0;  // sum of b1
  double premium_on_time = 0.0;  // sum of b0
  for (std::size_t i : flyers) {
    const PassengerProfile& p = pool[i];
    if (p.type == PassengerType::cautious && quotable) {
      double b1 = p.c_delay * (1.0 - f.mu - f.c);
      stake_total += p.c_delay;
      payout_on_delay += b1;
      premium_on_time += quote(f.mu, f.c, b1);
    }
  }

  double to_passengers = (y == 1) ? payout_on_delay : -premium_on_time;
  report.insurance_net = -to_passengers;
  report.insured_stake = stake_total;
  report.price = price;
  report.tickets = static_cast<int>(flyers.size());
  report.revenue = price * static_cast<double>(flyers.size());

  double utility = 0.0;
  std::vector<char> flying(pool.size(), 0);
  for (std::size_t i : flyers) flying[i] = 1;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    const PassengerProfile& p = pool[i];
    if (!flying[i]) {
      utility += p.r_alt;
      continue;
    }
    double u = p.r_trip - price - (y == 1 ? p.c_delay : 0.0);
    if (p.type == PassengerType::cautious && quotable) {
      double b1 = p.c_delay * (1.0 - f.mu - f.c);
      u += (y == 1) ? b1 : -quote(f.mu, f.c, b1);
    }
    utility += u;
  }
  report.passenger_utility = utility;
  report.total_utility = report.revenue + report.insurance_net + utility;

  // Learning rounds carry the negated, pool-normalized insured stake: the
  // betting loss at -b equals the insured side's net payout at +b, so driving
  // its average to zero calibrates the premium edge mu + c to the delay rate.
  double learn_stake = 0.0;
  if (mechanism_on && stake_total > 0.0)
    learn_stake = -stake_total / (static_cast<double>(pool.size()) * kMaxDelayCost);
  ObservedRound round = forecaster.observe(y, learn_stake);
  report.lambda = round.lambda;
  return report;
}

MarketSeries run_market(const MarketConfig& cfg, bool mechanism_on) {
  if (cfg.num_flights < 2) throw std::invalid_argument("market: need at least two flights");
  if (cfg.capacity < 1 || cfg.capacity > cfg.pool_size)
    throw std::invalid_argument("market: capacity must be in [1, pool_size]");
  if (cfg.cautious_frac < 0.0 || cfg.cautious_frac > 1.0)
    throw std::invalid_argument("market: cautious_frac must be in [0, 1]");

  auto nature = make_drift_one_hot(cfg.route_levels, cfg.num_flights,
                                   derive_seed(cfg.seed, 11));
  Rng pool_rng(derive_seed(cfg.seed, 12));

  ForecasterConfig fc;
  fc.arch = cfg.arch;
  fc.dim = cfg.route_levels;
  fc.hidden = cfg.hidden;
  fc.eta = cfg.eta;
  fc.horizon = cfg.num_flights;
  fc.selector = cfg.selector;
  fc.mode = ForecastMode::exactness;
  // Learning stakes are pool-normalized, so they stay within [-1, 0].
  fc.max_stake = 1.0;
  fc.seed = derive_seed(cfg.seed, 13);
  ExactForecaster forecaster(fc);

  MarketSeries series;
  series.mechanism_on = mechanism_on;
  double cum_revenue = 0.0;
  double cum_total = 0.0;
  double cum_insurance = 0.0;
  for (std::int64_t flight = 0; flight < cfg.num_flights; ++flight) {
    auto round = nature->next();
    std::vector<PassengerProfile> pool(static_cast<std::size_t>(cfg.pool_size));
    for (auto& p : pool) p = sample_passenger(cfg.cautious_frac, pool_rng);
    FlightReport report = clear_flight(pool, cfg.capacity, round->mu_star, round->y,
                                       mechanism_on, forecaster, round->x);
    cum_revenue += report.revenue;
    cum_total += report.total_utility;
    cum_insurance += report.insurance_net;
    double denom = static_cast<double>((flight + 1) * cfg.pool_size);
    series.revenue_avg.push_back(cum_revenue / denom);
    series.total_utility_avg.push_back(cum_total / denom);
    series.insurance_net_avg.push_back(cum_insurance / denom);
    series.flights.push_back(report);
  }
  return series;
}

}  // namespace fairbet
