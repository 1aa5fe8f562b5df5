#pragma once

#include <cstdint>
#include <vector>

#include "fairbet/forecaster.hpp"
#include "fairbet/rng.hpp"
#include "fairbet/streams.hpp"

namespace fairbet {

enum class PassengerType { naive, trustful, cautious };

struct PassengerProfile {
  PassengerType type = PassengerType::naive;
  double r_alt = 0.0;    // utility of the alternative option
  double r_trip = 0.0;   // reward of the trip
  double c_delay = 0.0;  // cost of a delayed flight
};

// Premium paid on no-delay for a payout of b1 on delay; the pair is a fair
// bet at probability mu + c. Requires mu + c < 1 and b1 >= 0.
double quote(double mu, double c, double b1);

// Maximum ticket price the passenger accepts. Cautious passengers assume
// certain delay without the mechanism and the insured deterministic
// utility with it (effective delay probability mu + c).
double willingness_to_pay(const PassengerProfile& p, double mu, double c, bool mechanism_on);

struct FlightReport {
  double price = 0.0;
  int tickets = 0;
  double revenue = 0.0;
  double passenger_utility = 0.0;  // includes non-flyers' r_alt and transfers
  double insurance_net = 0.0;      // airline side; negative when paying out
  double total_utility = 0.0;      // revenue + insurance_net + passenger_utility
  double insured_stake = 0.0;      // aggregated fair-bet stake B
  int y = 0;
  double mu = 0.0;
  double c = 0.0;
  double lambda = 0.0;
};

// Clears one flight: prices at the 300th-largest willingness to pay (or
// the smallest positive one under low demand), settles delay insurance for
// cautious flyers (risk-zeroing amount, outcome-independent utility), and
// feeds the forecaster one aggregated round (b = 0 when the mechanism is
// off, so learning and rng streams match across on/off runs).
FlightReport clear_flight(const std::vector<PassengerProfile>& pool, int capacity,
                          double mu_star, int y, bool mechanism_on,
                          ExactForecaster& forecaster, const std::vector<double>& x);

struct MarketConfig {
  std::int64_t num_flights = 500;
  double cautious_frac = 0.5;
  int pool_size = 1000;
  int capacity = 300;
  int route_levels = 16;
  SelectorKind selector = SelectorKind::swap;
  Arch arch = Arch::linear;
  int hidden = 32;
  double eta = 0.01;
  std::uint64_t seed = 0;
};

struct MarketSeries {
  bool mechanism_on = false;
  // Cumulative per-passenger averages after each flight.
  std::vector<double> revenue_avg;
  std::vector<double> total_utility_avg;
  std::vector<double> insurance_net_avg;
  std::vector<FlightReport> flights;
};

// Runs one market series. Pools and flight outcomes depend only on the
// seed, not on mechanism_on, so on/off series at the same seed face
// identical flights.
MarketSeries run_market(const MarketConfig& cfg, bool mechanism_on);

PassengerProfile sample_passenger(double cautious_frac, Rng& rng);

}  // namespace fairbet
