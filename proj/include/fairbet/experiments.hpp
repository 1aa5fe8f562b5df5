#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "fairbet/agents.hpp"
#include "fairbet/forecaster.hpp"
#include "fairbet/market.hpp"
#include "fairbet/offline.hpp"
#include "fairbet/streams.hpp"

namespace fairbet {

struct StreamSpec {
  std::string kind = "drift";  // iid_logistic | drift | drift_one_hot |
                               // digit_latent | adversarial_flip | csv
  int dim = 5;
  int levels = 16;
  std::int64_t period = 500;
  std::string csv_path;
  std::vector<std::string> csv_features;
  std::string csv_outcome = "y";
  std::string csv_z;
};

std::unique_ptr<NatureStream> make_stream(const StreamSpec& spec, std::int64_t horizon,
                                          std::uint64_t seed);

struct AgentSpec {
  std::string kind = "honest";  // honest | uninsured | worst_case |
                                // adversarial | malicious
  double max_stake = 1.0;
  double stake = 1.0;  // fixed stake for the malicious policy
};

AgentPolicy make_agent(const AgentSpec& spec);

struct ExactnessConfig {
  StreamSpec stream;
  TaskFamily task = TaskFamily::one_sided;
  AgentSpec agent;
  Arch arch = Arch::one_hidden;
  int hidden = 32;
  double eta = 0.01;
  SelectorKind selector = SelectorKind::swap;
  ForecastMode mode = ForecastMode::exactness;
  int k_override = 0;
  std::int64_t T = 100000;
  std::int64_t stride = 0;         // 0 picks max(1, T / 2000)
  double forecaster_max_stake = 100.0;
  std::uint64_t seed = 0;

  void validate() const;  // throws with the offending field named
};

struct ExactnessRow {
  std::int64_t t = 0;
  double cum_payout = 0.0;  // cumulative betting loss b(mu - y) - |b|c
  double avg_payout = 0.0;
  double avg_payout_sq_scaled = 0.0;  // avg^2 sqrt(t / log t), 0 at t = 1
  double c = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double mu_star = 0.0;
  double b = 0.0;
};

struct ExactnessResult {
  std::int64_t T = 0;
  std::int64_t stride = 1;
  bool has_mu_star = false;
  std::vector<ExactnessRow> rows;  // thinned to the stride, final row kept
  double final_cum_payout = 0.0;
  double final_avg_payout = 0.0;
  double avg_payout_at_tenth = 0.0;  // at t = max(1, T/10)
  double max_avg_sq_scaled = 0.0;    // over t >= 2
  std::vector<double> final_half_c;  // emitted widths for t > T/2
  double median_abs_c_final_half = 0.0;
};

ExactnessResult run_exactness_sim(const ExactnessConfig& cfg);

void write_exactness_csv(const ExactnessResult& result, const std::string& path);

inline constexpr int kHistogramBins = 50;
inline constexpr double kHistogramLo = -0.5;
inline constexpr double kHistogramHi = 1.5;

struct HistogramResult {
  std::vector<std::int64_t> counts;  // kHistogramBins equal bins
  std::int64_t below = 0;            // c < lo
  std::int64_t above = 0;            // c > hi
  double median_abs_c = 0.0;
};

HistogramResult histogram_of_widths(const std::vector<double>& widths);

void write_histogram_csv(const HistogramResult& result, const std::string& path);

void write_market_csv(const std::vector<MarketSeries>& series, const std::string& path);

struct AuditConfig {
  std::string input_csv;
  double bound = 1.0;  // stake bound M for the gaps
  int bins = 10;
  double c0 = 0.1;
  std::vector<std::pair<std::string, std::vector<std::string>>> subsets;

  void validate() const;
};

// JSON report: MCE, per-class gaps, multicalibration verdict, and the same
// metrics after histogram binning.
std::string run_audit_report(const AuditConfig& cfg);

void write_text_file(const std::string& path, const std::string& text);

// Sidecar manifest next to every artifact: config echo, code version, seed,
// rng algorithm, and run annotations.
void write_manifest(const std::string& out_path, const std::string& config_echo_json,
                    std::uint64_t seed, const std::string& extra_json);

}  // namespace fairbet
