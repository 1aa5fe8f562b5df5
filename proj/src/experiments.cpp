#include "fairbet/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "fairbet/csv.hpp"
#include "fairbet/version.hpp"
#include "json.hpp"

namespace fairbet {

using nlohmann::json;

std::unique_ptr<NatureStream> make_stream(const StreamSpec& spec, std::int64_t horizon,
                                          std::uint64_t seed) {
  auto is = [&](const char* a, const char* b) { return spec.kind == a || spec.kind == b; };
  if (is("iid_logistic", "iid-logistic")) return make_iid_logistic(spec.dim, seed);
  if (spec.kind == "drift") return make_drift(spec.dim, horizon, seed);
  if (is("drift_one_hot", "drift-one-hot"))
    return make_drift_one_hot(spec.levels, horizon, seed);
  if (is("digit_latent", "digit-latent")) return make_digit_latent(seed);
  if (is("adversarial_flip", "adversarial-flip"))
    return make_adversarial_flip(spec.dim, spec.period, seed);
  if (spec.kind == "csv") {
    CsvSchema schema;
    schema.feature_columns = spec.csv_features;
    schema.outcome_column = spec.csv_outcome;
    schema.z_column = spec.csv_z;
    return ingest_csv(spec.csv_path, schema);
  }
  throw std::invalid_argument("stream.kind: unknown '" + spec.kind + "'");
}

AgentPolicy make_agent(const AgentSpec& spec) {
  if (spec.kind == "honest") return AgentPolicy::honest_insured();
  if (spec.kind == "uninsured") return AgentPolicy::uninsured();
  if (spec.kind == "worst_case") return AgentPolicy::worst_case();
  if (spec.kind == "adversarial") return AgentPolicy::adversarial(spec.max_stake);
  if (spec.kind == "malicious") return AgentPolicy::malicious_constant(spec.stake, spec.max_stake);
  throw std::invalid_argument("agent.kind: unknown '" + spec.kind + "'");
}

void ExactnessConfig::validate() const {
  if (T < 2) throw std::invalid_argument("T: must be >= 2");
  if (stride < 0) throw std::invalid_argument("stride: must be >= 0");
  if (!(eta >= 0.0) || !std::isfinite(eta))
    throw std::invalid_argument("eta: must be finite and >= 0");
  if (k_override < 0) throw std::invalid_argument("k_override: must be >= 0");
  if (hidden < 1) throw std::invalid_argument("hidden: must be >= 1");
  if (!(forecaster_max_stake > 0.0))
    throw std::invalid_argument("forecaster_max_stake: must be > 0");
  make_agent(agent);  // rejects unknown kinds and bad stakes
  if (stream.kind == "csv" && stream.csv_path.empty())
    throw std::invalid_argument("stream.csv_path: required for csv streams");
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path '" + path + "'");
  return out;
}

double scaled_stat(double avg, std::int64_t t) {
  if (t < 2) return 0.0;
  double td = static_cast<double>(t);
  return avg * avg * std::sqrt(td / std::log(td));
}

double median_abs(std::vector<double> v) {
  if (v.empty()) return 0.0;
  for (double& x : v) x = std::fabs(x);
  auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  if (v.size() % 2 == 1) return *mid;
  double hi = *mid;
  double lo = *std::max_element(v.begin(), mid);
  return 0.5 * (lo + hi);
}

}  // namespace

ExactnessResult run_exactness_sim(const ExactnessConfig& cfg) {
  cfg.validate();
  auto stream = make_stream(cfg.stream, cfg.T, derive_seed(cfg.seed, 21));
  DecisionTaskSampler tasks(cfg.task, derive_seed(cfg.seed, 22));
  AgentPolicy agent = make_agent(cfg.agent);

  ForecasterConfig fc;
  fc.arch = cfg.arch;
  fc.dim = stream->dim();
  fc.hidden = cfg.hidden;
  fc.eta = cfg.eta;
  fc.horizon = cfg.T;
  fc.k_override = cfg.k_override;
  fc.selector = cfg.selector;
  fc.mode = cfg.mode;
  fc.max_stake = cfg.forecaster_max_stake;
  fc.seed = derive_seed(cfg.seed, 23);
  ExactForecaster forecaster(fc);

  ExactnessResult result;
  result.T = cfg.T;
  result.stride = cfg.stride > 0 ? cfg.stride : std::max<std::int64_t>(1, cfg.T / 2000);
  result.has_mu_star = stream->has_mu_star();

  std::int64_t tenth = std::max<std::int64_t>(1, cfg.T / 10);
  for (std::int64_t t = 1; t <= cfg.T; ++t) {
    auto round = stream->next();
    if (!round)
      throw std::runtime_error("stream: exhausted after " + std::to_string(t - 1) + " rounds");
    LossSpec l = tasks.sample(round->z);
    Forecast f = forecaster.predict(round->x);
    auto decision = agent.decide(l, f, result.has_mu_star
                                            ? std::optional<double>(round->mu_star)
                                            : std::nullopt);
    ObservedRound obs = forecaster.observe(round->y, decision.stake);

    double avg = obs.cum_betting_loss / static_cast<double>(t);
    double scaled = scaled_stat(avg, t);
    if (t >= 2) result.max_avg_sq_scaled = std::max(result.max_avg_sq_scaled, scaled);
    if (t == tenth) result.avg_payout_at_tenth = avg;
    if (2 * t > cfg.T) result.final_half_c.push_back(obs.c);
    if (t % result.stride == 0 || t == cfg.T) {
      ExactnessRow row;
      row.t = t;
      row.cum_payout = obs.cum_betting_loss;
      row.avg_payout = avg;
      row.avg_payout_sq_scaled = scaled;
      row.c = obs.c;
      row.lambda = obs.lambda;
      row.mu = obs.mu;
      row.mu_star = result.has_mu_star ? round->mu_star : 0.0;
      row.b = obs.b;
      result.rows.push_back(row);
    }
    if (t == cfg.T) {
      result.final_cum_payout = obs.cum_betting_loss;
      result.final_avg_payout = avg;
    }
  }
  result.median_abs_c_final_half = median_abs(result.final_half_c);
  return result;
}

void write_exactness_csv(const ExactnessResult& result, const std::string& path) {
  std::ofstream stream = open_out(path);
  csv::Writer out(stream);
  std::vector<std::string> header = {"t",   "cum_payout", "avg_payout",
                                     "avg_payout_sq_scaled", "c_t", "lambda_t", "mu_t"};
  if (result.has_mu_star) header.push_back("mu_star_t");
  header.push_back("b_t");
  out.row(header);
  for (const auto& r : result.rows) {
    std::vector<std::string> cells = {csv::format(r.t),
                                      csv::format(r.cum_payout),
                                      csv::format(r.avg_payout),
                                      csv::format(r.avg_payout_sq_scaled),
                                      csv::format(r.c),
                                      csv::format(r.lambda),
                                      csv::format(r.mu)};
    if (result.has_mu_star) cells.push_back(csv::format(r.mu_star));
    cells.push_back(csv::format(r.b));
    out.row(cells);
  }
}

HistogramResult histogram_of_widths(const std::vector<double>& widths) {
  HistogramResult result;
  result.counts.assign(kHistogramBins, 0);
  double bin_width = (kHistogramHi - kHistogramLo) / kHistogramBins;
  for (double c : widths) {
    if (c < kHistogramLo) {
      result.below += 1;
    } else if (c > kHistogramHi) {
      result.above += 1;
    } else {
      auto k = static_cast<std::int64_t>(std::floor((c - kHistogramLo) / bin_width));
      k = std::clamp<std::int64_t>(k, 0, kHistogramBins - 1);
      result.counts[static_cast<std::size_t>(k)] += 1;
    }
  }
  result.median_abs_c = median_abs(widths);
  return result;
}

void write_histogram_csv(const HistogramResult& result, const std::string& path) {
  std::ofstream stream = open_out(path);
  csv::Writer out(stream);
  out.row({"bin_lo", "bin_hi", "count"});
  double bin_width = (kHistogramHi - kHistogramLo) / kHistogramBins;
  for (int k = 0; k < kHistogramBins; ++k) {
    // Both edges from k so adjacent rows share the boundary bit for bit.
    double lo = kHistogramLo + k * bin_width;
    double hi = kHistogramLo + (k + 1) * bin_width;
    out.row({csv::format(lo), csv::format(hi),
             csv::format(result.counts[static_cast<std::size_t>(k)])});
  }
}

void write_market_csv(const std::vector<MarketSeries>& series, const std::string& path) {
  std::ofstream stream = open_out(path);
  csv::Writer out(stream);
  out.row({"flight", "mechanism", "price", "tickets", "revenue", "passenger_utility",
           "insurance_net", "total_utility", "y", "mu_t", "c_t", "lambda_t",
           "revenue_avg", "total_utility_avg", "insurance_net_avg"});
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.flights.size(); ++i) {
      const FlightReport& f = s.flights[i];
      out.row({csv::format(static_cast<std::int64_t>(i + 1)),
               std::string(s.mechanism_on ? "on" : "off"),
               csv::format(f.price),
               csv::format(static_cast<std::int64_t>(f.tickets)),
               csv::format(f.revenue),
               csv::format(f.passenger_utility),
               csv::format(f.insurance_net),
               csv::format(f.total_utility),
               csv::format(static_cast<std::int64_t>(f.y)),
               csv::format(f.mu),
               csv::format(f.c),
               csv::format(f.lambda),
               csv::format(s.revenue_avg[i]),
               csv::format(s.total_utility_avg[i]),
               csv::format(s.insurance_net_avg[i])});
    }
  }
}

void AuditConfig::validate() const {
  if (input_csv.empty()) throw std::invalid_argument("input: sample CSV path required");
  if (!(bound >= 0.0) || !std::isfinite(bound))
    throw std::invalid_argument("M: must be finite and >= 0");
  if (bins < 1) throw std::invalid_argument("bins: must be >= 1");
  if (!(c0 >= 0.0) || !std::isfinite(c0))
    throw std::invalid_argument("c0: must be finite and >= 0");
}

namespace {

json audit_metrics(const DiscreteDistribution& dist, const TableForecaster& fc, double bound) {
  json j;
  j["mce"] = mce(dist, fc);
  j["gap_standard"] = soundness_gap(dist, fc, BetClass::functions_of_mu, bound);
  j["gap_pointwise"] = soundness_gap(dist, fc, BetClass::functions_of_x, bound);
  return j;
}

}  // namespace

std::string run_audit_report(const AuditConfig& cfg) {
  cfg.validate();
  SampleSet samples = samples_from_csv(cfg.input_csv);
  if (samples.rows().empty()) throw std::invalid_argument("input: sample CSV has no rows");
  DiscreteDistribution dist = samples.to_distribution();
  TableForecaster fc = samples.to_forecaster();

  std::vector<Subset> subsets;
  subsets.push_back({"all", [](const std::string&) { return true; }});
  for (const auto& [name, ids] : cfg.subsets) {
    std::set<std::string> members(ids.begin(), ids.end());
    subsets.push_back({name, [members](const std::string& id) { return members.count(id) > 0; }});
  }
  MulticalibrationReport multi = multicalibration_gap(dist, fc, subsets, cfg.c0);

  TableForecaster binned = histogram_binning(samples, cfg.bins);

  json report;
  report["samples"] = samples.rows().size();
  report["M"] = cfg.bound;
  report["before"] = audit_metrics(dist, fc, cfg.bound);
  report["after_binning"] = audit_metrics(dist, binned, cfg.bound);
  report["after_binning"]["bins"] = cfg.bins;
  json mc;
  mc["c0"] = cfg.c0;
  mc["multicalibrated"] = multi.multicalibrated;
  mc["subsets"] = json::array();
  for (const auto& s : multi.subsets) {
    json js;
    js["name"] = s.name;
    js["skipped"] = s.skipped;
    if (s.skipped) {
      js["note"] = s.note;
    } else {
      js["mass"] = s.mass;
      js["gap"] = s.gap;
      js["max_violation"] = s.max_violation;
      js["ok"] = s.ok;
    }
    mc["subsets"].push_back(js);
  }
  report["multicalibration"] = mc;
  return report.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output path '" + path + "'");
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed for '" + path + "'");
}

void write_manifest(const std::string& out_path, const std::string& config_echo_json,
                    std::uint64_t seed, const std::string& extra_json) {
  json manifest;
  manifest["version"] = kVersion;
  manifest["seed"] = seed;
  manifest["rng"] = {{"algorithm", Rng::kAlgorithm}};
  manifest["config"] = json::parse(config_echo_json);
  if (!extra_json.empty()) manifest["run"] = json::parse(extra_json);
  write_text_file(out_path + ".manifest.json", manifest.dump(2) + "\n");
}

}  // namespace fairbet
