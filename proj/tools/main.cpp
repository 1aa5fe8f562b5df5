#include <cstdint>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairbet/experiments.hpp"
#include "fairbet/version.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

// Exit codes: 0 success, 1 runtime failure, 2 invalid configuration.
constexpr int kRuntimeError = 1;
constexpr int kConfigError = 2;

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const std::exception& e) {
    throw std::invalid_argument("config: invalid JSON: " + std::string(e.what()));
  }
  return json::object();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items())
    if (allowed.count(key) == 0)
      throw std::invalid_argument(where + key + ": unknown config field");
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback, const std::string& where) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw std::invalid_argument(where + key + ": invalid value");
  }
}

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool has_seed = false;
  std::string selector;
  std::string mode;
  std::int64_t T = 0;
  double eta = -1.0;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool with_model_flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file");
  cmd->add_option("--out", flags.out_path, "output path")->required();
  cmd->add_option("--seed", flags.seed, "rng seed (64-bit)")
      ->each([&flags](const std::string&) { flags.has_seed = true; });
  if (with_model_flags) {
    cmd->add_option("--selector", flags.selector, "lambda selector")
        ->check(CLI::IsMember({"swap", "none", "standard", "naive-br"}));
    cmd->add_option("--T", flags.T, "number of rounds");
    cmd->add_option("--eta", flags.eta, "sgd learning rate");
  }
}

std::uint64_t resolve_seed(const CommonFlags& flags, const json& j) {
  if (flags.has_seed) return flags.seed;
  if (j.contains("seed")) return get_or<std::uint64_t>(j, "seed", 0, "");
  throw std::invalid_argument("seed: required (flag --seed or config key)");
}

fairbet::ExactnessConfig parse_exactness(const json& j, const CommonFlags& flags) {
  reject_unknown_keys(j, {"stream", "task", "agent", "arch", "hidden", "eta", "selector",
                          "mode", "k_override", "T", "stride", "forecaster_max_stake",
                          "seed"},
                      "");
  fairbet::ExactnessConfig cfg;
  if (j.contains("stream")) {
    const json& s = j.at("stream");
    if (!s.is_object()) throw std::invalid_argument("stream: must be an object");
    reject_unknown_keys(s, {"kind", "dim", "levels", "period", "csv_path", "csv_features",
                            "csv_outcome", "csv_z"},
                        "stream.");
    cfg.stream.kind = get_or<std::string>(s, "kind", cfg.stream.kind, "stream.");
    cfg.stream.dim = get_or<int>(s, "dim", cfg.stream.dim, "stream.");
    cfg.stream.levels = get_or<int>(s, "levels", cfg.stream.levels, "stream.");
    cfg.stream.period = get_or<std::int64_t>(s, "period", cfg.stream.period, "stream.");
    cfg.stream.csv_path = get_or<std::string>(s, "csv_path", "", "stream.");
    cfg.stream.csv_features =
        get_or<std::vector<std::string>>(s, "csv_features", {}, "stream.");
    cfg.stream.csv_outcome = get_or<std::string>(s, "csv_outcome", "y", "stream.");
    cfg.stream.csv_z = get_or<std::string>(s, "csv_z", "", "stream.");
  }
  cfg.task = fairbet::task_family_from_string(
      get_or<std::string>(j, "task", "one_sided", ""));
  if (j.contains("agent")) {
    const json& a = j.at("agent");
    if (!a.is_object()) throw std::invalid_argument("agent: must be an object");
    reject_unknown_keys(a, {"kind", "max_stake", "stake"}, "agent.");
    cfg.agent.kind = get_or<std::string>(a, "kind", cfg.agent.kind, "agent.");
    cfg.agent.max_stake = get_or<double>(a, "max_stake", cfg.agent.max_stake, "agent.");
    cfg.agent.stake = get_or<double>(a, "stake", cfg.agent.stake, "agent.");
  }
  cfg.arch = fairbet::arch_from_string(get_or<std::string>(j, "arch", "one_hidden", ""));
  cfg.hidden = get_or<int>(j, "hidden", cfg.hidden, "");
  cfg.eta = get_or<double>(j, "eta", cfg.eta, "");
  cfg.selector = fairbet::selector_from_string(
      get_or<std::string>(j, "selector", "swap", ""));
  cfg.mode = fairbet::mode_from_string(get_or<std::string>(j, "mode", "exactness", ""));
  cfg.k_override = get_or<int>(j, "k_override", 0, "");
  cfg.T = get_or<std::int64_t>(j, "T", cfg.T, "");
  cfg.stride = get_or<std::int64_t>(j, "stride", 0, "");
  cfg.forecaster_max_stake =
      get_or<double>(j, "forecaster_max_stake", cfg.forecaster_max_stake, "");
  cfg.seed = resolve_seed(flags, j);

  if (!flags.selector.empty()) cfg.selector = fairbet::selector_from_string(flags.selector);
  if (!flags.mode.empty()) cfg.mode = fairbet::mode_from_string(flags.mode);
  if (flags.T > 0) cfg.T = flags.T;
  if (flags.eta >= 0.0) cfg.eta = flags.eta;
  cfg.validate();
  return cfg;
}

json echo_exactness(const fairbet::ExactnessConfig& cfg) {
  json j;
  j["stream"] = {{"kind", cfg.stream.kind},       {"dim", cfg.stream.dim},
                 {"levels", cfg.stream.levels},   {"period", cfg.stream.period},
                 {"csv_path", cfg.stream.csv_path},
                 {"csv_features", cfg.stream.csv_features},
                 {"csv_outcome", cfg.stream.csv_outcome},
                 {"csv_z", cfg.stream.csv_z}};
  j["task"] = fairbet::to_string(cfg.task);
  j["agent"] = {{"kind", cfg.agent.kind},
                {"max_stake", cfg.agent.max_stake},
                {"stake", cfg.agent.stake}};
  j["arch"] = fairbet::to_string(cfg.arch);
  j["hidden"] = cfg.hidden;
  j["eta"] = cfg.eta;
  j["selector"] = fairbet::to_string(cfg.selector);
  j["mode"] = fairbet::to_string(cfg.mode);
  j["k_override"] = cfg.k_override;
  j["T"] = cfg.T;
  j["stride"] = cfg.stride;
  j["forecaster_max_stake"] = cfg.forecaster_max_stake;
  j["seed"] = cfg.seed;
  return j;
}

fairbet::MarketConfig parse_market(const json& j, const CommonFlags& flags,
                                   std::string* mechanism) {
  reject_unknown_keys(j, {"num_flights", "cautious_frac", "pool_size", "capacity",
                          "route_levels", "selector", "arch", "hidden", "eta",
                          "mechanism", "seed"},
                      "");
  fairbet::MarketConfig cfg;
  cfg.num_flights = get_or<std::int64_t>(j, "num_flights", cfg.num_flights, "");
  cfg.cautious_frac = get_or<double>(j, "cautious_frac", cfg.cautious_frac, "");
  cfg.pool_size = get_or<int>(j, "pool_size", cfg.pool_size, "");
  cfg.capacity = get_or<int>(j, "capacity", cfg.capacity, "");
  cfg.route_levels = get_or<int>(j, "route_levels", cfg.route_levels, "");
  cfg.selector = fairbet::selector_from_string(
      get_or<std::string>(j, "selector", "swap", ""));
  cfg.arch = fairbet::arch_from_string(get_or<std::string>(j, "arch", "linear", ""));
  cfg.hidden = get_or<int>(j, "hidden", cfg.hidden, "");
  cfg.eta = get_or<double>(j, "eta", cfg.eta, "");
  *mechanism = get_or<std::string>(j, "mechanism", "both", "");
  if (*mechanism != "both" && *mechanism != "on" && *mechanism != "off")
    throw std::invalid_argument("mechanism: must be one of both, on, off");
  cfg.seed = resolve_seed(flags, j);
  if (!flags.selector.empty()) cfg.selector = fairbet::selector_from_string(flags.selector);
  if (flags.T > 0) cfg.num_flights = flags.T;
  if (flags.eta >= 0.0) cfg.eta = flags.eta;
  return cfg;
}

json echo_market(const fairbet::MarketConfig& cfg, const std::string& mechanism) {
  json j;
  j["num_flights"] = cfg.num_flights;
  j["cautious_frac"] = cfg.cautious_frac;
  j["pool_size"] = cfg.pool_size;
  j["capacity"] = cfg.capacity;
  j["route_levels"] = cfg.route_levels;
  j["selector"] = fairbet::to_string(cfg.selector);
  j["arch"] = fairbet::to_string(cfg.arch);
  j["hidden"] = cfg.hidden;
  j["eta"] = cfg.eta;
  j["mechanism"] = mechanism;
  j["seed"] = cfg.seed;
  return j;
}

fairbet::AuditConfig parse_audit(const json& j) {
  reject_unknown_keys(j, {"input", "M", "bins", "c0", "subsets", "seed"}, "");
  fairbet::AuditConfig cfg;
  cfg.input_csv = get_or<std::string>(j, "input", "", "");
  cfg.bound = get_or<double>(j, "M", cfg.bound, "");
  cfg.bins = get_or<int>(j, "bins", cfg.bins, "");
  cfg.c0 = get_or<double>(j, "c0", cfg.c0, "");
  if (j.contains("subsets")) {
    const json& s = j.at("subsets");
    if (!s.is_object()) throw std::invalid_argument("subsets: must map names to id lists");
    for (const auto& [name, ids] : s.items()) {
      std::vector<std::string> members;
      try {
        members = ids.get<std::vector<std::string>>();
      } catch (const std::exception&) {
        throw std::invalid_argument("subsets." + name + ": must be a list of ids");
      }
      cfg.subsets.emplace_back(name, std::move(members));
    }
  }
  cfg.validate();
  return cfg;
}

json echo_audit(const fairbet::AuditConfig& cfg) {
  json j;
  j["input"] = cfg.input_csv;
  j["M"] = cfg.bound;
  j["bins"] = cfg.bins;
  j["c0"] = cfg.c0;
  json subsets = json::object();
  for (const auto& [name, ids] : cfg.subsets) subsets[name] = ids;
  j["subsets"] = subsets;
  return j;
}

int run_exactness_cmd(const CommonFlags& flags) {
  fairbet::ExactnessConfig cfg;
  try {
    cfg = parse_exactness(load_config(flags.config_path), flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  fairbet::ExactnessResult result = fairbet::run_exactness_sim(cfg);
  fairbet::write_exactness_csv(result, flags.out_path);
  json extra;
  extra["rows"] = result.rows.size();
  extra["stride"] = result.stride;
  extra["final_avg_payout"] = result.final_avg_payout;
  extra["max_avg_sq_scaled"] = result.max_avg_sq_scaled;
  extra["median_abs_c_final_half"] = result.median_abs_c_final_half;
  fairbet::write_manifest(flags.out_path, echo_exactness(cfg).dump(), cfg.seed,
                          extra.dump());
  return 0;
}

int run_histogram_cmd(const CommonFlags& flags) {
  fairbet::ExactnessConfig cfg;
  try {
    cfg = parse_exactness(load_config(flags.config_path), flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  fairbet::ExactnessResult sim = fairbet::run_exactness_sim(cfg);
  fairbet::HistogramResult hist = fairbet::histogram_of_widths(sim.final_half_c);
  fairbet::write_histogram_csv(hist, flags.out_path);
  json extra;
  extra["samples"] = sim.final_half_c.size();
  extra["below_range"] = hist.below;
  extra["above_range"] = hist.above;
  extra["median_abs_c"] = hist.median_abs_c;
  fairbet::write_manifest(flags.out_path, echo_exactness(cfg).dump(), cfg.seed,
                          extra.dump());
  return 0;
}

int run_market_cmd(const CommonFlags& flags) {
  fairbet::MarketConfig cfg;
  std::string mechanism;
  try {
    cfg = parse_market(load_config(flags.config_path), flags, &mechanism);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  std::vector<fairbet::MarketSeries> series;
  if (mechanism != "off") series.push_back(fairbet::run_market(cfg, true));
  if (mechanism != "on") series.push_back(fairbet::run_market(cfg, false));
  fairbet::write_market_csv(series, flags.out_path);
  json extra = json::array();
  for (const auto& s : series) {
    json js;
    js["mechanism"] = s.mechanism_on ? "on" : "off";
    js["final_revenue_avg"] = s.revenue_avg.back();
    js["final_total_utility_avg"] = s.total_utility_avg.back();
    js["final_insurance_net_avg"] = s.insurance_net_avg.back();
    extra.push_back(js);
  }
  fairbet::write_manifest(flags.out_path, echo_market(cfg, mechanism).dump(), cfg.seed,
                          json{{"series", extra}}.dump());
  return 0;
}

int run_audit_cmd(const CommonFlags& flags) {
  fairbet::AuditConfig cfg;
  try {
    cfg = parse_audit(load_config(flags.config_path));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
  std::string report = fairbet::run_audit_report(cfg);
  fairbet::write_text_file(flags.out_path, report);
  fairbet::write_manifest(flags.out_path, echo_audit(cfg).dump(),
                          flags.has_seed ? flags.seed : 0, "");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fair-bet forecaster, market, and calibration audit runner"};
  app.set_version_flag("--version", fairbet::kVersion);
  app.require_subcommand(1);

  CommonFlags exactness, market, histogram, audit;
  CLI::App* cmd_exactness =
      app.add_subcommand("run-exactness", "online forecaster betting-loss curves");
  add_common(cmd_exactness, exactness, true);
  cmd_exactness->add_option("--mode", exactness.mode, "forecast mode")
      ->check(CLI::IsMember({"exactness", "strict", "monotone"}));

  CLI::App* cmd_market = app.add_subcommand("run-market", "flight-delay market simulation");
  add_common(cmd_market, market, true);

  CLI::App* cmd_histogram =
      app.add_subcommand("run-histogram", "interval-width histogram of a run");
  add_common(cmd_histogram, histogram, true);
  cmd_histogram->add_option("--mode", histogram.mode, "forecast mode")
      ->check(CLI::IsMember({"exactness", "strict", "monotone"}));

  CLI::App* cmd_audit = app.add_subcommand("run-audit", "offline calibration audit");
  add_common(cmd_audit, audit, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: args: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (cmd_exactness->parsed()) return run_exactness_cmd(exactness);
    if (cmd_market->parsed()) return run_market_cmd(market);
    if (cmd_histogram->parsed()) return run_histogram_cmd(histogram);
    if (cmd_audit->parsed()) return run_audit_cmd(audit);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeError;
  }
  return 0;
}
