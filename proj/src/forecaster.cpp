#include "fairbet/forecaster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fairbet/version.hpp"
#include "json.hpp"

namespace fairbet {

namespace {

using nlohmann::json;

constexpr int kSnapshotVersion = 1;

}  // namespace

const char* to_string(SelectorKind k) {
  switch (k) {
    case SelectorKind::swap: return "swap";
    case SelectorKind::none: return "none";
    case SelectorKind::standard: return "standard";
    case SelectorKind::naive_br: return "naive-br";
  }
  return "?";
}

const char* to_string(ForecastMode m) {
  switch (m) {
    case ForecastMode::exactness: return "exactness";
    case ForecastMode::strict: return "strict";
    case ForecastMode::monotone: return "monotone";
  }
  return "?";
}

const char* to_string(Arch a) {
  return a == Arch::linear ? "linear" : "one_hidden";
}

SelectorKind selector_from_string(const std::string& s) {
  if (s == "swap") return SelectorKind::swap;
  if (s == "none") return SelectorKind::none;
  if (s == "standard") return SelectorKind::standard;
  if (s == "naive-br") return SelectorKind::naive_br;
  throw std::invalid_argument("selector: unknown variant '" + s + "'");
}

ForecastMode mode_from_string(const std::string& s) {
  if (s == "exactness") return ForecastMode::exactness;
  if (s == "strict") return ForecastMode::strict;
  if (s == "monotone") return ForecastMode::monotone;
  throw std::invalid_argument("mode: unknown mode '" + s + "'");
}

Arch arch_from_string(const std::string& s) {
  if (s == "linear") return Arch::linear;
  if (s == "one_hidden") return Arch::one_hidden;
  throw std::invalid_argument("arch: unknown architecture '" + s + "'");
}

LambdaSelector::LambdaSelector(SelectorKind kind, int num_bins, std::uint64_t seed)
    : kind_(kind) {
  if (kind_ == SelectorKind::swap) ftl_ = std::make_unique<BinnedFtl>(num_bins, seed);
  else if (kind_ == SelectorKind::standard) ftl_ = std::make_unique<BinnedFtl>(1, seed);
}

int LambdaSelector::num_bins() const { return ftl_ ? ftl_->num_bins() : 1; }

LambdaSelector::Choice LambdaSelector::select() {
  if (awaiting_observe_) throw std::logic_error("selector: previous round not observed");
  awaiting_observe_ = true;
  if (ftl_) {
    BinnedFtl::Selection sel = ftl_->select();
    return {sel.lambda, sel.bin};
  }
  if (kind_ == SelectorKind::none) return {0.0, -1};
  // naive_br: the lambda that would have zeroed the cumulative betting
  // loss so far; unclipped.
  double lambda = naive_.sum_ss > 0.0 ? -naive_.sum_rs / naive_.sum_ss : 0.0;
  return {lambda, -1};
}

void LambdaSelector::observe(const Choice& choice, double r, double s) {
  if (!awaiting_observe_) throw std::logic_error("selector: no pending selection");
  awaiting_observe_ = false;
  if (ftl_) {
    ftl_->observe(choice.bin, r, s);
    return;
  }
  if (kind_ == SelectorKind::naive_br) {
    naive_.sum_rs += r * s;
    naive_.sum_ss += s * s;
    naive_.count += 1;
  }
}

int bins_for_horizon(std::int64_t horizon) {
  if (horizon < 2) throw std::invalid_argument("horizon: T must be >= 2");
  double t = static_cast<double>(horizon);
  return std::max(1, static_cast<int>(std::ceil(std::pow(t / std::log(t), 0.25))));
}

namespace {

Rng make_init_rng(const ForecasterConfig& cfg) { return Rng(derive_seed(cfg.seed, 1)); }

void validate_config(const ForecasterConfig& cfg) {
  if (cfg.horizon < 2) throw std::invalid_argument("horizon: T must be >= 2");
  if (!(cfg.eta > 0.0)) throw std::invalid_argument("eta: must be positive");
  if (cfg.dim < 1) throw std::invalid_argument("dim: must be >= 1");
  if (cfg.k_override < 0) throw std::invalid_argument("k_override: must be >= 0");
  if (!(cfg.max_stake > 0.0)) throw std::invalid_argument("max_stake: must be positive");
}

}  // namespace

ExactForecaster::ExactForecaster(const ForecasterConfig& cfg)
    : cfg_((validate_config(cfg), cfg)),
      num_bins_(cfg.k_override > 0 ? cfg.k_override : bins_for_horizon(cfg.horizon)),
      mu_model_([&] {
        Rng rng = make_init_rng(cfg_);
        return BaseModel(cfg_.arch, cfg_.dim, cfg_.hidden, rng);
      }()),
      c_model_([&] {
        // Draw after the mu model: one derived stream, fixed order.
        Rng rng = make_init_rng(cfg_);
        BaseModel skip(cfg_.arch, cfg_.dim, cfg_.hidden, rng);
        return BaseModel(cfg_.arch, cfg_.dim, cfg_.hidden, rng);
      }()),
      selector_(cfg_.selector, num_bins_, derive_seed(cfg_.seed, 2)) {}

Forecast ExactForecaster::predict(const std::vector<double>& x) {
  if (pending_) throw std::logic_error("predict: previous round not observed");
  Pending p;
  p.x = x;
  p.mu_hat_raw = mu_model_.raw(x);
  p.c_hat_raw = c_model_.raw(x);
  p.mu_hat = std::clamp(p.mu_hat_raw, kProbEpsilon, 1.0 - kProbEpsilon);
  p.c_hat = std::clamp(p.c_hat_raw, 0.0, 1.0);
  p.choice = selector_.select();
  double width = p.c_hat + p.choice.lambda;
  switch (cfg_.mode) {
    case ForecastMode::exactness:
      p.emitted = {p.mu_hat, width};
      break;
    case ForecastMode::monotone:
      // Fold the width into the probability; clamped only for finiteness.
      p.emitted = {std::clamp(p.mu_hat - width, kProbEpsilon - 1.0, 2.0), 0.0};
      break;
    case ForecastMode::strict: {
      double cap = std::max(0.0, std::min(p.mu_hat, 1.0 - p.mu_hat) - kProbEpsilon);
      p.emitted = {p.mu_hat, std::clamp(width, 0.0, cap)};
      break;
    }
  }
  pending_ = std::move(p);
  return pending_->emitted;
}

ObservedRound ExactForecaster::observe(int y, double b) {
  if (!pending_) throw std::logic_error("observe: no pending prediction");
  if (y != 0 && y != 1) throw std::invalid_argument("outcome: must be 0 or 1");
  if (!std::isfinite(b)) throw std::invalid_argument("stake: non-finite");
  if (std::fabs(b) > cfg_.max_stake) throw std::invalid_argument("stake: |b| exceeds the bound");
  if (cfg_.mode == ForecastMode::monotone && b < 0.0)
    throw std::invalid_argument("stake: monotone mode requires b >= 0");
  Pending p = std::move(*pending_);
  pending_.reset();

  ObservedRound round;
  round.t = ++t_;
  round.mu_hat = p.mu_hat;
  round.c_hat = p.c_hat;
  round.lambda = p.choice.lambda;
  round.bin = p.choice.bin;
  round.mu = p.emitted.mu;
  round.c = p.emitted.c;
  round.b = b;
  round.y = y;

  // 0/0 = 0 convention for the zero stake.
  if (b != 0.0) {
    double root = std::sqrt(std::fabs(b));
    round.r = (b / root) * (p.mu_hat - y) - root * p.c_hat;
    round.s = -root;
  }
  if (cfg_.mode == ForecastMode::strict) {
    round.betting_loss = b * (p.emitted.mu - y) - std::fabs(b) * p.emitted.c;
  } else {
    round.betting_loss =
        b * (p.mu_hat - y) - std::fabs(b) * (p.c_hat + p.choice.lambda);
  }
  round.payout = b * (y - p.emitted.mu) - std::fabs(b) * p.emitted.c;
  cum_betting_loss_ += round.betting_loss;
  round.cum_betting_loss = cum_betting_loss_;

  selector_.observe(p.choice, round.r, round.s);
  // theta against (mu_raw - y)^2; phi against (b(mu_hat - y) - |b| c_raw)^2,
  // both on raw outputs.
  mu_model_.sgd_step(p.x, 2.0 * (p.mu_hat_raw - y), cfg_.eta);
  double abs_b = std::fabs(b);
  double c_residual = b * (p.mu_hat - y) - abs_b * p.c_hat_raw;
  c_model_.sgd_step(p.x, -2.0 * abs_b * c_residual, cfg_.eta);
  return round;
}

std::string ExactForecaster::save_snapshot() const {
  if (pending_) throw std::logic_error("snapshot: round in progress");
  json j;
  j["format"] = "fairbet-forecaster-snapshot";
  j["snapshot_version"] = kSnapshotVersion;
  j["library_version"] = kVersion;
  j["config"] = {{"arch", to_string(cfg_.arch)},
                 {"dim", cfg_.dim},
                 {"hidden", cfg_.hidden},
                 {"eta", cfg_.eta},
                 {"horizon", cfg_.horizon},
                 {"k_override", cfg_.k_override},
                 {"selector", to_string(cfg_.selector)},
                 {"mode", to_string(cfg_.mode)},
                 {"max_stake", cfg_.max_stake},
                 {"seed", cfg_.seed}};
  j["t"] = t_;
  j["cum_betting_loss"] = cum_betting_loss_;
  j["mu_params"] = mu_model_.params();
  j["c_params"] = c_model_.params();
  json sel;
  sel["kind"] = to_string(cfg_.selector);
  if (const BinnedFtl* ftl = selector_.ftl()) {
    json bins = json::array();
    for (const BinStats& b : ftl->bins())
      bins.push_back({{"sum_rs", b.sum_rs}, {"sum_ss", b.sum_ss}, {"count", b.count}});
    sel["bins"] = bins;
    sel["prev_bin"] = ftl->prev_bin();
    sel["rng"] = ftl->rng().save_state();
  } else if (cfg_.selector == SelectorKind::naive_br) {
    const BinStats& b = selector_.naive_stats();
    sel["sum_rs"] = b.sum_rs;
    sel["sum_ss"] = b.sum_ss;
    sel["count"] = b.count;
  }
  j["selector"] = sel;
  return j.dump(2);
}

ExactForecaster ExactForecaster::load_snapshot(const std::string& text) {
  json j = json::parse(text);
  if (j.value("format", "") != "fairbet-forecaster-snapshot")
    throw std::invalid_argument("snapshot: unrecognized format tag");
  if (j.value("snapshot_version", -1) != kSnapshotVersion)
    throw std::invalid_argument("snapshot: unsupported version");
  const json& c = j.at("config");
  ForecasterConfig cfg;
  cfg.arch = arch_from_string(c.at("arch").get<std::string>());
  cfg.dim = c.at("dim").get<int>();
  cfg.hidden = c.at("hidden").get<int>();
  cfg.eta = c.at("eta").get<double>();
  cfg.horizon = c.at("horizon").get<std::int64_t>();
  cfg.k_override = c.at("k_override").get<int>();
  cfg.selector = selector_from_string(c.at("selector").get<std::string>());
  cfg.mode = mode_from_string(c.at("mode").get<std::string>());
  cfg.max_stake = c.at("max_stake").get<double>();
  cfg.seed = c.at("seed").get<std::uint64_t>();
  ExactForecaster ef(cfg);
  ef.t_ = j.at("t").get<std::int64_t>();
  ef.cum_betting_loss_ = j.at("cum_betting_loss").get<double>();
  ef.mu_model_.set_params(j.at("mu_params").get<std::vector<double>>());
  ef.c_model_.set_params(j.at("c_params").get<std::vector<double>>());
  const json& sel = j.at("selector");
  if (BinnedFtl* ftl = ef.selector_.ftl()) {
    std::vector<BinStats> bins;
    for (const json& bj : sel.at("bins"))
      bins.push_back({bj.at("sum_rs").get<double>(), bj.at("sum_ss").get<double>(),
                      bj.at("count").get<std::int64_t>()});
    ftl->restore(std::move(bins), sel.at("prev_bin").get<int>());
    ftl->rng().restore_state(sel.at("rng").get<std::string>());
  } else if (cfg.selector == SelectorKind::naive_br) {
    ef.selector_.restore_naive({sel.at("sum_rs").get<double>(),
                                sel.at("sum_ss").get<double>(),
                                sel.at("count").get<std::int64_t>()});
  }
  return ef;
}

}  // namespace fairbet
