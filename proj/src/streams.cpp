#include "fairbet/streams.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "fairbet/csv.hpp"

namespace fairbet {

namespace {

double logistic(double v) { return 1.0 / (1.0 + std::exp(-v)); }

std::vector<double> scaled_normal_weights(int dim, Rng& rng) {
  std::vector<double> w(static_cast<std::size_t>(dim));
  double scale = 2.0 / std::sqrt(static_cast<double>(dim));
  for (double& wi : w) wi = scale * rng.normal();
  return w;
}

class IidLogisticStream final : public NatureStream {
 public:
  IidLogisticStream(int dim, std::uint64_t seed, std::optional<std::vector<double>> w)
      : dim_(dim), rng_(seed) {
    if (dim_ < 1) throw std::invalid_argument("stream: dim must be >= 1");
    if (w) {
      if (static_cast<int>(w->size()) != dim_)
        throw std::invalid_argument("stream: weight length mismatch");
      w_ = std::move(*w);
    } else {
      w_ = scaled_normal_weights(dim_, rng_);
    }
  }

  std::optional<Round> next() override {
    Round r;
    r.x.resize(static_cast<std::size_t>(dim_));
    double dot = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      r.x[i] = rng_.normal();
      dot += w_[i] * r.x[i];
    }
    r.mu_star = logistic(dot);
    r.y = rng_.bernoulli(r.mu_star) ? 1 : 0;
    return r;
  }

  int dim() const override { return dim_; }

 private:
  int dim_;
  Rng rng_;
  std::vector<double> w_;
};

class DriftStream final : public NatureStream {
 public:
  DriftStream(int dim, std::int64_t horizon, std::uint64_t seed)
      : dim_(dim), horizon_(horizon), rng_(seed) {
    if (dim_ < 1) throw std::invalid_argument("stream: dim must be >= 1");
    if (horizon_ < 1) throw std::invalid_argument("stream: horizon must be >= 1");
    w_start_ = scaled_normal_weights(dim_, rng_);
    w_end_ = scaled_normal_weights(dim_, rng_);
  }

  std::optional<Round> next() override {
    double frac = std::min(1.0, static_cast<double>(t_) / static_cast<double>(horizon_));
    ++t_;
    Round r;
    r.x.resize(static_cast<std::size_t>(dim_));
    double dot = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      r.x[i] = rng_.normal();
      double w = w_start_[i] + frac * (w_end_[i] - w_start_[i]);
      dot += w * r.x[i];
    }
    r.mu_star = logistic(dot);
    r.y = rng_.bernoulli(r.mu_star) ? 1 : 0;
    return r;
  }

  int dim() const override { return dim_; }

 private:
  int dim_;
  std::int64_t horizon_;
  std::int64_t t_ = 0;
  Rng rng_;
  std::vector<double> w_start_;
  std::vector<double> w_end_;
};

class DriftOneHotStream final : public NatureStream {
 public:
  DriftOneHotStream(int levels, std::int64_t horizon, std::uint64_t seed)
      : levels_(levels), horizon_(horizon), rng_(seed) {
    if (levels_ < 2) throw std::invalid_argument("stream: need at least two levels");
    if (horizon_ < 1) throw std::invalid_argument("stream: horizon must be >= 1");
    logit_start_.resize(static_cast<std::size_t>(levels_));
    logit_end_.resize(static_cast<std::size_t>(levels_));
    for (double& v : logit_start_) v = rng_.normal(0.0, 1.5);
    for (double& v : logit_end_) v = rng_.normal(0.0, 1.5);
  }

  std::optional<Round> next() override {
    double frac = std::min(1.0, static_cast<double>(t_) / static_cast<double>(horizon_));
    ++t_;
    auto level = static_cast<std::size_t>(rng_.uniform_index(static_cast<std::uint64_t>(levels_)));
    Round r;
    r.x.assign(static_cast<std::size_t>(levels_), 0.0);
    r.x[level] = 1.0;
    double logit = logit_start_[level] + frac * (logit_end_[level] - logit_start_[level]);
    r.mu_star = logistic(logit);
    r.y = rng_.bernoulli(r.mu_star) ? 1 : 0;
    return r;
  }

  int dim() const override { return levels_; }

 private:
  int levels_;
  std::int64_t horizon_;
  std::int64_t t_ = 0;
  Rng rng_;
  std::vector<double> logit_start_;
  std::vector<double> logit_end_;
};

class DigitLatentStream final : public NatureStream {
 public:
  explicit DigitLatentStream(std::uint64_t seed) : rng_(seed) {}

  std::optional<Round> next() override {
    auto digit = static_cast<int>(rng_.uniform_index(10));
    Round r;
    r.x.resize(10);
    for (std::size_t i = 0; i < 10; ++i)
      r.x[i] = (static_cast<int>(i) == digit ? 1.0 : 0.0) + 0.1 * rng_.normal();
    r.mu_star = (digit + 1) / 11.0;
    r.y = rng_.bernoulli(r.mu_star) ? 1 : 0;
    r.z = digit;
    return r;
  }

  int dim() const override { return 10; }

 private:
  Rng rng_;
};

class AdversarialFlipStream final : public NatureStream {
 public:
  AdversarialFlipStream(int dim, std::int64_t period, std::uint64_t seed)
      : dim_(dim), period_(period), rng_(seed) {
    if (dim_ < 1) throw std::invalid_argument("stream: dim must be >= 1");
    if (period_ < 1) throw std::invalid_argument("stream: period must be >= 1");
  }

  std::optional<Round> next() override {
    bool high = ((t_ / period_) % 2) == 1;
    ++t_;
    Round r;
    r.x.resize(static_cast<std::size_t>(dim_));
    for (double& xi : r.x) xi = rng_.normal();
    r.mu_star = high ? 0.9 : 0.1;
    r.y = rng_.bernoulli(r.mu_star) ? 1 : 0;
    return r;
  }

  int dim() const override { return dim_; }

 private:
  int dim_;
  std::int64_t period_;
  std::int64_t t_ = 0;
  Rng rng_;
};

class CsvStream final : public NatureStream {
 public:
  CsvStream(std::vector<Round> rounds, int dim) : rounds_(std::move(rounds)), dim_(dim) {}

  std::optional<Round> next() override {
    if (idx_ >= rounds_.size()) return std::nullopt;
    return rounds_[idx_++];
  }

  int dim() const override { return dim_; }
  bool has_mu_star() const override { return false; }

 private:
  std::vector<Round> rounds_;
  std::size_t idx_ = 0;
  int dim_;
};

}  // namespace

std::unique_ptr<NatureStream> make_iid_logistic(int dim, std::uint64_t seed,
                                                std::optional<std::vector<double>> w) {
  return std::make_unique<IidLogisticStream>(dim, seed, std::move(w));
}

std::unique_ptr<NatureStream> make_drift(int dim, std::int64_t horizon, std::uint64_t seed) {
  return std::make_unique<DriftStream>(dim, horizon, seed);
}

std::unique_ptr<NatureStream> make_drift_one_hot(int levels, std::int64_t horizon,
                                                 std::uint64_t seed) {
  return std::make_unique<DriftOneHotStream>(levels, horizon, seed);
}

std::unique_ptr<NatureStream> make_digit_latent(std::uint64_t seed) {
  return std::make_unique<DigitLatentStream>(seed);
}

std::unique_ptr<NatureStream> make_adversarial_flip(int dim, std::int64_t period,
                                                    std::uint64_t seed) {
  return std::make_unique<AdversarialFlipStream>(dim, period, seed);
}

std::unique_ptr<NatureStream> ingest_csv(const std::string& path, const CsvSchema& schema) {
  auto rows = csv::read_file(path);
  if (rows.empty()) return std::make_unique<CsvStream>(std::vector<NatureStream::Round>{}, 1);
  const auto& header = rows.front();
  auto column_index = [&](const std::string& name) -> int {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    return -1;
  };
  if (schema.outcome_column.empty())
    throw std::invalid_argument("csv stream: outcome column not declared");
  int outcome_col = column_index(schema.outcome_column);
  if (outcome_col < 0)
    throw std::invalid_argument("csv stream: missing outcome column '" +
                                schema.outcome_column + "'");
  std::vector<int> feature_cols;
  for (const auto& name : schema.feature_columns) {
    int idx = column_index(name);
    if (idx < 0)
      throw std::invalid_argument("csv stream: missing feature column '" + name + "'");
    feature_cols.push_back(idx);
  }
  int z_col = -1;
  if (!schema.z_column.empty()) {
    z_col = column_index(schema.z_column);
    if (z_col < 0)
      throw std::invalid_argument("csv stream: missing z column '" + schema.z_column + "'");
  }

  // First pass: collect cells and validate outcomes with data row numbers
  // (the header is row 1).
  std::vector<std::vector<std::string>> cells(rows.size() - 1);
  std::vector<int> outcomes(rows.size() - 1);
  std::vector<double> z_values;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::size_t row_number = r + 1;
    std::size_t needed = static_cast<std::size_t>(outcome_col) + 1;
    for (int fc : feature_cols) needed = std::max(needed, static_cast<std::size_t>(fc) + 1);
    if (z_col >= 0) needed = std::max(needed, static_cast<std::size_t>(z_col) + 1);
    if (row.size() < needed)
      throw std::invalid_argument("csv stream: row " + std::to_string(row_number) +
                                  " has too few fields");
    const std::string& outcome = row[static_cast<std::size_t>(outcome_col)];
    if (outcome == "0") outcomes[r - 1] = 0;
    else if (outcome == "1") outcomes[r - 1] = 1;
    else
      throw std::invalid_argument("csv stream: row " + std::to_string(row_number) +
                                  " outcome '" + outcome + "' is not 0/1");
    cells[r - 1].reserve(feature_cols.size());
    for (std::size_t f = 0; f < feature_cols.size(); ++f)
      cells[r - 1].push_back(row[static_cast<std::size_t>(feature_cols[f])]);
    if (z_col >= 0) {
      const std::string& zs = row[static_cast<std::size_t>(z_col)];
      char* end = nullptr;
      double zv = std::strtod(zs.c_str(), &end);
      if (end == zs.c_str() || *end != '\0')
        throw std::invalid_argument("csv stream: row " + std::to_string(row_number) +
                                    " z value '" + zs + "' is not numeric");
      z_values.push_back(zv);
    }
  }

  // Second pass: level ids in order of first appearance, per column.
  std::vector<std::map<std::string, int>> first_seen(feature_cols.size());
  std::vector<int> offsets(feature_cols.size(), 0);
  int dim = 0;
  for (std::size_t f = 0; f < feature_cols.size(); ++f) {
    int next_id = 0;
    for (const auto& row : cells) {
      auto [it, inserted] = first_seen[f].emplace(row[f], next_id);
      (void)it;
      if (inserted) ++next_id;
    }
    offsets[f] = dim;
    dim += next_id;
  }
  if (dim == 0) dim = 1;  // no feature columns declared: constant feature

  // Decile bins for z over the whole file.
  std::vector<double> z_sorted = z_values;
  std::sort(z_sorted.begin(), z_sorted.end());
  auto z_bin = [&](double v) -> double {
    if (z_sorted.empty()) return 0.0;
    auto pos = static_cast<double>(std::upper_bound(z_sorted.begin(), z_sorted.end(), v) -
                                   z_sorted.begin());
    double quantile = pos / static_cast<double>(z_sorted.size());
    return std::min(9.0, std::floor(quantile * 10.0));
  };

  std::vector<NatureStream::Round> rounds(cells.size());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    NatureStream::Round& round = rounds[i];
    round.x.assign(static_cast<std::size_t>(dim), 0.0);
    if (feature_cols.empty()) round.x[0] = 1.0;
    for (std::size_t f = 0; f < feature_cols.size(); ++f) {
      int id = first_seen[f].at(cells[i][f]);
      round.x[static_cast<std::size_t>(offsets[f] + id)] = 1.0;
    }
    round.mu_star = std::numeric_limits<double>::quiet_NaN();
    round.y = outcomes[i];
    round.z = z_col >= 0 ? z_bin(z_values[i]) : 0.0;
  }
  return std::make_unique<CsvStream>(std::move(rounds), dim);
}

TaskFamily task_family_from_string(const std::string& s) {
  if (s == "one_sided") return TaskFamily::one_sided;
  if (s == "different_stakes") return TaskFamily::different_stakes;
  if (s == "random") return TaskFamily::random_clipped;
  throw std::invalid_argument("task: unknown family '" + s + "'");
}

const char* to_string(TaskFamily f) {
  switch (f) {
    case TaskFamily::one_sided: return "one_sided";
    case TaskFamily::different_stakes: return "different_stakes";
    case TaskFamily::random_clipped: return "random";
  }
  return "?";
}

DecisionTaskSampler::DecisionTaskSampler(TaskFamily family, std::uint64_t seed, int num_actions)
    : family_(family), num_actions_(num_actions), rng_(seed) {
  if (num_actions_ < 2) throw std::invalid_argument("task: need at least two actions");
}

LossSpec DecisionTaskSampler::sample(double z) {
  switch (family_) {
    case TaskFamily::one_sided: {
      // Deterministic in z: cost 1 + z on a mismatch, 0 otherwise.
      double stake = 1.0 + z;
      if (!(stake > 0.0)) throw std::invalid_argument("task: one_sided needs z > -1");
      return LossSpec({{0.0, stake}, {stake, 0.0}}, stake);
    }
    case TaskFamily::different_stakes: {
      if (!(z > 0.0)) throw std::invalid_argument("task: different_stakes needs z > 0");
      std::vector<std::array<double, 2>> table(static_cast<std::size_t>(num_actions_));
      double bound = 0.0;
      for (auto& row : table)
        for (double& v : row) {
          v = rng_.normal(0.0, z);
          bound = std::max(bound, std::fabs(v));
        }
      return LossSpec(std::move(table), std::max(bound, 1e-12));
    }
    case TaskFamily::random_clipped: {
      std::vector<std::array<double, 2>> table(static_cast<std::size_t>(num_actions_));
      for (auto& row : table)
        for (double& v : row) v = std::clamp(rng_.normal(0.0, 10.0), -10.0, 10.0);
      return LossSpec(std::move(table), 10.0);
    }
  }
  throw std::logic_error("task: unreachable");
}

}  // namespace fairbet
