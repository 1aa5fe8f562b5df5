#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fairbet/core.hpp"
#include "fairbet/rng.hpp"

namespace fairbet {

// Nature: emits features, the hidden true probability, and the sampled
// outcome. mu_star is NaN for ingested data (unknown ground truth). z is a
// scalar task feature (the latent digit for digit_latent, a quantile bin
// for ingested data, 0 otherwise).
class NatureStream {
 public:
  struct Round {
    std::vector<double> x;
    double mu_star = 0.0;
    int y = 0;
    double z = 0.0;
  };

  virtual ~NatureStream() = default;
  virtual std::optional<Round> next() = 0;
  virtual int dim() const = 0;
  // True when mu_star is known (synthetic streams).
  virtual bool has_mu_star() const { return true; }
};

// x ~ N(0, I_d), mu* = logistic(<w, x>). Passing w overrides the seeded
// default (entries N(0, 1) scaled by 2/sqrt(d)).
std::unique_ptr<NatureStream> make_iid_logistic(int dim, std::uint64_t seed,
                                                std::optional<std::vector<double>> w = std::nullopt);

// As iid_logistic but w moves linearly between two seeded endpoints over
// the first `horizon` rounds, then stays at the endpoint.
std::unique_ptr<NatureStream> make_drift(int dim, std::int64_t horizon, std::uint64_t seed);

// Drift over one-hot level features: each round picks a uniform level,
// x = one-hot(level), mu* = logistic of that level's drifting logit.
std::unique_ptr<NatureStream> make_drift_one_hot(int levels, std::int64_t horizon,
                                                 std::uint64_t seed);

// Latent digit i uniform in {0..9}, x a noisy one-hot of i (noise sd 0.1),
// mu* = (i+1)/11, z = i.
std::unique_ptr<NatureStream> make_digit_latent(std::uint64_t seed);

// mu* alternates 0.1 / 0.9 every `period` rounds, independent of x.
std::unique_ptr<NatureStream> make_adversarial_flip(int dim, std::int64_t period,
                                                    std::uint64_t seed);

// CSV ingestion: categorical feature columns are one-hot encoded with
// levels indexed in order of first appearance; the outcome column must be
// 0/1. mu_star is unknown for ingested rows. An optional z column is
// binned by decile into {0..9}.
struct CsvSchema {
  std::vector<std::string> feature_columns;
  std::string outcome_column;
  std::string z_column;  // empty: no z feature
};

std::unique_ptr<NatureStream> ingest_csv(const std::string& path, const CsvSchema& schema);

// Benchmark decision-task families.
enum class TaskFamily { one_sided, different_stakes, random_clipped };

TaskFamily task_family_from_string(const std::string& s);
const char* to_string(TaskFamily f);

// Samples per-round loss tables. one_sided is deterministic in z (loss
// 1 + z when y != a); different_stakes draws entries N(0, z) with z the
// standard deviation; random_clipped draws N(0, 10) clipped to [-10, 10].
class DecisionTaskSampler {
 public:
  DecisionTaskSampler(TaskFamily family, std::uint64_t seed, int num_actions = 2);

  LossSpec sample(double z);
  TaskFamily family() const { return family_; }

 private:
  TaskFamily family_;
  int num_actions_;
  Rng rng_;
};

}  // namespace fairbet
