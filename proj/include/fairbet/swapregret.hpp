#pragma once

#include <cstdint>
#include <vector>

#include "fairbet/rng.hpp"

namespace fairbet {

// Per-bin sufficient statistics of the quadratic losses (r + s lambda)^2;
// the bin optimum depends only on sum_rs and sum_ss.
struct BinStats {
  double sum_rs = 0.0;
  double sum_ss = 0.0;
  std::int64_t count = 0;
};

// Half-open upper clip for lambda in [-1, 1).
inline constexpr double kLambdaSupremum = 1.0 - 0x1p-32;

// Bin index of lambda under the equal partition of [-1, 1] into K bins,
// with right-edge safety clamping.
int lambda_bin_index(double lambda, int num_bins);

// Binned follow-the-leader over lambda in [-1, 1): each round walks the
// bin-optimum map to a cycle, picks a cycle bin uniformly at random, plays
// that bin's optimum, and later credits the observed (r, s) to it. Strict
// select/observe alternation is enforced.
class BinnedFtl {
 public:
  BinnedFtl(int num_bins, std::uint64_t seed);

  struct Selection {
    double lambda = 0.0;
    int bin = 0;
  };

  Selection select();
  void observe(int bin, double r, double s);

  // clip(-sum_rs / sum_ss, -1, 1 - 2^-32); 0 for an empty or s-degenerate bin.
  double bin_optimum(int bin) const;

  int num_bins() const { return static_cast<int>(bins_.size()); }
  const BinStats& stats(int bin) const;
  int prev_bin() const { return prev_bin_; }
  bool awaiting_observe() const { return awaiting_observe_; }

  // Snapshot access for serialization.
  const std::vector<BinStats>& bins() const { return bins_; }
  Rng& rng() { return rng_; }
  const Rng& rng() const { return rng_; }
  void restore(std::vector<BinStats> bins, int prev_bin);

 private:
  std::vector<BinStats> bins_;
  int prev_bin_;
  Rng rng_;
  bool awaiting_observe_ = false;
  int pending_bin_ = -1;
};

// One played round for regret measurement.
struct LambdaRound {
  double lambda = 0.0;
  double r = 0.0;
  double s = 0.0;
};

// Discretized swap regret of a history: total quadratic loss minus, per
// bin of the played lambda, the unclipped best fixed lambda in hindsight
// (inf over all reals; the comparator is not range-restricted).
double measure_discretized_swap_regret(const std::vector<LambdaRound>& history,
                                       int num_bins);

}  // namespace fairbet
