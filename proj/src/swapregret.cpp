#include "fairbet/swapregret.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fairbet {

int lambda_bin_index(double lambda, int num_bins) {
  int k = static_cast<int>(std::floor((lambda + 1.0) * num_bins / 2.0));
  return std::clamp(k, 0, num_bins - 1);
}

BinnedFtl::BinnedFtl(int num_bins, std::uint64_t seed)
    : bins_(static_cast<std::size_t>(num_bins)),
      prev_bin_(lambda_bin_index(0.0, num_bins)),
      rng_(seed) {
  if (num_bins < 1) throw std::invalid_argument("bins: need at least one");
}

const BinStats& BinnedFtl::stats(int bin) const {
  if (bin < 0 || bin >= num_bins()) throw std::invalid_argument("bin: out of range");
  return bins_[static_cast<std::size_t>(bin)];
}

double BinnedFtl::bin_optimum(int bin) const {
  const BinStats& b = stats(bin);
  if (!(b.sum_ss > 0.0)) return 0.0;
  return std::clamp(-b.sum_rs / b.sum_ss, -1.0, kLambdaSupremum);
}

BinnedFtl::Selection BinnedFtl::select() {
  if (awaiting_observe_) throw std::logic_error("select: previous round not observed");
  // Walk v -> bin(optimum(v)) until a bin repeats; the walk visits at most
  // K distinct bins, so it terminates within K+1 steps.
  std::vector<int> walk;
  std::vector<char> seen(bins_.size(), 0);
  int v = prev_bin_;
  while (!seen[static_cast<std::size_t>(v)]) {
    seen[static_cast<std::size_t>(v)] = 1;
    walk.push_back(v);
    v = lambda_bin_index(bin_optimum(v), num_bins());
  }
  // Keep only the cycle: drop entries before the first occurrence of the
  // revisited bin.
  auto cycle_start = std::find(walk.begin(), walk.end(), v);
  std::size_t cycle_len = static_cast<std::size_t>(walk.end() - cycle_start);
  int chosen = *(cycle_start + static_cast<std::ptrdiff_t>(rng_.uniform_index(cycle_len)));
  prev_bin_ = chosen;
  pending_bin_ = chosen;
  awaiting_observe_ = true;
  return {bin_optimum(chosen), chosen};
}

void BinnedFtl::observe(int bin, double r, double s) {
  if (!awaiting_observe_ || bin != pending_bin_)
    throw std::logic_error("observe: bin does not match the pending selection");
  BinStats& b = bins_[static_cast<std::size_t>(bin)];
  b.sum_rs += r * s;
  b.sum_ss += s * s;
  b.count += 1;
  awaiting_observe_ = false;
  pending_bin_ = -1;
}

void BinnedFtl::restore(std::vector<BinStats> bins, int prev_bin) {
  if (bins.size() != bins_.size()) throw std::invalid_argument("restore: bin count mismatch");
  if (prev_bin < 0 || prev_bin >= num_bins())
    throw std::invalid_argument("restore: prev_bin out of range");
  bins_ = std::move(bins);
  prev_bin_ = prev_bin;
  awaiting_observe_ = false;
  pending_bin_ = -1;
}

double measure_discretized_swap_regret(const std::vector<LambdaRound>& history,
                                       int num_bins) {
  if (num_bins < 1) throw std::invalid_argument("bins: need at least one");
  if (history.empty()) return 0.0;
  double total = 0.0;
  std::vector<double> sum_rr(static_cast<std::size_t>(num_bins), 0.0);
  std::vector<double> sum_rs(static_cast<std::size_t>(num_bins), 0.0);
  std::vector<double> sum_ss(static_cast<std::size_t>(num_bins), 0.0);
  for (const LambdaRound& h : history) {
    double err = h.r + h.s * h.lambda;
    total += err * err;
    auto k = static_cast<std::size_t>(lambda_bin_index(h.lambda, num_bins));
    sum_rr[k] += h.r * h.r;
    sum_rs[k] += h.r * h.s;
    sum_ss[k] += h.s * h.s;
  }
  double comparator = 0.0;
  for (std::size_t k = 0; k < sum_rr.size(); ++k) {
    // inf over real lambda of the bin's quadratic loss, in closed form.
    comparator += sum_rr[k];
    if (sum_ss[k] > 0.0) comparator -= sum_rs[k] * sum_rs[k] / sum_ss[k];
  }
  return total - comparator;
}

}  // namespace fairbet
