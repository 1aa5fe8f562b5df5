#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <string>

namespace fairbet {

// Seeded generator with fixed output transforms. The raw engine is
// std::mt19937_64 (stable across platforms); the uniform/normal/bernoulli
// transforms are implemented here so streams do not depend on libstdc++'s
// distribution internals.
class Rng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64";

  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform on {0, ..., n-1}; n <= 2^53 assumed (bias < 2^-53, used for
  // small n only).
  std::uint64_t uniform_index(std::uint64_t n) {
    auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Standard normal via Box-Muller; the second value is cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    double radius = std::sqrt(-2.0 * std::log1p(-u1));
    double angle = 2.0 * kPi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Engine state as text; round-trips exactly through restore_state.
  std::string save_state() const {
    std::ostringstream out;
    out << gen_;
    if (have_spare_) out << " 1 " << spare_hex();
    else out << " 0";
    return out.str();
  }

  void restore_state(const std::string& state) {
    std::istringstream in(state);
    in >> gen_;
    int flag = 0;
    in >> flag;
    have_spare_ = flag != 0;
    if (have_spare_) {
      std::string hex;
      in >> hex;
      spare_ = from_hex(hex);
    }
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;

  std::string spare_hex() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%a", spare_);
    return buf;
  }

  static double from_hex(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives independent stream seeds from a run seed (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + stream * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace fairbet
