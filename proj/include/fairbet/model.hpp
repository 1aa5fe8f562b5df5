#pragma once

#include <cstdint>
#include <vector>

#include "fairbet/rng.hpp"

namespace fairbet {

enum class Arch { linear, one_hidden };

// Scalar-output model: either w . x (no intercept) or a one-hidden-layer
// net with leaky-piecewise-linear activation (negative slope 0.01) and
// hidden/output biases. Parameters live in one flat vector.
class BaseModel {
 public:
  // Parameters initialized uniform in [-0.1, 0.1] from init_rng.
  BaseModel(Arch arch, int dim, int hidden, Rng& init_rng);

  double raw(const std::vector<double>& x) const;

  // params -= eta * coeff * d raw / d params. Callers supply coeff as the
  // loss derivative with respect to the raw output.
  void sgd_step(const std::vector<double>& x, double coeff, double eta);

  // d raw / d params at x, for gradient verification.
  std::vector<double> raw_gradient(const std::vector<double>& x) const;

  Arch arch() const { return arch_; }
  int dim() const { return dim_; }
  int hidden() const { return hidden_; }
  const std::vector<double>& params() const { return params_; }
  void set_params(std::vector<double> p);

 private:
  void check_dim(const std::vector<double>& x) const;

  Arch arch_;
  int dim_;
  int hidden_;
  std::vector<double> params_;
};

inline double leaky(double u) { return u > 0.0 ? u : 0.01 * u; }
inline double leaky_slope(double u) { return u > 0.0 ? 1.0 : 0.01; }

}  // namespace fairbet
