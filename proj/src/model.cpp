#include "fairbet/model.hpp"

#include <stdexcept>

namespace fairbet {

// one_hidden layout: [W (hidden x dim), hidden bias (hidden), v (hidden),
// output bias (1)]; linear layout: [w (dim)].
BaseModel::BaseModel(Arch arch, int dim, int hidden, Rng& init_rng)
    : arch_(arch), dim_(dim), hidden_(arch == Arch::linear ? 0 : hidden) {
  if (dim_ < 1) throw std::invalid_argument("model: dim must be >= 1");
  if (arch_ == Arch::one_hidden && hidden_ < 1)
    throw std::invalid_argument("model: hidden must be >= 1");
  std::size_t count = arch_ == Arch::linear
                          ? static_cast<std::size_t>(dim_)
                          : static_cast<std::size_t>(hidden_) * (dim_ + 2) + 1;
  params_.resize(count);
  for (double& p : params_) p = init_rng.uniform(-0.1, 0.1);
}

void BaseModel::check_dim(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_)
    throw std::invalid_argument("model: feature dimension mismatch");
}

double BaseModel::raw(const std::vector<double>& x) const {
  check_dim(x);
  if (arch_ == Arch::linear) {
    double out = 0.0;
    for (int i = 0; i < dim_; ++i) out += params_[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
    return out;
  }
  const double* w = params_.data();
  const double* hb = w + static_cast<std::size_t>(hidden_) * dim_;
  const double* v = hb + hidden_;
  double out = v[hidden_];  // output bias
  for (int j = 0; j < hidden_; ++j) {
    double u = hb[j];
    const double* wj = w + static_cast<std::size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) u += wj[i] * x[static_cast<std::size_t>(i)];
    out += v[j] * leaky(u);
  }
  return out;
}

void BaseModel::sgd_step(const std::vector<double>& x, double coeff, double eta) {
  check_dim(x);
  double scale = eta * coeff;
  if (scale == 0.0) return;
  if (arch_ == Arch::linear) {
    for (int i = 0; i < dim_; ++i)
      params_[static_cast<std::size_t>(i)] -= scale * x[static_cast<std::size_t>(i)];
    return;
  }
  double* w = params_.data();
  double* hb = w + static_cast<std::size_t>(hidden_) * dim_;
  double* v = hb + hidden_;
  // Forward pass caching pre-activations, then one fused backward step.
  std::vector<double> pre(static_cast<std::size_t>(hidden_));
  for (int j = 0; j < hidden_; ++j) {
    double u = hb[j];
    const double* wj = w + static_cast<std::size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) u += wj[i] * x[static_cast<std::size_t>(i)];
    pre[static_cast<std::size_t>(j)] = u;
  }
  v[hidden_] -= scale;  // output bias: d raw = 1
  for (int j = 0; j < hidden_; ++j) {
    double u = pre[static_cast<std::size_t>(j)];
    double act = leaky(u);
    double back = v[j] * leaky_slope(u);
    v[j] -= scale * act;
    hb[j] -= scale * back;
    double* wj = w + static_cast<std::size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) wj[i] -= scale * back * x[static_cast<std::size_t>(i)];
  }
}

std::vector<double> BaseModel::raw_gradient(const std::vector<double>& x) const {
  check_dim(x);
  std::vector<double> g(params_.size(), 0.0);
  if (arch_ == Arch::linear) {
    for (int i = 0; i < dim_; ++i) g[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
    return g;
  }
  const double* w = params_.data();
  const double* hb = w + static_cast<std::size_t>(hidden_) * dim_;
  const double* v = hb + hidden_;
  std::size_t hb_off = static_cast<std::size_t>(hidden_) * dim_;
  std::size_t v_off = hb_off + static_cast<std::size_t>(hidden_);
  g[v_off + static_cast<std::size_t>(hidden_)] = 1.0;
  for (int j = 0; j < hidden_; ++j) {
    double u = hb[j];
    const double* wj = w + static_cast<std::size_t>(j) * dim_;
    for (int i = 0; i < dim_; ++i) u += wj[i] * x[static_cast<std::size_t>(i)];
    g[v_off + static_cast<std::size_t>(j)] = leaky(u);
    double back = v[j] * leaky_slope(u);
    g[hb_off + static_cast<std::size_t>(j)] = back;
    for (int i = 0; i < dim_; ++i)
      g[static_cast<std::size_t>(j) * dim_ + static_cast<std::size_t>(i)] = back * x[static_cast<std::size_t>(i)];
  }
  return g;
}

void BaseModel::set_params(std::vector<double> p) {
  if (p.size() != params_.size()) throw std::invalid_argument("model: parameter count mismatch");
  params_ = std::move(p);
}

}  // namespace fairbet
