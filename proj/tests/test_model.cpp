#include "doctest.h"

#include <cmath>
#include <cstddef>
#include <vector>

#include "fairbet/model.hpp"
#include "fairbet/rng.hpp"

using namespace fairbet;

namespace {

std::vector<double> random_point(Rng& rng, int dim) {
  std::vector<double> x(static_cast<std::size_t>(dim));
  for (double& v : x) v = rng.uniform(-1.0, 1.0);
  return x;
}

// Central finite difference of raw in every parameter coordinate.
std::vector<double> fd_gradient(BaseModel& m, const std::vector<double>& x, double h) {
  std::vector<double> base = m.params();
  std::vector<double> g(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    std::vector<double> p = base;
    p[i] = base[i] + h;
    m.set_params(p);
    double hi = m.raw(x);
    p[i] = base[i] - h;
    m.set_params(p);
    double lo = m.raw(x);
    g[i] = (hi - lo) / (2.0 * h);
  }
  m.set_params(base);
  return g;
}

// Pre-activations of the hidden layer, for kink avoidance in FD checks.
std::vector<double> preacts(const BaseModel& m, const std::vector<double>& x) {
  const auto& p = m.params();
  std::vector<double> u(static_cast<std::size_t>(m.hidden()));
  for (int j = 0; j < m.hidden(); ++j) {
    double v = p[static_cast<std::size_t>(m.hidden()) * m.dim() + static_cast<std::size_t>(j)];
    for (int i = 0; i < m.dim(); ++i)
      v += p[static_cast<std::size_t>(j) * m.dim() + static_cast<std::size_t>(i)] *
           x[static_cast<std::size_t>(i)];
    u[static_cast<std::size_t>(j)] = v;
  }
  return u;
}

}  // namespace

TEST_CASE("analytic gradient matches finite differences") {
  // raw is piecewise affine in each parameter, so away from the kinks the
  // central difference is exact up to roundoff; a larger step shrinks that
  // roundoff while staying below the kink margin.
  const double h = 1e-4;
  for (Arch arch : {Arch::linear, Arch::one_hidden}) {
    Rng init(7);
    BaseModel m(arch, 4, 6, init);
    Rng rng(19);
    int done = 0;
    while (done < 25) {
      auto x = random_point(rng, 4);
      if (arch == Arch::one_hidden) {
        // Skip points with a pre-activation near the kink: FD is wrong there.
        bool near_kink = false;
        for (double u : preacts(m, x))
          if (std::fabs(u) < 1e-3) near_kink = true;
        if (near_kink) continue;
      }
      auto analytic = m.raw_gradient(x);
      auto fd = fd_gradient(m, x, h);
      for (std::size_t i = 0; i < analytic.size(); ++i) {
        double denom = std::max(1e-6, std::fabs(fd[i]));
        CHECK(std::fabs(analytic[i] - fd[i]) / denom <= 1e-5);
      }
      ++done;
      // Drift the parameters so successive points see different weights.
      m.sgd_step(x, rng.uniform(-1.0, 1.0), 0.01);
    }
  }
}

TEST_CASE("sgd step subtracts eta coeff times the raw gradient") {
  for (Arch arch : {Arch::linear, Arch::one_hidden}) {
    Rng init(11);
    BaseModel m(arch, 3, 5, init);
    Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
      auto x = random_point(rng, 3);
      double coeff = rng.uniform(-2.0, 2.0);
      double eta = 0.01;
      auto before = m.params();
      auto g = m.raw_gradient(x);
      m.sgd_step(x, coeff, eta);
      const auto& after = m.params();
      for (std::size_t i = 0; i < before.size(); ++i) {
        double expect = before[i] - eta * coeff * g[i];
        CHECK(after[i] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("zero coefficient or zero eta leaves parameters untouched") {
  Rng init(3);
  BaseModel m(Arch::one_hidden, 2, 4, init);
  auto x = std::vector<double>{0.5, -0.25};
  auto before = m.params();
  m.sgd_step(x, 0.0, 0.01);
  CHECK(m.params() == before);
  m.sgd_step(x, 1.5, 0.0);
  CHECK(m.params() == before);
}

TEST_CASE("initialization is seed deterministic and in range") {
  Rng a(42), b(42), c(43);
  BaseModel ma(Arch::one_hidden, 5, 32, a);
  BaseModel mb(Arch::one_hidden, 5, 32, b);
  BaseModel mc(Arch::one_hidden, 5, 32, c);
  CHECK(ma.params() == mb.params());
  CHECK(ma.params() != mc.params());
  CHECK(ma.params().size() == static_cast<std::size_t>(32 * (5 + 2) + 1));
  for (double p : ma.params()) {
    CHECK(p >= -0.1);
    CHECK(p <= 0.1);
  }
  Rng d(42);
  BaseModel ml(Arch::linear, 5, 32, d);
  CHECK(ml.params().size() == 5);
  CHECK(ml.hidden() == 0);
}

TEST_CASE("linear raw is a dot product without intercept") {
  Rng init(1);
  BaseModel m(Arch::linear, 3, 0, init);
  m.set_params({2.0, -1.0, 0.5});
  CHECK(m.raw({1.0, 1.0, 1.0}) == doctest::Approx(1.5));
  CHECK(m.raw({0.0, 0.0, 0.0}) == 0.0);
}

TEST_CASE("hidden activation has slope 0.01 on the negative side") {
  Rng init(1);
  BaseModel m(Arch::one_hidden, 1, 1, init);
  // layout: [w, hidden bias, v, output bias]
  m.set_params({1.0, 0.0, 2.0, 0.5});
  CHECK(m.raw({3.0}) == doctest::Approx(6.5));
  CHECK(m.raw({-3.0}) == doctest::Approx(0.5 + 2.0 * 0.01 * -3.0));
  CHECK(leaky(-1.0) == doctest::Approx(-0.01));
  CHECK(leaky_slope(-1.0) == 0.01);
  CHECK(leaky_slope(1.0) == 1.0);
}

TEST_CASE("model validates dimensions") {
  Rng init(1);
  BaseModel m(Arch::linear, 3, 0, init);
  CHECK_THROWS_AS(m.raw({1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(m.set_params({1.0}), std::invalid_argument);
  CHECK_THROWS_AS(BaseModel(Arch::linear, 0, 0, init), std::invalid_argument);
  CHECK_THROWS_AS(BaseModel(Arch::one_hidden, 2, 0, init), std::invalid_argument);
}
