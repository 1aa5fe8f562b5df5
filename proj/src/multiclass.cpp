#include "fairbet/multiclass.hpp"

#include <cmath>
#include <stdexcept>

namespace fairbet {

namespace {

void require_length(const SimplexForecast& f, const std::vector<double>& l) {
  if (l.size() != f.mu.size()) throw std::invalid_argument("loss vector: length mismatch");
}

}  // namespace

void validate(const SimplexForecast& f) {
  if (f.mu.size() < 2) throw std::invalid_argument("simplex forecast: K < 2");
  if (f.c.size() != f.mu.size())
    throw std::invalid_argument("simplex forecast: c length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < f.mu.size(); ++i) {
    double mu = f.mu[i];
    double c = f.c[i];
    if (!std::isfinite(mu) || !std::isfinite(c) || c < 0.0)
      throw std::invalid_argument("simplex forecast: c must be finite and >= 0");
    if (mu - c < -1e-12 || mu + c > 1.0 + 1e-12)
      throw std::invalid_argument("simplex forecast: mu +- c outside [0, 1]");
    total += mu;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw std::invalid_argument("simplex forecast: mu does not sum to 1");
}

MulticlassMax l_max_closed_form(const SimplexForecast& f, const std::vector<double>& l) {
  validate(f);
  require_length(f, l);
  std::size_t k = l.size();
  double mu_dot_l = 0.0;
  for (std::size_t i = 0; i < k; ++i) mu_dot_l += f.mu[i] * l[i];

  // min_gamma sum_i c_i |l_i - gamma| is attained at some l_i.
  double best_obj = 0.0;
  double best_gamma = 0.0;
  bool have_best = false;
  for (std::size_t j = 0; j < k; ++j) {
    double gamma = l[j];
    double obj = 0.0;
    for (std::size_t i = 0; i < k; ++i) obj += f.c[i] * std::fabs(l[i] - gamma);
    if (!have_best || obj < best_obj || (obj == best_obj && gamma < best_gamma)) {
      best_obj = obj;
      best_gamma = gamma;
      have_best = true;
    }
  }
  return {mu_dot_l + best_obj, best_gamma};
}

std::vector<double> optimal_payment_vector(const SimplexForecast& f,
                                           const std::vector<double>& l) {
  double gamma = l_max_closed_form(f, l).gamma_star;
  std::vector<double> g(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) g[i] = l[i] - gamma;
  return g;
}

double multiclass_forecaster_payout(const std::vector<double>& g,
                                    const SimplexForecast& f, int y) {
  validate(f);
  if (g.size() != f.mu.size()) throw std::invalid_argument("payment vector: length mismatch");
  if (y < 0 || static_cast<std::size_t>(y) >= g.size())
    throw std::invalid_argument("outcome: outside {0..K-1}");
  double out = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    double e_y = (static_cast<std::size_t>(y) == i) ? 1.0 : 0.0;
    out += g[i] * (e_y - f.mu[i]) - std::fabs(g[i]) * f.c[i];
  }
  return out;
}

double multiclass_payment_guarantee(const SimplexForecast& f,
                                    const std::vector<double>& l,
                                    const std::vector<double>& mu_star) {
  validate(f);
  require_length(f, l);
  if (mu_star.size() != l.size())
    throw std::invalid_argument("mu_star: length mismatch");
  std::vector<double> g = optimal_payment_vector(f, l);
  double expected_loss = 0.0;
  double side_payment = 0.0;
  for (std::size_t i = 0; i < l.size(); ++i) {
    expected_loss += mu_star[i] * l[i];
    side_payment += g[i] * (mu_star[i] - f.mu[i]) - std::fabs(g[i]) * f.c[i];
  }
  return expected_loss - side_payment;
}

}  // namespace fairbet
