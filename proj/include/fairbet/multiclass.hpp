#pragma once

#include <vector>

namespace fairbet {

// A K-outcome forecast: mu on the simplex, c a nonnegative half-width per
// coordinate, with mu + c and mu - c inside [0, 1]^K.
struct SimplexForecast {
  std::vector<double> mu;
  std::vector<double> c;
};

// Throws unless the forecast satisfies the box/simplex regularity above
// (K >= 2; sum mu = 1 within 1e-9).
void validate(const SimplexForecast& f);

struct MulticlassMax {
  double l_max = 0.0;
  double gamma_star = 0.0;
};

// L_max = <mu, l> + min_gamma <c, |l - gamma 1|>. The inner problem is a
// weighted-L1 location problem minimized at some l_i; ties break toward the
// smaller gamma.
MulticlassMax l_max_closed_form(const SimplexForecast& f, const std::vector<double>& l);

// The payment vector g = l - gamma* 1. The agent's side payment at outcome
// Y is <g, e_Y - mu> - <|g|, c>; with it the expected total loss equals
// L_max for every true distribution.
std::vector<double> optimal_payment_vector(const SimplexForecast& f,
                                           const std::vector<double>& l);

// Forecaster's loss at outcome y: <g, e_y - mu> - <|g|, c>.
double multiclass_forecaster_payout(const std::vector<double>& g,
                                    const SimplexForecast& f, int y);

// E_{mu_star}[l(Y)] minus the expected side payment; equals L_max exactly.
double multiclass_payment_guarantee(const SimplexForecast& f,
                                    const std::vector<double>& l,
                                    const std::vector<double>& mu_star);

}  // namespace fairbet
