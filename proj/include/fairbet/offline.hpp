#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "fairbet/core.hpp"

namespace fairbet {

struct SupportPoint {
  std::string id;
  double weight = 0.0;
  double mu_star = 0.0;
};

// Finite distribution over labelled points with per-point outcome rates.
class DiscreteDistribution {
 public:
  explicit DiscreteDistribution(std::vector<SupportPoint> support);
  const std::vector<SupportPoint>& support() const { return support_; }

 private:
  std::vector<SupportPoint> support_;
};

// Forecast table over point ids; audits require coverage of the support.
class TableForecaster {
 public:
  TableForecaster() = default;
  explicit TableForecaster(std::map<std::string, Forecast> table);
  void set(const std::string& id, const Forecast& f);
  const Forecast& at(const std::string& id) const;
  const std::map<std::string, Forecast>& table() const { return table_; }

 private:
  std::map<std::string, Forecast> table_;
};

enum class BetClass { functions_of_mu, functions_of_x };

BetClass bet_class_from_string(const std::string& s);
std::string to_string(BetClass bc);

// Largest expected betting profit over the class with stakes bounded by M.
double soundness_gap(const DiscreteDistribution& dist, const TableForecaster& fc,
                     BetClass bet_class, double M);

// Worst |E[mu_star | mu = u] - u| over realized forecast values u.
double mce(const DiscreteDistribution& dist, const TableForecaster& fc);

struct Subset {
  std::string name;
  std::function<bool(const std::string&)> contains;
};

struct SubsetAudit {
  std::string name;
  bool skipped = false;  // subset holds no support points
  std::string note;
  double mass = 0.0;
  double gap = 0.0;            // indicator-bet gap on the restricted measure
  double max_violation = 0.0;  // max_u |sum p (u - mu_star)| - c0 sum p
  bool ok = true;
};

struct MulticalibrationReport {
  std::vector<SubsetAudit> subsets;
  bool multicalibrated = true;
};

MulticalibrationReport multicalibration_gap(const DiscreteDistribution& dist,
                                            const TableForecaster& fc,
                                            const std::vector<Subset>& subsets, double c0);

// Replace each forecast value with its bin's weight-averaged outcome rate;
// bins with no support mass leave values untouched.
TableForecaster histogram_binning(const DiscreteDistribution& dist, const TableForecaster& fc,
                                  int num_bins);

struct Sample {
  std::string id;
  double mu = 0.0;
  int y = 0;
  double c = 0.0;
};

class SampleSet {
 public:
  explicit SampleSet(std::vector<Sample> rows);
  const std::vector<Sample>& rows() const { return rows_; }
  DiscreteDistribution to_distribution() const;
  TableForecaster to_forecaster() const;

 private:
  std::vector<Sample> rows_;
};

// CSV with header: optional id (default: row index), mu, y in {0,1},
// optional c (default 0); extra columns are ignored.
SampleSet samples_from_csv(const std::string& path);

// Replace each forecast value with its bin's empirical outcome rate.
TableForecaster histogram_binning(const SampleSet& samples, int num_bins);

}  // namespace fairbet
