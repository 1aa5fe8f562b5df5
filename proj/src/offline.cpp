#include "fairbet/offline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <set>
#include <stdexcept>

#include "fairbet/csv.hpp"

namespace fairbet {

namespace {

struct Group {
  double mass = 0.0;       // sum p
  double deviation = 0.0;  // sum p (u - mu_star)
  double width = 0.0;      // sum p c
};

// Groups share the exact stored forecast value; callers quantize first if
// they want coarser resolution.
std::map<double, Group> group_by_value(const DiscreteDistribution& dist,
                                       const TableForecaster& fc,
                                       const std::function<bool(const std::string&)>* filter) {
  std::map<double, Group> groups;
  for (const auto& point : dist.support()) {
    if (filter && !(*filter)(point.id)) continue;
    const Forecast& f = fc.at(point.id);
    Group& g = groups[f.mu];
    g.mass += point.weight;
    g.deviation += point.weight * (f.mu - point.mu_star);
    g.width += point.weight * f.c;
  }
  return groups;
}

}  // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<SupportPoint> support)
    : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("distribution: empty support");
  std::set<std::string> seen;
  double total = 0.0;
  for (const auto& point : support_) {
    if (!seen.insert(point.id).second)
      throw std::invalid_argument("distribution: duplicate id '" + point.id + "'");
    if (!(point.weight > 0.0) || !std::isfinite(point.weight))
      throw std::invalid_argument("distribution: weights must be positive");
    if (!(point.mu_star >= 0.0 && point.mu_star <= 1.0))
      throw std::invalid_argument("distribution: mu_star must be in [0, 1]");
    total += point.weight;
  }
  if (std::fabs(total - 1.0) > 1e-12)
    throw std::invalid_argument("distribution: weights must sum to 1");
}

TableForecaster::TableForecaster(std::map<std::string, Forecast> table)
    : table_(std::move(table)) {
  for (const auto& [id, f] : table_) set(id, f);
}

void TableForecaster::set(const std::string& id, const Forecast& f) {
  if (!(f.mu >= 0.0 && f.mu <= 1.0))
    throw std::invalid_argument("forecast table: mu must be in [0, 1]");
  if (!(f.c >= 0.0 && f.c <= 1.0))
    throw std::invalid_argument("forecast table: c must be in [0, 1]");
  table_[id] = f;
}

const Forecast& TableForecaster::at(const std::string& id) const {
  auto it = table_.find(id);
  if (it == table_.end())
    throw std::invalid_argument("forecast table: missing id '" + id + "'");
  return it->second;
}

BetClass bet_class_from_string(const std::string& s) {
  if (s == "functions_of_mu" || s == "standard") return BetClass::functions_of_mu;
  if (s == "functions_of_x" || s == "pointwise") return BetClass::functions_of_x;
  throw std::invalid_argument("bet class: unknown '" + s + "'");
}

std::string to_string(BetClass bc) {
  return bc == BetClass::functions_of_mu ? "functions_of_mu" : "functions_of_x";
}

double soundness_gap(const DiscreteDistribution& dist, const TableForecaster& fc,
                     BetClass bet_class, double M) {
  if (!(M >= 0.0) || !std::isfinite(M))
    throw std::invalid_argument("soundness gap: M must be finite and >= 0");
  if (bet_class == BetClass::functions_of_x) {
    double gap = 0.0;
    for (const auto& point : dist.support()) {
      const Forecast& f = fc.at(point.id);
      gap += point.weight * std::max(0.0, std::fabs(f.mu - point.mu_star) - f.c);
    }
    return M * gap;
  }
  double gap = 0.0;
  for (const auto& [u, g] : group_by_value(dist, fc, nullptr))
    gap += std::max(0.0, std::fabs(g.deviation) - g.width);
  return M * gap;
}

double mce(const DiscreteDistribution& dist, const TableForecaster& fc) {
  double worst = 0.0;
  for (const auto& [u, g] : group_by_value(dist, fc, nullptr))
    worst = std::max(worst, std::fabs(g.deviation) / g.mass);
  return worst;
}

MulticalibrationReport multicalibration_gap(const DiscreteDistribution& dist,
                                            const TableForecaster& fc,
                                            const std::vector<Subset>& subsets, double c0) {
  if (!(c0 >= 0.0) || !std::isfinite(c0))
    throw std::invalid_argument("multicalibration: c0 must be finite and >= 0");
  MulticalibrationReport report;
  for (const auto& subset : subsets) {
    SubsetAudit audit;
    audit.name = subset.name;
    auto groups = group_by_value(dist, fc, &subset.contains);
    if (groups.empty()) {
      audit.skipped = true;
      audit.note = "empty subset";
      report.subsets.push_back(std::move(audit));
      continue;
    }
    double violation = -1.0;
    for (const auto& [u, g] : groups) {
      audit.mass += g.mass;
      audit.gap += std::max(0.0, std::fabs(g.deviation) - g.width);
      violation = std::max(violation, std::fabs(g.deviation) - c0 * g.mass);
    }
    audit.max_violation = violation;
    audit.ok = violation <= 0.0;
    if (!audit.ok) report.multicalibrated = false;
    report.subsets.push_back(std::move(audit));
  }
  return report;
}

namespace {

int bin_of(double mu, int num_bins) {
  int k = static_cast<int>(std::floor(mu * static_cast<double>(num_bins)));
  return std::clamp(k, 0, num_bins - 1);
}

}  // namespace

TableForecaster histogram_binning(const DiscreteDistribution& dist, const TableForecaster& fc,
                                  int num_bins) {
  if (num_bins < 1) throw std::invalid_argument("binning: need at least one bin");
  std::vector<double> mass(static_cast<std::size_t>(num_bins), 0.0);
  std::vector<double> rate(static_cast<std::size_t>(num_bins), 0.0);
  for (const auto& point : dist.support()) {
    auto k = static_cast<std::size_t>(bin_of(fc.at(point.id).mu, num_bins));
    mass[k] += point.weight;
    rate[k] += point.weight * point.mu_star;
  }
  TableForecaster out;
  for (const auto& [id, f] : fc.table()) {
    auto k = static_cast<std::size_t>(bin_of(f.mu, num_bins));
    Forecast g = f;
    if (mass[k] > 0.0) g.mu = rate[k] / mass[k];
    out.set(id, g);
  }
  return out;
}

SampleSet::SampleSet(std::vector<Sample> rows) : rows_(std::move(rows)) {
  std::set<std::string> seen;
  for (const auto& row : rows_) {
    if (!seen.insert(row.id).second)
      throw std::invalid_argument("samples: duplicate id '" + row.id + "'");
    if (!(row.mu >= 0.0 && row.mu <= 1.0))
      throw std::invalid_argument("samples: mu must be in [0, 1]");
    if (row.y != 0 && row.y != 1)
      throw std::invalid_argument("samples: y must be 0 or 1");
    if (!(row.c >= 0.0 && row.c <= 1.0))
      throw std::invalid_argument("samples: c must be in [0, 1]");
  }
}

DiscreteDistribution SampleSet::to_distribution() const {
  if (rows_.empty()) throw std::invalid_argument("samples: empty sample set");
  double w = 1.0 / static_cast<double>(rows_.size());
  std::vector<SupportPoint> support;
  support.reserve(rows_.size());
  for (const auto& row : rows_)
    support.push_back({row.id, w, static_cast<double>(row.y)});
  // Equal weights need not sum to exactly 1; rescale the last point.
  double total = 0.0;
  for (const auto& point : support) total += point.weight;
  support.back().weight += 1.0 - total;
  return DiscreteDistribution(std::move(support));
}

TableForecaster SampleSet::to_forecaster() const {
  TableForecaster fc;
  for (const auto& row : rows_) fc.set(row.id, {row.mu, row.c});
  return fc;
}

SampleSet samples_from_csv(const std::string& path) {
  auto rows = csv::read_file(path);
  if (rows.empty()) return SampleSet({});
  const auto& header = rows.front();
  int id_col = -1, mu_col = -1, y_col = -1, c_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "id") id_col = static_cast<int>(i);
    else if (header[i] == "mu") mu_col = static_cast<int>(i);
    else if (header[i] == "y") y_col = static_cast<int>(i);
    else if (header[i] == "c") c_col = static_cast<int>(i);
  }
  if (mu_col < 0) throw std::invalid_argument("samples: missing 'mu' column");
  if (y_col < 0) throw std::invalid_argument("samples: missing 'y' column");

  std::vector<Sample> samples;
  samples.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    std::size_t row_number = r + 1;
    if (row.size() != header.size())
      throw std::invalid_argument("samples: row " + std::to_string(row_number) +
                                  " has " + std::to_string(row.size()) + " fields, expected " +
                                  std::to_string(header.size()));
    auto field = [&](int col) { return row[static_cast<std::size_t>(col)]; };
    auto parse = [&](int col, const char* name) {
      const std::string& s = field(col);
      char* end = nullptr;
      double v = std::strtod(s.c_str(), &end);
      if (end != s.c_str() + s.size() || s.empty() || !std::isfinite(v))
        throw std::invalid_argument("samples: row " + std::to_string(row_number) +
                                    " has non-numeric " + name + " '" + s + "'");
      return v;
    };
    Sample sample;
    sample.id = id_col >= 0 ? field(id_col) : std::to_string(r - 1);
    sample.mu = parse(mu_col, "mu");
    const std::string& ys = field(y_col);
    if (ys != "0" && ys != "1")
      throw std::invalid_argument("samples: row " + std::to_string(row_number) +
                                  " has outcome '" + ys + "', expected 0 or 1");
    sample.y = ys == "1" ? 1 : 0;
    sample.c = c_col >= 0 ? parse(c_col, "c") : 0.0;
    samples.push_back(std::move(sample));
  }
  return SampleSet(std::move(samples));
}

TableForecaster histogram_binning(const SampleSet& samples, int num_bins) {
  if (num_bins < 1) throw std::invalid_argument("binning: need at least one bin");
  std::vector<std::int64_t> count(static_cast<std::size_t>(num_bins), 0);
  std::vector<std::int64_t> ones(static_cast<std::size_t>(num_bins), 0);
  for (const auto& row : samples.rows()) {
    auto k = static_cast<std::size_t>(bin_of(row.mu, num_bins));
    count[k] += 1;
    ones[k] += row.y;
  }
  TableForecaster out;
  for (const auto& row : samples.rows()) {
    auto k = static_cast<std::size_t>(bin_of(row.mu, num_bins));
    double mu = count[k] > 0
                    ? static_cast<double>(ones[k]) / static_cast<double>(count[k])
                    : row.mu;
    out.set(row.id, {mu, row.c});
  }
  return out;
}

}  // namespace fairbet
