#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fairbet/core.hpp"
#include "fairbet/experiments.hpp"
#include "fairbet/forecaster.hpp"
#include "fairbet/market.hpp"
#include "fairbet/offline.hpp"
#include "fairbet/version.hpp"

namespace py = pybind11;
using namespace fairbet;

PYBIND11_MODULE(_fairbet, m) {
  m.doc() = "fair-bet forecasting: insurance transfers, exact online forecaster, "
            "market simulation, calibration audits";
  m.attr("__version__") = kVersion;

  py::class_<Forecast>(m, "Forecast")
      .def(py::init<>())
      .def(py::init([](double mu, double c) { return Forecast{mu, c}; }),
           py::arg("mu"), py::arg("c"))
      .def_readwrite("mu", &Forecast::mu)
      .def_readwrite("c", &Forecast::c)
      .def("__repr__", [](const Forecast& f) {
        return "Forecast(mu=" + std::to_string(f.mu) + ", c=" + std::to_string(f.c) + ")";
      });

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init<std::vector<std::array<double, 2>>, double>(), py::arg("table"),
           py::arg("bound") = 10.0)
      .def("loss", &LossSpec::loss, py::arg("action"), py::arg("outcome"))
      .def_property_readonly("num_actions", &LossSpec::num_actions);

  m.def("forecaster_payout", &forecaster_payout, py::arg("stake"), py::arg("forecast"),
        py::arg("outcome"), "transfer paid to the agent: b (y - mu) - |b| c");
  m.def("agent_total_loss", &agent_total_loss, py::arg("loss_spec"), py::arg("action"),
        py::arg("stake"), py::arg("forecast"), py::arg("outcome"));
  m.def("optimal_stake", &optimal_stake, py::arg("loss_spec"), py::arg("action"),
        "hedging stake l(a, 1) - l(a, 0)");
  m.def(
      "payment_guarantee",
      [](const LossSpec& l, int action, const Forecast& f, double mu_star) {
        auto g = payment_guarantee(l, action, f, mu_star);
        return std::make_pair(g.pay, g.max);
      },
      py::arg("loss_spec"), py::arg("action"), py::arg("forecast"), py::arg("mu_star"),
      "returns (expected total with the optimal stake, worst-case bound); equal");
  m.def("is_strict", &is_strict, py::arg("forecast"));
  m.def("bet_is_acceptable", &bet_is_acceptable, py::arg("bet"), py::arg("forecast"));
  m.def(
      "dominating_stake",
      [](const BetFunction& bet, const Forecast& f) -> py::object {
        auto b = dominating_stake(bet, f);
        if (!b) return py::none();
        return py::float_(*b);
      },
      py::arg("bet"), py::arg("forecast"));

  py::class_<BetFunction>(m, "BetFunction")
      .def(py::init([](double f0, double f1) { return BetFunction{f0, f1}; }),
           py::arg("f0"), py::arg("f1"))
      .def_readwrite("f0", &BetFunction::f0)
      .def_readwrite("f1", &BetFunction::f1);

  py::enum_<SelectorKind>(m, "SelectorKind")
      .value("swap", SelectorKind::swap)
      .value("none", SelectorKind::none)
      .value("standard", SelectorKind::standard)
      .value("naive_br", SelectorKind::naive_br);

  py::enum_<ForecastMode>(m, "ForecastMode")
      .value("exactness", ForecastMode::exactness)
      .value("strict", ForecastMode::strict)
      .value("monotone", ForecastMode::monotone);

  py::enum_<Arch>(m, "Arch").value("linear", Arch::linear).value("one_hidden", Arch::one_hidden);

  py::class_<ForecasterConfig>(m, "ForecasterConfig")
      .def(py::init<>())
      .def_readwrite("arch", &ForecasterConfig::arch)
      .def_readwrite("dim", &ForecasterConfig::dim)
      .def_readwrite("hidden", &ForecasterConfig::hidden)
      .def_readwrite("eta", &ForecasterConfig::eta)
      .def_readwrite("horizon", &ForecasterConfig::horizon)
      .def_readwrite("k_override", &ForecasterConfig::k_override)
      .def_readwrite("selector", &ForecasterConfig::selector)
      .def_readwrite("mode", &ForecasterConfig::mode)
      .def_readwrite("max_stake", &ForecasterConfig::max_stake)
      .def_readwrite("seed", &ForecasterConfig::seed);

  py::class_<ObservedRound>(m, "ObservedRound")
      .def_readonly("t", &ObservedRound::t)
      .def_readonly("mu", &ObservedRound::mu)
      .def_readonly("c", &ObservedRound::c)
      .def_readonly("lambda_", &ObservedRound::lambda)
      .def_readonly("b", &ObservedRound::b)
      .def_readonly("y", &ObservedRound::y)
      .def_readonly("betting_loss", &ObservedRound::betting_loss)
      .def_readonly("payout", &ObservedRound::payout)
      .def_readonly("cum_betting_loss", &ObservedRound::cum_betting_loss);

  py::class_<ExactForecaster>(m, "ExactForecaster")
      .def(py::init<const ForecasterConfig&>(), py::arg("config"))
      .def("predict", &ExactForecaster::predict, py::arg("x"))
      .def("observe", &ExactForecaster::observe, py::arg("y"), py::arg("b"))
      .def_property_readonly("num_bins", &ExactForecaster::num_bins)
      .def_property_readonly("rounds_completed", &ExactForecaster::rounds_completed)
      .def_property_readonly("cum_betting_loss", &ExactForecaster::cum_betting_loss)
      .def("save_snapshot", &ExactForecaster::save_snapshot)
      .def_static("load_snapshot", &ExactForecaster::load_snapshot, py::arg("text"));

  py::class_<ExactnessResult>(m, "ExactnessResult")
      .def_readonly("T", &ExactnessResult::T)
      .def_readonly("final_avg_payout", &ExactnessResult::final_avg_payout)
      .def_readonly("avg_payout_at_tenth", &ExactnessResult::avg_payout_at_tenth)
      .def_readonly("max_avg_sq_scaled", &ExactnessResult::max_avg_sq_scaled)
      .def_readonly("median_abs_c_final_half", &ExactnessResult::median_abs_c_final_half);

  m.def(
      "run_exactness",
      [](std::string stream, std::string task, std::string agent, std::string selector,
         std::string mode, std::int64_t T, double eta, std::uint64_t seed) {
        ExactnessConfig cfg;
        cfg.stream.kind = std::move(stream);
        cfg.task = task_family_from_string(task);
        cfg.agent.kind = std::move(agent);
        cfg.selector = selector_from_string(selector);
        cfg.mode = mode_from_string(mode);
        cfg.T = T;
        cfg.eta = eta;
        cfg.seed = seed;
        return run_exactness_sim(cfg);
      },
      py::arg("stream") = "drift", py::arg("task") = "one_sided",
      py::arg("agent") = "honest", py::arg("selector") = "swap",
      py::arg("mode") = "exactness", py::arg("T") = 1000, py::arg("eta") = 0.01,
      py::arg("seed") = 0);

  py::class_<MarketSeries>(m, "MarketSeries")
      .def_readonly("mechanism_on", &MarketSeries::mechanism_on)
      .def_readonly("revenue_avg", &MarketSeries::revenue_avg)
      .def_readonly("total_utility_avg", &MarketSeries::total_utility_avg)
      .def_readonly("insurance_net_avg", &MarketSeries::insurance_net_avg);

  m.def(
      "run_market",
      [](std::int64_t num_flights, double cautious_frac, std::uint64_t seed,
         bool mechanism_on) {
        MarketConfig cfg;
        cfg.num_flights = num_flights;
        cfg.cautious_frac = cautious_frac;
        cfg.seed = seed;
        return run_market(cfg, mechanism_on);
      },
      py::arg("num_flights") = 100, py::arg("cautious_frac") = 0.5, py::arg("seed") = 0,
      py::arg("mechanism_on") = true);

  py::class_<DiscreteDistribution>(m, "DiscreteDistribution")
      .def(py::init([](const std::vector<std::tuple<std::string, double, double>>& rows) {
             std::vector<SupportPoint> support;
             support.reserve(rows.size());
             for (const auto& [id, w, ms] : rows) support.push_back({id, w, ms});
             return DiscreteDistribution(std::move(support));
           }),
           py::arg("support"), "support rows: (id, weight, mu_star)");

  py::class_<TableForecaster>(m, "TableForecaster")
      .def(py::init<>())
      .def("set", &TableForecaster::set, py::arg("id"), py::arg("forecast"))
      .def("at", &TableForecaster::at, py::arg("id"));

  py::enum_<BetClass>(m, "BetClass")
      .value("functions_of_mu", BetClass::functions_of_mu)
      .value("functions_of_x", BetClass::functions_of_x);

  m.def("soundness_gap", &soundness_gap, py::arg("dist"), py::arg("table"),
        py::arg("bet_class"), py::arg("M"));
  m.def("mce", &mce, py::arg("dist"), py::arg("table"));
  m.def(
      "histogram_binning",
      [](const DiscreteDistribution& dist, const TableForecaster& fc, int bins) {
        return histogram_binning(dist, fc, bins);
      },
      py::arg("dist"), py::arg("table"), py::arg("bins"));
}
