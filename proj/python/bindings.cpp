#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ctrldiss/analytic.hpp"
#include "ctrldiss/probability.hpp"
#include "ctrldiss/simulator.hpp"
#include "ctrldiss/stationary.hpp"
#include "ctrldiss/tuner.hpp"

namespace py = pybind11;
using namespace ctrldiss;

PYBIND11_MODULE(_ctrldiss, m) {
  m.doc() = "control information dissemination: analytic model, tuner and "
            "simulator";

  py::enum_<Strategy>(m, "Strategy")
      .value("FULL_DUMP_ONLY", Strategy::FullDumpOnly)
      .value("INCREMENTAL", Strategy::Incremental)
      .value("CUMULATIVE", Strategy::Cumulative);

  py::enum_<TuneMode>(m, "TuneMode")
      .value("EXACT", TuneMode::Exact)
      .value("ASYMPTOTIC", TuneMode::Asymptotic);

  py::class_<ScenarioParams>(m, "ScenarioParams")
      .def(py::init([](double arrival_rate, double expiry_rate, int capacity,
                       long long element_bits, double churn_rate,
                       std::vector<double> neighbor_ber,
                       double relevance_threshold) {
             ScenarioParams s;
             s.arrival_rate = arrival_rate;
             s.expiry_rate = expiry_rate;
             s.capacity = capacity;
             s.element_bits = element_bits;
             s.churn_rate = churn_rate;
             s.neighbor_ber = std::move(neighbor_ber);
             s.relevance_threshold = relevance_threshold;
             s.validate();
             return s;
           }),
           py::arg("arrival_rate"), py::arg("expiry_rate"), py::arg("capacity"),
           py::arg("element_bits"), py::arg("churn_rate"),
           py::arg("neighbor_ber"), py::arg("relevance_threshold") = 0.95)
      .def_readonly("arrival_rate", &ScenarioParams::arrival_rate)
      .def_readonly("expiry_rate", &ScenarioParams::expiry_rate)
      .def_readonly("capacity", &ScenarioParams::capacity)
      .def_readonly("element_bits", &ScenarioParams::element_bits)
      .def_readonly("churn_rate", &ScenarioParams::churn_rate)
      .def_readonly("neighbor_ber", &ScenarioParams::neighbor_ber)
      .def_readonly("relevance_threshold", &ScenarioParams::relevance_threshold)
      .def("load", &ScenarioParams::load)
      .def("with_load", &ScenarioParams::with_load, py::arg("load"))
      .def("__repr__", [](const ScenarioParams& s) {
        std::ostringstream out;
        out << "ScenarioParams(arrival_rate=" << s.arrival_rate
            << ", expiry_rate=" << s.expiry_rate << ", capacity=" << s.capacity
            << ", neighbors=" << s.neighbor_count() << ")";
        return out.str();
      });

  py::class_<ProtocolParams>(m, "ProtocolParams")
      .def(py::init([](Strategy strategy, int full_dump_period,
                       int full_dump_retries, int diff_retries) {
             ProtocolParams p{strategy, full_dump_period, full_dump_retries,
                              diff_retries};
             p.validate();
             return p;
           }),
           py::arg("strategy") = Strategy::Incremental,
           py::arg("full_dump_period") = 1, py::arg("full_dump_retries") = 1,
           py::arg("diff_retries") = 1)
      .def_readonly("strategy", &ProtocolParams::strategy)
      .def_readonly("full_dump_period", &ProtocolParams::full_dump_period)
      .def_readonly("full_dump_retries", &ProtocolParams::full_dump_retries)
      .def_readonly("diff_retries", &ProtocolParams::diff_retries)
      .def("__repr__", [](const ProtocolParams& p) {
        std::ostringstream out;
        out << "ProtocolParams(" << to_string(p.strategy)
            << ", N=" << p.full_dump_period << ", n_f=" << p.full_dump_retries
            << ", n_d=" << p.diff_retries << ")";
        return out.str();
      });

  py::class_<StationaryDistribution>(m, "StationaryDistribution")
      .def_readonly("pi", &StationaryDistribution::pi)
      .def("mean", &StationaryDistribution::mean);

  py::class_<AnalyticReport>(m, "AnalyticReport")
      .def_readonly("mean_elements", &AnalyticReport::mean_elements)
      .def_readonly("mean_deletions", &AnalyticReport::mean_deletions)
      .def_readonly("full_dump_loss", &AnalyticReport::full_dump_loss)
      .def_readonly("diff_loss", &AnalyticReport::diff_loss)
      .def_readonly("cycle_relevance", &AnalyticReport::cycle_relevance)
      .def_readonly("neighbor_relevance", &AnalyticReport::neighbor_relevance)
      .def_readonly("relevance_all", &AnalyticReport::relevance_all)
      .def_readonly("control_volume", &AnalyticReport::control_volume)
      .def("control_volume_bits", &AnalyticReport::control_volume_bits)
      .def_readonly("startup_approx_warning",
                    &AnalyticReport::startup_approx_warning);

  py::class_<TuningResult>(m, "TuningResult")
      .def_readonly("feasible", &TuningResult::feasible)
      .def_readonly("best", &TuningResult::best)
      .def_readonly("best_volume", &TuningResult::best_volume)
      .def_readonly("best_relevance", &TuningResult::best_relevance)
      .def_readonly("evaluated", &TuningResult::evaluated)
      .def_readonly("n_max", &TuningResult::n_max)
      .def_readonly("at_retry_limit", &TuningResult::at_retry_limit);

  py::class_<SimulationReport>(m, "SimulationReport")
      .def_readonly("mean_volume", &SimulationReport::mean_volume)
      .def_readonly("mean_relevance", &SimulationReport::mean_relevance)
      .def_readonly("volume_ci_halfwidth", &SimulationReport::volume_ci_halfwidth)
      .def_readonly("relevance_ci_halfwidth",
                    &SimulationReport::relevance_ci_halfwidth)
      .def_readonly("horizon", &SimulationReport::horizon)
      .def_readonly("warmup", &SimulationReport::warmup)
      .def_readonly("runs", &SimulationReport::runs)
      .def_readonly("seed", &SimulationReport::seed);

  m.def("message_loss_prob", &message_loss_prob, py::arg("ber"),
        py::arg("elements"), py::arg("element_bits"),
        "probability a message with the given element count is not decoded");
  m.def("deletion_dist", &deletion_dist, py::arg("deleted"), py::arg("present"),
        py::arg("expiry_rate"));
  m.def("addition_dist", &addition_dist, py::arg("added"), py::arg("present"),
        py::arg("deleted"), py::arg("arrival_rate"), py::arg("capacity"));

  m.def(
      "stationary_distribution",
      [](const ScenarioParams& scenario) {
        return solve_stationary(build_kernel(scenario));
      },
      py::arg("scenario"),
      "stationary law of the tracked-element count for a scenario");

  m.def(
      "analytic_report",
      [](const ScenarioParams& scenario, const ProtocolParams& protocol) {
        return analytic_report(scenario, protocol,
                               solve_stationary(build_kernel(scenario)));
      },
      py::arg("scenario"), py::arg("protocol"));
  m.def("asymptotic_report", &asymptotic_report, py::arg("scenario"),
        py::arg("protocol"));

  m.def("n_max", &n_max, py::arg("churn_rate"), py::arg("neighbors"),
        py::arg("relevance_threshold"),
        "largest full dump period the startup constraint allows");
  m.def(
      "tune",
      [](const ScenarioParams& scenario, TuneMode mode, int retry_limit,
         int period_limit) {
        TuneOptions opts;
        opts.mode = mode;
        opts.retry_limit = retry_limit;
        opts.period_limit = period_limit;
        return tune(scenario, opts);
      },
      py::arg("scenario"), py::arg("mode") = TuneMode::Exact,
      py::arg("retry_limit") = 7, py::arg("period_limit") = 1000);

  m.def(
      "simulate",
      [](const ScenarioParams& scenario, const ProtocolParams& protocol,
         long long horizon, long long warmup, int runs, std::uint64_t seed,
         bool cumulative_cancel_pairs) {
        SimOptions opts;
        opts.horizon = horizon;
        opts.warmup = warmup;
        opts.runs = runs;
        opts.seed = seed;
        opts.cumulative_cancel_pairs = cumulative_cancel_pairs;
        return simulate(scenario, protocol, opts);
      },
      py::arg("scenario"), py::arg("protocol"), py::arg("horizon") = 100000,
      py::arg("warmup") = -1, py::arg("runs") = 20, py::arg("seed") = 1,
      py::arg("cumulative_cancel_pairs") = true);
}
