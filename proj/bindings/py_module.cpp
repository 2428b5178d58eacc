#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "crnsim/experiments.hpp"
#include "crnsim/ge_dist.hpp"
#include "crnsim/metrics.hpp"
#include "crnsim/oracles.hpp"
#include "crnsim/qnet.hpp"
#include "crnsim/rng.hpp"

namespace py = pybind11;
using namespace crnsim;
namespace ex = crnsim::experiments;
namespace orc = crnsim::oracles;

namespace {

py::dict metrics_dict(const RunStats& rs) {
  py::dict out;
  for (const auto& [key, value] : metric_map(rs)) {
    out[py::make_tuple(key.name, key.class_scope, key.station_scope)] = value;
  }
  return out;
}

py::dict aggregate_dict(const AggregateStats& agg) {
  py::dict out;
  for (const auto& [key, entry] : agg.metrics) {
    py::dict e;
    e["mean"] = entry.mean;
    e["stddev"] = entry.stddev;
    e["ci95_half_width"] = entry.ci95_half_width;
    e["reps"] = entry.reps;
    out[py::make_tuple(key.name, key.class_scope, key.station_scope)] = e;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Discrete-event simulator for two-class preemptive-priority queueing networks";

  // --- random streams and the bursty service/interarrival family ------------
  py::class_<RngStream>(m, "RngStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream_id"))
      .def("next_u64", &RngStream::next_u64)
      .def("next_uniform", &RngStream::next_uniform);

  py::class_<GEParams>(m, "GEParams")
      .def(py::init<double, double>(), py::arg("rate"), py::arg("scv"))
      .def_readonly("rate", &GEParams::rate)
      .def_readonly("scv", &GEParams::scv)
      .def_readonly("tau", &GEParams::tau);

  m.def("ge_tau", &ge_tau, py::arg("scv"));
  m.def("exp_sample", &exp_sample, py::arg("rate"), py::arg("rng"));
  m.def("ge_sample", [](const GEParams& p, RngStream& rng) { return ge_sample(p, rng); },
        py::arg("params"), py::arg("rng"));

  // --- closed-form oracles ---------------------------------------------------
  py::class_<orc::MM1Result>(m, "MM1Result")
      .def_readonly("rho", &orc::MM1Result::rho)
      .def_readonly("L", &orc::MM1Result::L)
      .def_readonly("Lq", &orc::MM1Result::Lq)
      .def_readonly("W", &orc::MM1Result::W)
      .def_readonly("Wq", &orc::MM1Result::Wq);

  py::class_<orc::PrPriorityResult>(m, "PrPriorityResult")
      .def_readonly("w1", &orc::PrPriorityResult::w1)
      .def_readonly("w2", &orc::PrPriorityResult::w2);

  m.def("mm1", &orc::mm1, py::arg("lam"), py::arg("mu"));
  m.def("mm1n_loss", &orc::mm1n_loss, py::arg("lam"), py::arg("mu"), py::arg("n_total"));
  m.def("erlang_c_wq", &orc::erlang_c_wq, py::arg("lam"), py::arg("mu"), py::arg("c"));
  m.def("mm1_preemptive_resume", &orc::mm1_preemptive_resume, py::arg("lam1"), py::arg("lam2"),
        py::arg("mu"));
  m.def("mm1n_loss_ctmc", &orc::mm1n_loss_ctmc, py::arg("lam"), py::arg("mu"),
        py::arg("n_total"));
  m.def("mmc_wq_ctmc", &orc::mmc_wq_ctmc, py::arg("lam"), py::arg("mu"), py::arg("c"),
        py::arg("max_in_system"));
  m.def("mm1_preemptive_resume_ctmc", &orc::mm1_preemptive_resume_ctmc, py::arg("lam1"),
        py::arg("lam2"), py::arg("mu"), py::arg("cap1"), py::arg("cap2"));

  // --- network model -----------------------------------------------------------
  py::enum_<Discipline>(m, "Discipline")
      .value("PR", Discipline::PR)
      .value("PRI", Discipline::PRI);

  py::enum_<JobClass>(m, "JobClass").value("PU", JobClass::PU).value("SU", JobClass::SU);

  py::enum_<StationKind>(m, "StationKind")
      .value("SEC", StationKind::SEC)
      .value("AC", StationKind::AC)
      .value("CH", StationKind::CH);

  py::class_<StationParams>(m, "StationParams")
      .def(py::init<>())
      .def_readwrite("kind", &StationParams::kind)
      .def_readwrite("servers", &StationParams::servers)
      .def_readwrite("capacity", &StationParams::capacity)
      .def_readwrite("service", &StationParams::service);

  py::class_<ArrivalSpec>(m, "ArrivalSpec")
      .def(py::init<>())
      .def(py::init([](double rate, double scv) {
             ArrivalSpec s;
             s.rate = rate;
             s.scv = scv;
             return s;
           }),
           py::arg("rate"), py::arg("scv") = 1.0)
      .def_readwrite("rate", &ArrivalSpec::rate)
      .def_readwrite("scv", &ArrivalSpec::scv);

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init<>())
      .def_readwrite("discipline", &NetworkConfig::discipline)
      .def_readwrite("pu_arrival", &NetworkConfig::pu_arrival)
      .def_readwrite("su_arrival", &NetworkConfig::su_arrival)
      .def_readwrite("stations", &NetworkConfig::stations)
      .def_readwrite("p_malicious", &NetworkConfig::p_malicious)
      .def_readwrite("p_admission_reject", &NetworkConfig::p_admission_reject)
      .def_readwrite("seed", &NetworkConfig::seed)
      .def_readwrite("horizon", &NetworkConfig::horizon)
      .def_readwrite("warmup", &NetworkConfig::warmup)
      .def_readwrite("max_events", &NetworkConfig::max_events)
      .def("validate", &NetworkConfig::validate)
      .def("security_enabled", &NetworkConfig::security_enabled);

  m.def("standard_stations", &standard_stations, py::arg("security"),
        py::arg("channel_servers"), py::arg("capacity"), py::arg("service"));

  py::class_<RunStats>(m, "RunStats")
      .def_readonly("warmup", &RunStats::warmup)
      .def_readonly("horizon", &RunStats::horizon)
      .def_readonly("replication", &RunStats::replication)
      .def_readonly("config_hash", &RunStats::config_hash)
      .def("metrics", &metrics_dict,
           "Scalar metrics keyed by (name, class_scope, station_scope)")
      .def("conservation_balanced",
           [](const RunStats& rs) { return rs.conservation.balanced(); })
      .def("littles_residual", &littles_residual, py::arg("station"), py::arg("job_class"));

  m.def("run_replication", &run_replication, py::arg("config"), py::arg("replication"),
        py::call_guard<py::gil_scoped_release>());
  m.def(
      "aggregate",
      [](const std::vector<RunStats>& runs) { return aggregate_dict(aggregate(runs)); },
      py::arg("runs"),
      "Mean / stddev / 95% half-width per metric across replications of one configuration");
  m.def("student_t_975", &student_t_975, py::arg("dof"));

  // --- parameter studies ------------------------------------------------------
  py::class_<ex::SchemeConfig>(m, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("scheme_id", &ex::SchemeConfig::scheme_id)
      .def_readwrite("disciplines", &ex::SchemeConfig::disciplines)
      .def_readwrite("security", &ex::SchemeConfig::security)
      .def_readwrite("servers", &ex::SchemeConfig::servers)
      .def_readwrite("pu_rates", &ex::SchemeConfig::pu_rates)
      .def_readwrite("su_rates", &ex::SchemeConfig::su_rates)
      .def_readwrite("scv_pairs", &ex::SchemeConfig::scv_pairs)
      .def_readwrite("capacity", &ex::SchemeConfig::capacity)
      .def_readwrite("mu", &ex::SchemeConfig::mu)
      .def_readwrite("reps", &ex::SchemeConfig::reps)
      .def_readwrite("horizon", &ex::SchemeConfig::horizon)
      .def_readwrite("warmup_fraction", &ex::SchemeConfig::warmup_fraction)
      .def_readwrite("base_seed", &ex::SchemeConfig::base_seed)
      .def_readwrite("p_malicious", &ex::SchemeConfig::p_malicious)
      .def_readwrite("p_admission_reject", &ex::SchemeConfig::p_admission_reject)
      .def("validate", &ex::SchemeConfig::validate);

  py::class_<ex::OutputRow>(m, "OutputRow")
      .def_readonly("scheme", &ex::OutputRow::scheme)
      .def_readonly("discipline", &ex::OutputRow::discipline)
      .def_readonly("security", &ex::OutputRow::security)
      .def_readonly("servers", &ex::OutputRow::servers)
      .def_readonly("capacity", &ex::OutputRow::capacity)
      .def_readonly("pu_rate", &ex::OutputRow::pu_rate)
      .def_readonly("su_rate", &ex::OutputRow::su_rate)
      .def_readonly("scv_arrival", &ex::OutputRow::scv_arrival)
      .def_readonly("scv_service", &ex::OutputRow::scv_service)
      .def_readonly("metric", &ex::OutputRow::metric)
      .def_readonly("class_scope", &ex::OutputRow::class_scope)
      .def_readonly("station_scope", &ex::OutputRow::station_scope)
      .def_readonly("mean", &ex::OutputRow::mean)
      .def_readonly("ci95_half_width", &ex::OutputRow::ci95_half_width)
      .def_readonly("reps", &ex::OutputRow::reps);

  m.def("builtin_scheme", &ex::builtin_scheme, py::arg("id"));
  m.def("load_config", &ex::load_config, py::arg("path"));
  m.def(
      "run_scheme",
      [](const ex::SchemeConfig& cfg, int parallel) {
        ex::RunOptions opt;
        opt.parallel = parallel;
        return ex::run_scheme(cfg, opt);
      },
      py::arg("config"), py::arg("parallel") = 1,
      py::call_guard<py::gil_scoped_release>());
  m.def("to_csv", &ex::to_csv, py::arg("rows"));
  m.def("to_plotdata", &ex::to_plotdata, py::arg("rows"));
  m.def("emit", &ex::emit, py::arg("rows"), py::arg("format"), py::arg("out_dir"));
  m.def("format_number", &ex::format_number, py::arg("value"));
}
