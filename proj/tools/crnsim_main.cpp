// Command line front end: runs one study (a built-in scheme or a scenario
// file), aggregates the replications, and writes CSV and/or plotdata files.

#include <cstdio>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crnsim/experiments.hpp"

int main(int argc, char** argv) {
  using namespace crnsim::experiments;

  CLI::App app{"crnsim - two-class cognitive-radio queueing network simulator"};
  app.set_version_flag("--version", "crnsim 1.0.0");

  std::string scheme_id;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<double> horizon;
  std::optional<double> warmup;
  std::string out_dir = "out";
  std::string format = "csv";
  bool trace = false;
  int parallel = 1;

  app.add_option("--scheme", scheme_id, "Built-in study to run: A, B, C or D")
      ->check(CLI::IsMember({"A", "B", "C", "D"}));
  app.add_option("--config", config_path, "Scenario file (key = value lines)");
  app.add_option("--seed", seed, "Base seed for the replication streams");
  app.add_option("--reps", reps, "Replications per grid point (>= 2)");
  app.add_option("--horizon", horizon, "Simulated seconds per replication");
  app.add_option("--warmup", warmup, "Warm-up fraction of the horizon, in [0, 1)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "plotdata", "both"}))
      ->capture_default_str();
  app.add_flag("--trace", trace, "Log one line per event to stderr (first replication)");
  app.add_option("--parallel", parallel, "Worker threads for the replication runs")
      ->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  SchemeConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = load_config(config_path);
      if (!scheme_id.empty()) {
        const SchemeConfig grid = builtin_scheme(scheme_id);
        cfg.scheme_id = grid.scheme_id;
        cfg.disciplines = grid.disciplines;
        cfg.security = grid.security;
        cfg.servers = grid.servers;
        cfg.pu_rates = grid.pu_rates;
        cfg.su_rates = grid.su_rates;
        cfg.scv_pairs = grid.scv_pairs;
      }
    } else if (!scheme_id.empty()) {
      cfg = builtin_scheme(scheme_id);
    } else {
      std::fprintf(stderr, "error: no scenario defined, pass --scheme or --config\n");
      return 1;
    }
    if (seed) cfg.base_seed = *seed;
    if (reps) cfg.reps = *reps;
    if (horizon) cfg.horizon = *horizon;
    if (warmup) cfg.warmup_fraction = *warmup;
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  const auto grid = enumerate_grid(cfg);
  std::printf("scheme %s: %zu grid points x %d replications, horizon %s s (warmup %s)\n",
              cfg.scheme_id.c_str(), grid.size(), cfg.reps,
              format_number(cfg.horizon).c_str(),
              format_number(cfg.warmup_fraction * cfg.horizon).c_str());

  if (trace) {
    // One replication of the first grid point, streamed as text; the study
    // itself runs below with tracing off.
    struct StderrTrace final : crnsim::TraceSink {
      void on_event(const crnsim::Event& e) override {
        std::fprintf(stderr, "%.9f seq=%llu %s station=%d server=%d job=%lld class=%s\n",
                     e.time, static_cast<unsigned long long>(e.seq),
                     crnsim::event_kind_name(e.kind), e.station, e.server,
                     static_cast<long long>(e.job),
                     crnsim::job_class_name(static_cast<crnsim::JobClass>(e.job_class)));
      }
    } sink;
    try {
      crnsim::NetworkConfig net = to_network_config(cfg, grid.front());
      crnsim::run_replication_full(net, 0, &sink);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: trace run failed: %s\n", e.what());
      return 2;
    }
  }

  std::vector<std::string> errors;
  RunOptions opt;
  opt.parallel = parallel;
  opt.errors = &errors;
  std::vector<OutputRow> rows;
  try {
    rows = run_scheme(cfg, opt);
    const auto written = emit(rows, format, out_dir);
    for (const std::string& path : written) {
      std::printf("wrote %s\n", path.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  for (const std::string& err : errors) {
    std::fprintf(stderr, "error: %s\n", err.c_str());
  }
  return errors.empty() ? 0 : 2;
}
