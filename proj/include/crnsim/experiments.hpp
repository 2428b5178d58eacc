#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "crnsim/metrics.hpp"
#include "crnsim/qnet.hpp"

namespace crnsim::experiments {

// One study: a grid of network configurations, replicated and aggregated.
// Schemes A-D are the built-in grids; custom grids come from config files.
struct SchemeConfig {
  std::string scheme_id = "custom";
  std::vector<Discipline> disciplines{Discipline::PR};
  std::vector<int> security{0, 1};  // 0 = off, 1 = on
  std::vector<std::int32_t> servers{1};
  std::vector<double> pu_rates{3.0};
  std::vector<double> su_rates{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
  // Arrival/service variability pairs, swept together for the built-ins.
  std::vector<std::pair<double, double>> scv_pairs{{1.0, 1.0}};
  std::uint64_t capacity = 20;
  double mu = 13.0;
  int reps = 20;
  double horizon = 2e5;
  double warmup_fraction = 0.1;
  std::uint64_t base_seed = 1;
  double p_malicious = 0.0;
  double p_admission_reject = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// The four built-in studies (scheme id "A".."D").
SchemeConfig builtin_scheme(const std::string& id);

struct GridPoint {
  Discipline discipline = Discipline::PR;
  bool security = false;
  std::int32_t servers = 1;
  double pu_rate = 0.0;
  double su_rate = 0.0;
  double scv_arrival = 1.0;
  double scv_service = 1.0;
};

// Canonical enumeration order: discipline, security, servers, pu_rate,
// scv pair, su_rate (innermost).
std::vector<GridPoint> enumerate_grid(const SchemeConfig& cfg);

// Stable key of a grid point, derived from its coordinates only, so seeds do
// not depend on the point's position in the grid.
std::uint64_t grid_point_key(const SchemeConfig& cfg, const GridPoint& p);

NetworkConfig to_network_config(const SchemeConfig& cfg, const GridPoint& p);

// Parses the line-oriented `key = value` scenario format.  Unknown keys,
// malformed values, and out-of-range parameters raise std::runtime_error
// naming the line and key; a file with no recognized settings is an error.
SchemeConfig parse_config(std::istream& in, const std::string& origin);
SchemeConfig load_config(const std::string& path);

struct OutputRow {
  std::string scheme;
  Discipline discipline = Discipline::PR;
  bool security = false;
  std::int32_t servers = 1;
  std::uint64_t capacity = 20;
  double pu_rate = 0.0;
  double su_rate = 0.0;
  double scv_arrival = 1.0;
  double scv_service = 1.0;
  std::string metric;
  std::string class_scope;
  std::string station_scope;
  double mean = 0.0;
  double ci95_half_width = 0.0;
  std::uint32_t reps = 0;
};

struct RunOptions {
  int parallel = 1;
  // When set, failed grid points are described here and skipped; when null,
  // the first failure aborts the study with an exception.
  std::vector<std::string>* errors = nullptr;
};

// Runs every grid point for `reps` replications and returns aggregated rows
// in canonical order.  Fully deterministic for a given config, independent
// of the worker count.
std::vector<OutputRow> run_scheme(const SchemeConfig& cfg, const RunOptions& opt = {});

// RFC-4180 CSV with a fixed header; floats carry six significant digits.
std::string to_csv(const std::vector<OutputRow>& rows);

// Gnuplot-style tables, one file per (figure metric, scheme): first column
// is the SU arrival rate, then one column per parameter series.
std::map<std::string, std::string> to_plotdata(const std::vector<OutputRow>& rows);

// Writes results.csv and/or the plotdata files into out_dir (created if
// missing).  format is "csv", "plotdata", or "both".  Returns the paths
// written.  I/O failures raise std::runtime_error naming the path.
std::vector<std::string> emit(const std::vector<OutputRow>& rows,
                              const std::string& format, const std::string& out_dir);

// Shared numeric formatting (shortest round-trip of six significant digits).
std::string format_number(double v);

}  // namespace crnsim::experiments
