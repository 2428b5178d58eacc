#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace crnsim {

enum class JobClass : std::uint8_t { PU = 0, SU = 1 };
enum class StationKind : std::uint8_t { SEC = 0, AC = 1, CH = 2 };

const char* job_class_name(JobClass c) noexcept;
const char* station_kind_name(StationKind k) noexcept;

// A single statistical fact emitted by the model.  Every statistic of a run
// is a pure function of the observation sequence plus (warmup, horizon), so
// replaying a recorded log through fresh Accumulators must reproduce the
// run's numbers exactly.
enum class ObsKind : std::uint8_t {
  ExternalArrival = 0,  // class enters the network
  Offered = 1,          // job offered to a station
  EntryDrop = 2,        // dropped by the station's entry stage (a = 1)
  BufferLoss = 3,       // rejected, waiting buffer full
  WaitingDelta = 4,     // a = +1/-1 change of the waiting count
  BusyDelta = 5,        // a = +1/-1 change of the busy-server count
  StationCompletion = 6,  // a = waiting time here, b = server time here
  Preemption = 7,         // service interrupted
  Departure = 8,          // left the network; a = response, b = total waiting
};

struct Observation {
  double time = 0.0;
  ObsKind kind = ObsKind::ExternalArrival;
  std::int32_t station = -1;  // -1 for network-level observations
  JobClass job_class = JobClass::PU;
  double a = 0.0;
  double b = 0.0;
};

using ObservationLog = std::vector<Observation>;

// Per-(station, class) tallies over the measurement window.
struct StationClassStats {
  std::uint64_t offered = 0;
  std::uint64_t entry_drops = 0;
  std::uint64_t buffer_losses = 0;
  std::uint64_t completions = 0;
  std::uint64_t preemptions = 0;
  double waiting_time_sum = 0.0;
  double server_time_sum = 0.0;
  double waiting_area = 0.0;  // integral of the waiting count
  double busy_area = 0.0;     // integral of the busy-server count

  bool operator==(const StationClassStats&) const = default;
};

struct ClassEndToEnd {
  std::uint64_t external_arrivals = 0;
  std::uint64_t departures = 0;
  double response_sum = 0.0;
  double waiting_sum = 0.0;

  bool operator==(const ClassEndToEnd&) const = default;
};

// Whole-run counters (not restricted to the window); these must satisfy the
// conservation identity exactly on every run.
struct Conservation {
  std::uint64_t external_arrivals[2] = {0, 0};
  std::uint64_t departures[2] = {0, 0};
  std::uint64_t buffer_losses[2] = {0, 0};
  std::uint64_t entry_drops[2] = {0, 0};
  std::uint64_t in_system_at_end[2] = {0, 0};

  bool balanced() const noexcept;
  bool operator==(const Conservation&) const = default;
};

struct StationLayout {
  StationKind kind = StationKind::CH;
  std::int32_t servers = 1;

  bool operator==(const StationLayout&) const = default;
};

struct RunStats {
  double warmup = 0.0;
  double horizon = 0.0;
  std::uint64_t config_hash = 0;
  std::uint64_t replication = 0;
  std::vector<StationLayout> stations;
  std::vector<StationClassStats> per_station_class;  // stations.size() * 2
  ClassEndToEnd end_to_end[2];
  Conservation conservation;

  const StationClassStats& at(std::size_t station, JobClass c) const;
  double window() const noexcept { return horizon - warmup; }

  bool operator==(const RunStats&) const = default;
};

// Streaming reduction of observations for a fixed (warmup, horizon) window.
// Time-weighted integrals straddling the warmup boundary are clipped to the
// window, so no special boundary observation is required.
class Accumulators {
 public:
  Accumulators(std::size_t n_stations, double warmup);

  void apply(const Observation& o);
  // Flushes time-weighted integrals up to the horizon and returns the stats
  // shell (layout/hash/replication fields are filled by the caller).
  RunStats finalize(double horizon);

 private:
  struct LevelTrack {
    std::int64_t count = 0;
    double last = 0.0;
    double area = 0.0;
  };

  void advance(LevelTrack& t, double now);

  std::size_t n_stations_;
  double warmup_;
  std::vector<StationClassStats> sc_;
  std::vector<LevelTrack> waiting_;
  std::vector<LevelTrack> busy_;
  ClassEndToEnd e2e_[2];
};

// Identification of one scalar metric in reports: metric name plus class
// scope (PU/SU/total) and station scope (SEC/AC/CH/end_to_end/total).
struct MetricKey {
  std::string name;
  std::string class_scope;
  std::string station_scope;

  auto operator<=>(const MetricKey&) const = default;
};

using MetricMap = std::map<MetricKey, double>;

// Derived per-run metrics.  Metrics whose denominator is empty (no
// completions, no offered jobs, ...) are absent from the map rather than
// reported as 0/0.
MetricMap metric_map(const RunStats& run);

// Relative Little's-law residual |L - lambda*W| / max(L, eps) for one
// (station, class) over the window; returns a negative value when the
// station saw no completions (diagnostic undefined).
double littles_residual(const RunStats& run, std::size_t station, JobClass c);

struct AggregateEntry {
  double mean = 0.0;
  double stddev = 0.0;
  double ci95_half_width = 0.0;
  std::uint32_t reps = 0;
};

struct AggregateStats {
  std::uint32_t reps = 0;
  std::map<MetricKey, AggregateEntry> metrics;
};

// Upper 97.5% quantile of Student's t with dof degrees of freedom.
double student_t_975(std::uint32_t dof);

// Mean / sd / 95% half-width of a replication sample (size >= 2).
AggregateEntry aggregate_values(const std::vector<double>& values);

// Aggregates per-run metric maps across replications of one configuration.
// Throws std::invalid_argument on fewer than two runs or on config_hash
// mismatch.  Metric keys present in fewer than two runs are dropped.
AggregateStats aggregate(const std::vector<RunStats>& runs);

}  // namespace crnsim
