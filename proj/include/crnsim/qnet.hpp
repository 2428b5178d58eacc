#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "crnsim/des_core.hpp"
#include "crnsim/ge_dist.hpp"
#include "crnsim/metrics.hpp"

namespace crnsim {

// How an interrupted secondary transmission continues once the channel is
// free again: PR resumes from where it stopped (the platform buffered the
// partial transmission), PRI restarts the whole demand from scratch.
enum class Discipline : std::uint8_t { PR = 0, PRI = 1 };

const char* discipline_name(Discipline d) noexcept;

struct StationParams {
  StationKind kind = StationKind::CH;
  std::int32_t servers = 1;
  std::uint64_t capacity = 20;  // waiting slots per class, in-service excluded
  GEParams service{13.0, 1.0};
};

// rate == 0 switches the class off entirely.
struct ArrivalSpec {
  double rate = 0.0;
  double scv = 1.0;
};

struct NetworkConfig {
  Discipline discipline = Discipline::PR;
  ArrivalSpec pu_arrival{};
  ArrivalSpec su_arrival{};
  std::vector<StationParams> stations;  // visited in order
  double p_malicious = 0.0;         // PU drop probability at the SEC entry stage
  double p_admission_reject = 0.0;  // SU drop probability at the AC entry stage
  std::uint64_t seed = 1;
  double horizon = 2e5;
  double warmup = 2e4;
  std::uint64_t max_events = 0;  // 0 = unbounded

  // Observability switches; they never change the dynamics.
  bool record_jobs = false;
  bool record_observations = false;
  bool check_invariants = false;

  void validate() const;  // throws std::invalid_argument
  bool security_enabled() const noexcept;
  std::uint64_t hash() const noexcept;  // excludes the observability switches
};

// The standard tandem path: optional SEC, then AC, then the channel.  Only
// the channel station gets multiple servers; every station shares the same
// per-class waiting capacity and service-demand distribution.
std::vector<StationParams> standard_stations(bool security, std::int32_t channel_servers,
                                             std::uint64_t capacity,
                                             const GEParams& service);

// ---------------------------------------------------------------------------
// Per-job records (optional, for fine-grained assertions)

struct ServiceSegment {
  double start = 0.0;
  double stop = 0.0;
};

struct StationVisit {
  std::int32_t station = -1;
  double arrival = 0.0;  // accepted at the station (past the entry stage)
  double sampled = 0.0;  // demand drawn on entry
  double served = 0.0;   // server time actually consumed here
  std::uint32_t preemptions = 0;
  std::vector<ServiceSegment> segments;
};

enum class JobOutcome : std::uint8_t {
  InSystem = 0,
  Departed = 1,
  BufferLoss = 2,
  SecurityDrop = 3,
  AdmissionDrop = 4,
};

struct JobRecord {
  std::uint64_t id = 0;
  JobClass job_class = JobClass::PU;
  double external_arrival = 0.0;
  double finished = 0.0;
  JobOutcome outcome = JobOutcome::InSystem;
  std::int32_t outcome_station = -1;
  std::vector<StationVisit> visits;
};

struct ReplicationResult {
  RunStats stats;
  std::vector<JobRecord> jobs;      // filled iff config.record_jobs
  ObservationLog observations;      // filled iff config.record_observations
};

// Runs one replication to the configured horizon and returns its statistics.
// The replication index selects the random substreams; the same
// (config, replication) pair always produces identical results.
RunStats run_replication(const NetworkConfig& config, std::uint64_t replication);

ReplicationResult run_replication_full(const NetworkConfig& config,
                                       std::uint64_t replication,
                                       TraceSink* trace = nullptr);

}  // namespace crnsim
