#include "crnsim/qnet.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "crnsim/rng.hpp"

namespace crnsim {

const char* discipline_name(Discipline d) noexcept {
  return d == Discipline::PR ? "PR" : "PRI";
}

void NetworkConfig::validate() const {
  const auto bad = [](const std::string& msg) {
    throw std::invalid_argument("NetworkConfig: " + msg);
  };
  if (stations.empty()) bad("at least one station is required");
  for (std::size_t i = 0; i < stations.size(); ++i) {
    const StationParams& s = stations[i];
    if (s.servers < 1) bad("station servers must be >= 1");
    if (i > 0 && stations[i - 1].kind >= s.kind) {
      bad("stations must appear in SEC < AC < CH order without repeats");
    }
    if (!std::isfinite(s.service.rate) || s.service.rate <= 0.0) {
      bad("service rate must be positive");
    }
    if (s.service.scv < 1.0) bad("service scv must be >= 1");
  }
  for (const ArrivalSpec* a : {&pu_arrival, &su_arrival}) {
    if (!std::isfinite(a->rate) || a->rate < 0.0) bad("arrival rate must be >= 0");
    if (a->rate > 0.0 && a->scv < 1.0) bad("arrival scv must be >= 1");
  }
  if (pu_arrival.rate == 0.0 && su_arrival.rate == 0.0) {
    bad("at least one class must have a positive arrival rate");
  }
  if (p_malicious < 0.0 || p_malicious > 1.0) bad("p_malicious must be in [0,1]");
  if (p_admission_reject < 0.0 || p_admission_reject > 1.0) {
    bad("p_admission_reject must be in [0,1]");
  }
  if (!std::isfinite(horizon) || horizon <= 0.0) bad("horizon must be positive");
  if (!std::isfinite(warmup) || warmup < 0.0 || warmup >= horizon) {
    bad("warmup must lie in [0, horizon)");
  }
}

bool NetworkConfig::security_enabled() const noexcept {
  for (const StationParams& s : stations) {
    if (s.kind == StationKind::SEC) return true;
  }
  return false;
}

namespace {
std::uint64_t hash_double(std::uint64_t h, double v) noexcept {
  return hash_combine(h, std::bit_cast<std::uint64_t>(v));
}
}  // namespace

std::uint64_t NetworkConfig::hash() const noexcept {
  std::uint64_t h = 0x43524E53494D0001ull;
  h = hash_combine(h, static_cast<std::uint64_t>(discipline));
  h = hash_double(h, pu_arrival.rate);
  h = hash_double(h, pu_arrival.scv);
  h = hash_double(h, su_arrival.rate);
  h = hash_double(h, su_arrival.scv);
  h = hash_combine(h, stations.size());
  for (const StationParams& s : stations) {
    h = hash_combine(h, static_cast<std::uint64_t>(s.kind));
    h = hash_combine(h, static_cast<std::uint64_t>(s.servers));
    h = hash_combine(h, s.capacity);
    h = hash_double(h, s.service.rate);
    h = hash_double(h, s.service.scv);
  }
  h = hash_double(h, p_malicious);
  h = hash_double(h, p_admission_reject);
  h = hash_combine(h, seed);
  h = hash_double(h, horizon);
  h = hash_double(h, warmup);
  h = hash_combine(h, max_events);
  return h;
}

std::vector<StationParams> standard_stations(bool security, std::int32_t channel_servers,
                                             std::uint64_t capacity,
                                             const GEParams& service) {
  std::vector<StationParams> out;
  if (security) out.push_back({StationKind::SEC, 1, capacity, service});
  out.push_back({StationKind::AC, 1, capacity, service});
  out.push_back({StationKind::CH, channel_servers, capacity, service});
  return out;
}

// ---------------------------------------------------------------------------
// Network runtime

namespace {

struct ServerState {
  std::int64_t job = -1;
  double start = 0.0;
  std::uint64_t generation = 0;
};

struct StationState {
  StationParams p;
  std::vector<ServerState> servers;
  std::deque<std::int64_t> waiting[2];
  std::int32_t busy[2] = {0, 0};
};

struct JobState {
  std::uint64_t id = 0;
  JobClass cls = JobClass::PU;
  double external_arrival = 0.0;
  double station_arrival = 0.0;
  double sampled = 0.0;
  double remaining = 0.0;
  double served_here = 0.0;
  double waiting_accum = 0.0;
  std::uint32_t preempts_here = 0;
  std::int64_t record = -1;
};

class Network final : public EventHandler {
 public:
  Network(const NetworkConfig& cfg, std::uint64_t replication, TraceSink* trace)
      : cfg_(cfg),
        replication_(replication),
        engine_(cfg.max_events),
        acc_(cfg.stations.size(), cfg.warmup),
        streams_(build_streams(cfg.seed, replication)) {
    stations_.reserve(cfg_.stations.size());
    for (const StationParams& p : cfg_.stations) {
      StationState st;
      st.p = p;
      st.servers.resize(static_cast<std::size_t>(p.servers));
      stations_.push_back(std::move(st));
    }
    if (cfg_.pu_arrival.rate > 0.0) {
      arrival_params_[0].emplace(cfg_.pu_arrival.rate, cfg_.pu_arrival.scv);
    }
    if (cfg_.su_arrival.rate > 0.0) {
      arrival_params_[1].emplace(cfg_.su_arrival.rate, cfg_.su_arrival.scv);
    }
    engine_.set_trace(trace);
  }

  ReplicationResult run() {
    // EndOfRun first: at a timestamp tie on the horizon the run stops before
    // processing same-time arrivals, keeping the window boundary exact.
    engine_.schedule(cfg_.horizon, Event{.kind = EventKind::EndOfRun});
    engine_.schedule(cfg_.warmup, Event{.kind = EventKind::EndOfWarmup});
    for (int c = 0; c < 2; ++c) {
      if (arrival_params_[c]) {
        schedule_arrival(static_cast<JobClass>(c));
      }
    }
    engine_.run(*this, cfg_.horizon);
    return finalize();
  }

  void on_event(Engine&, const Event& e) override {
    switch (e.kind) {
      case EventKind::ExternalArrival:
        handle_external(static_cast<JobClass>(e.job_class));
        break;
      case EventKind::ServiceCompletion:
        handle_completion(e);
        break;
      case EventKind::EndOfWarmup:
        break;  // statistics are windowed by time, nothing to reset
      case EventKind::EndOfRun:
        engine_.request_stop();
        break;
    }
    if (cfg_.check_invariants) check_invariants();
  }

 private:
  struct Streams {
    RngStream arrival[2];
    RngStream entry_drop[2];
    RngStream service[2][3];  // [class][StationKind]
  };

  static Streams build_streams(std::uint64_t seed, std::uint64_t rep) {
    const auto mk = [&](int cls, StreamPurpose p) {
      return RngStream(seed, make_stream_id(rep, cls, p));
    };
    return Streams{
        {mk(0, StreamPurpose::Arrival), mk(1, StreamPurpose::Arrival)},
        {mk(0, StreamPurpose::EntryDrop), mk(1, StreamPurpose::EntryDrop)},
        {{mk(0, StreamPurpose::ServiceSec), mk(0, StreamPurpose::ServiceAc),
          mk(0, StreamPurpose::ServiceCh)},
         {mk(1, StreamPurpose::ServiceSec), mk(1, StreamPurpose::ServiceAc),
          mk(1, StreamPurpose::ServiceCh)}},
    };
  }

  RngStream& service_stream(JobClass cls, StationKind kind) {
    return streams_.service[static_cast<int>(cls)][static_cast<int>(kind)];
  }

  void observe(const Observation& o) {
    acc_.apply(o);
    if (cfg_.record_observations) log_.push_back(o);
  }

  void schedule_arrival(JobClass cls) {
    const int c = static_cast<int>(cls);
    const double dt = ge_sample(*arrival_params_[c], streams_.arrival[c]);
    Event e;
    e.kind = EventKind::ExternalArrival;
    e.job_class = static_cast<std::uint8_t>(cls);
    engine_.schedule(engine_.now() + dt, e);
  }

  std::int64_t create_job(JobClass cls, double now) {
    std::int64_t j;
    if (!free_.empty()) {
      j = free_.back();
      free_.pop_back();
    } else {
      j = static_cast<std::int64_t>(pool_.size());
      pool_.emplace_back();
    }
    JobState& job = pool_[static_cast<std::size_t>(j)];
    const int c = static_cast<int>(cls);
    job = JobState{};
    job.id = next_id_[c]++ * 2 + static_cast<std::uint64_t>(c);
    job.cls = cls;
    job.external_arrival = now;
    ++alive_[c];
    if (cfg_.record_jobs) {
      job.record = static_cast<std::int64_t>(records_.size());
      JobRecord r;
      r.id = job.id;
      r.job_class = cls;
      r.external_arrival = now;
      records_.push_back(std::move(r));
    }
    return j;
  }

  void destroy_job(std::int64_t j, JobOutcome outcome, std::int32_t station, double now) {
    JobState& job = pool_[static_cast<std::size_t>(j)];
    if (job.record >= 0) {
      JobRecord& r = records_[static_cast<std::size_t>(job.record)];
      r.outcome = outcome;
      r.outcome_station = station;
      r.finished = now;
    }
    --alive_[static_cast<int>(job.cls)];
    free_.push_back(j);
  }

  void handle_external(JobClass cls) {
    const double now = engine_.now();
    const int c = static_cast<int>(cls);
    ++conservation_.external_arrivals[c];
    observe({now, ObsKind::ExternalArrival, -1, cls, 1.0, 0.0});
    schedule_arrival(cls);
    const std::int64_t j = create_job(cls, now);
    enter_station(0, j, now);
  }

  void enter_station(std::int32_t si, std::int64_t j, double now) {
    StationState& st = stations_[static_cast<std::size_t>(si)];
    JobState& job = pool_[static_cast<std::size_t>(j)];
    const JobClass cls = job.cls;
    const int c = static_cast<int>(cls);
    observe({now, ObsKind::Offered, si, cls, 1.0, 0.0});

    // Entry stage: inspection drops before the job ever competes for space.
    if (st.p.kind == StationKind::SEC && cls == JobClass::PU && cfg_.p_malicious > 0.0) {
      if (streams_.entry_drop[c].next_uniform() < cfg_.p_malicious) {
        ++conservation_.entry_drops[c];
        observe({now, ObsKind::EntryDrop, si, cls, 1.0, 0.0});
        destroy_job(j, JobOutcome::SecurityDrop, si, now);
        return;
      }
    }
    if (st.p.kind == StationKind::AC && cls == JobClass::SU &&
        cfg_.p_admission_reject > 0.0) {
      if (streams_.entry_drop[c].next_uniform() < cfg_.p_admission_reject) {
        ++conservation_.entry_drops[c];
        observe({now, ObsKind::EntryDrop, si, cls, 1.0, 0.0});
        destroy_job(j, JobOutcome::AdmissionDrop, si, now);
        return;
      }
    }

    // The demand is drawn on entry, before any capacity decision, so the
    // per-(class, station) streams stay aligned across disciplines and
    // buffer sizes.
    job.station_arrival = now;
    job.sampled = ge_sample(st.p.service, service_stream(cls, st.p.kind));
    job.remaining = job.sampled;
    job.served_here = 0.0;
    job.preempts_here = 0;
    if (job.record >= 0) {
      StationVisit v;
      v.station = si;
      v.arrival = now;
      v.sampled = job.sampled;
      records_[static_cast<std::size_t>(job.record)].visits.push_back(std::move(v));
    }

    for (std::size_t k = 0; k < st.servers.size(); ++k) {
      if (st.servers[k].job < 0) {
        start_service(si, static_cast<std::int32_t>(k), j, now);
        return;
      }
    }
    if (cls == JobClass::PU && st.busy[1] > 0) {
      preempt_su(si, j, now);
      return;
    }
    if (st.waiting[c].size() < st.p.capacity) {
      st.waiting[c].push_back(j);
      observe({now, ObsKind::WaitingDelta, si, cls, +1.0, 0.0});
      return;
    }
    ++conservation_.buffer_losses[c];
    observe({now, ObsKind::BufferLoss, si, cls, 1.0, 0.0});
    destroy_job(j, JobOutcome::BufferLoss, si, now);
  }

  void start_service(std::int32_t si, std::int32_t server, std::int64_t j, double now) {
    StationState& st = stations_[static_cast<std::size_t>(si)];
    ServerState& sv = st.servers[static_cast<std::size_t>(server)];
    JobState& job = pool_[static_cast<std::size_t>(j)];
    sv.job = j;
    sv.start = now;
    ++sv.generation;
    ++st.busy[static_cast<int>(job.cls)];
    observe({now, ObsKind::BusyDelta, si, job.cls, +1.0, 0.0});
    if (job.record >= 0) {
      records_[static_cast<std::size_t>(job.record)].visits.back().segments.push_back(
          {now, now});
    }
    Event e;
    e.kind = EventKind::ServiceCompletion;
    e.station = si;
    e.server = server;
    e.job = j;
    e.job_class = static_cast<std::uint8_t>(job.cls);
    e.generation = sv.generation;
    engine_.schedule(now + job.remaining, e);
  }

  // A PU arrived, every server is taken and at least one serves an SU:
  // interrupt the most recently started SU (ties broken by larger id) and
  // put it back at the head of the SU queue.  The displaced job is never
  // lost, even when the waiting buffer is momentarily full.
  void preempt_su(std::int32_t si, std::int64_t pu, double now) {
    StationState& st = stations_[static_cast<std::size_t>(si)];
    std::int32_t victim_server = -1;
    for (std::size_t k = 0; k < st.servers.size(); ++k) {
      const ServerState& sv = st.servers[k];
      if (sv.job < 0) continue;
      const JobState& job = pool_[static_cast<std::size_t>(sv.job)];
      if (job.cls != JobClass::SU) continue;
      if (victim_server < 0) {
        victim_server = static_cast<std::int32_t>(k);
        continue;
      }
      const ServerState& best = st.servers[static_cast<std::size_t>(victim_server)];
      const JobState& best_job = pool_[static_cast<std::size_t>(best.job)];
      if (sv.start > best.start ||
          (sv.start == best.start && job.id > best_job.id)) {
        victim_server = static_cast<std::int32_t>(k);
      }
    }
    if (victim_server < 0) {
      throw std::logic_error("preempt_su: no SU in service");
    }
    ServerState& sv = st.servers[static_cast<std::size_t>(victim_server)];
    const std::int64_t v = sv.job;
    JobState& victim = pool_[static_cast<std::size_t>(v)];
    const double elapsed = now - sv.start;
    victim.served_here += elapsed;
    if (cfg_.discipline == Discipline::PR) {
      victim.remaining = std::max(0.0, victim.remaining - elapsed);
    } else {
      victim.remaining = victim.sampled;  // the whole demand is repeated
    }
    ++victim.preempts_here;
    if (victim.record >= 0) {
      StationVisit& visit =
          records_[static_cast<std::size_t>(victim.record)].visits.back();
      visit.segments.back().stop = now;
      ++visit.preemptions;
    }
    ++sv.generation;  // the victim's pending completion is now stale
    sv.job = -1;
    --st.busy[1];
    observe({now, ObsKind::BusyDelta, si, JobClass::SU, -1.0, 0.0});
    observe({now, ObsKind::Preemption, si, JobClass::SU, 1.0, 0.0});
    st.waiting[1].push_front(v);
    observe({now, ObsKind::WaitingDelta, si, JobClass::SU, +1.0, 0.0});
    start_service(si, victim_server, pu, now);
  }

  void handle_completion(const Event& e) {
    const double now = engine_.now();
    StationState& st = stations_[static_cast<std::size_t>(e.station)];
    ServerState& sv = st.servers[static_cast<std::size_t>(e.server)];
    if (sv.generation != e.generation) return;  // preempted in the meantime
    if (sv.job < 0) {
      throw std::logic_error("handle_completion: completion for an idle server");
    }
    const std::int64_t j = sv.job;
    JobState& job = pool_[static_cast<std::size_t>(j)];
    const JobClass cls = job.cls;
    const int c = static_cast<int>(cls);
    const double elapsed = now - sv.start;
    job.served_here += elapsed;
    job.remaining = 0.0;
    sv.job = -1;
    ++sv.generation;
    --st.busy[c];
    observe({now, ObsKind::BusyDelta, e.station, cls, -1.0, 0.0});

    double waited = (now - job.station_arrival) - job.served_here;
    if (waited < -1e-9) {
      throw std::logic_error("handle_completion: negative waiting time");
    }
    waited = std::max(0.0, waited);
    job.waiting_accum += waited;
    observe({now, ObsKind::StationCompletion, e.station, cls, waited, job.served_here});
    if (job.record >= 0) {
      StationVisit& visit = records_[static_cast<std::size_t>(job.record)].visits.back();
      visit.segments.back().stop = now;
      visit.served = job.served_here;
    }

    const std::int32_t next = e.station + 1;
    if (static_cast<std::size_t>(next) < stations_.size()) {
      enter_station(next, j, now);
    } else {
      ++conservation_.departures[c];
      observe({now, ObsKind::Departure, -1, cls, now - job.external_arrival,
               job.waiting_accum});
      destroy_job(j, JobOutcome::Departed, e.station, now);
    }

    // Hand the freed server to the next waiting job, PUs strictly first.
    for (int qc = 0; qc < 2; ++qc) {
      auto& q = st.waiting[qc];
      if (q.empty()) continue;
      const std::int64_t nj = q.front();
      q.pop_front();
      observe({now, ObsKind::WaitingDelta, e.station, static_cast<JobClass>(qc), -1.0, 0.0});
      start_service(e.station, e.server, nj, now);
      break;
    }
  }

  void check_invariants() const {
    for (std::size_t si = 0; si < stations_.size(); ++si) {
      const StationState& st = stations_[si];
      std::int32_t busy[2] = {0, 0};
      std::int32_t idle = 0;
      for (const ServerState& sv : st.servers) {
        if (sv.job < 0) {
          ++idle;
        } else {
          ++busy[static_cast<int>(pool_[static_cast<std::size_t>(sv.job)].cls)];
        }
      }
      if (busy[0] != st.busy[0] || busy[1] != st.busy[1]) {
        throw std::logic_error("invariant: busy counters out of sync");
      }
      if (idle > 0 && (!st.waiting[0].empty() || !st.waiting[1].empty())) {
        throw std::logic_error("invariant: idle server while jobs wait");
      }
      if (!st.waiting[0].empty() && busy[1] > 0) {
        throw std::logic_error("invariant: SU in service while a PU waits");
      }
      if (st.waiting[0].size() > st.p.capacity) {
        throw std::logic_error("invariant: PU waiting buffer over capacity");
      }
      if (st.waiting[1].size() > st.p.capacity + st.servers.size()) {
        throw std::logic_error("invariant: SU waiting buffer over capacity + servers");
      }
    }
  }

  ReplicationResult finalize() {
    conservation_.in_system_at_end[0] = alive_[0];
    conservation_.in_system_at_end[1] = alive_[1];
    if (!conservation_.balanced()) {
      std::string msg = "conservation violated:";
      for (int c = 0; c < 2; ++c) {
        msg += std::string(" ") + job_class_name(static_cast<JobClass>(c)) + " in=" +
               std::to_string(conservation_.external_arrivals[c]) + " out=" +
               std::to_string(conservation_.departures[c] + conservation_.buffer_losses[c] +
                              conservation_.entry_drops[c] +
                              conservation_.in_system_at_end[c]);
      }
      throw std::logic_error(msg);
    }
    ReplicationResult out;
    out.stats = acc_.finalize(cfg_.horizon);
    out.stats.config_hash = cfg_.hash();
    out.stats.replication = replication_;
    out.stats.conservation = conservation_;
    out.stats.stations.reserve(stations_.size());
    for (const StationState& st : stations_) {
      out.stats.stations.push_back({st.p.kind, st.p.servers});
    }
    if (cfg_.record_jobs) {
      for (JobRecord& r : records_) {
        if (r.outcome == JobOutcome::InSystem) r.finished = cfg_.horizon;
      }
      out.jobs = std::move(records_);
    }
    if (cfg_.record_observations) out.observations = std::move(log_);
    return out;
  }

  NetworkConfig cfg_;
  std::uint64_t replication_;
  Engine engine_;
  Accumulators acc_;
  Streams streams_;
  std::optional<GEParams> arrival_params_[2];
  std::vector<StationState> stations_;
  std::vector<JobState> pool_;
  std::vector<std::int64_t> free_;
  std::vector<JobRecord> records_;
  ObservationLog log_;
  Conservation conservation_;
  std::uint64_t next_id_[2] = {0, 0};
  std::int64_t alive_[2] = {0, 0};
};

}  // namespace

RunStats run_replication(const NetworkConfig& config, std::uint64_t replication) {
  config.validate();
  Network net(config, replication, nullptr);
  return net.run().stats;
}

ReplicationResult run_replication_full(const NetworkConfig& config,
                                       std::uint64_t replication, TraceSink* trace) {
  config.validate();
  Network net(config, replication, trace);
  return net.run();
}

}  // namespace crnsim
