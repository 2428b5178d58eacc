#include "crnsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace crnsim {

const char* job_class_name(JobClass c) noexcept {
  return c == JobClass::PU ? "PU" : "SU";
}

const char* station_kind_name(StationKind k) noexcept {
  switch (k) {
    case StationKind::SEC: return "SEC";
    case StationKind::AC: return "AC";
    case StationKind::CH: return "CH";
  }
  return "?";
}

bool Conservation::balanced() const noexcept {
  for (int c = 0; c < 2; ++c) {
    const std::uint64_t out = departures[c] + buffer_losses[c] + entry_drops[c] +
                              in_system_at_end[c];
    if (external_arrivals[c] != out) return false;
  }
  return true;
}

const StationClassStats& RunStats::at(std::size_t station, JobClass c) const {
  return per_station_class.at(station * 2 + static_cast<std::size_t>(c));
}

// ---------------------------------------------------------------------------
// Accumulators

Accumulators::Accumulators(std::size_t n_stations, double warmup)
    : n_stations_(n_stations),
      warmup_(warmup),
      sc_(n_stations * 2),
      waiting_(n_stations * 2),
      busy_(n_stations * 2) {
  if (warmup < 0.0 || !std::isfinite(warmup)) {
    throw std::invalid_argument("Accumulators: warmup must be finite and >= 0");
  }
}

void Accumulators::advance(LevelTrack& t, double now) {
  const double from = std::max(t.last, warmup_);
  if (now > from && t.count != 0) {
    t.area += static_cast<double>(t.count) * (now - from);
  }
  t.last = now;
}

void Accumulators::apply(const Observation& o) {
  const bool in_window = o.time >= warmup_;
  const int c = static_cast<int>(o.job_class);
  switch (o.kind) {
    case ObsKind::ExternalArrival:
      if (in_window) ++e2e_[c].external_arrivals;
      return;
    case ObsKind::Departure:
      if (in_window) {
        ++e2e_[c].departures;
        e2e_[c].response_sum += o.a;
        e2e_[c].waiting_sum += o.b;
      }
      return;
    default:
      break;
  }
  if (o.station < 0 || static_cast<std::size_t>(o.station) >= n_stations_) {
    throw std::logic_error("Accumulators::apply: bad station index");
  }
  const std::size_t i = static_cast<std::size_t>(o.station) * 2 + c;
  StationClassStats& s = sc_[i];
  switch (o.kind) {
    case ObsKind::Offered:
      if (in_window) ++s.offered;
      break;
    case ObsKind::EntryDrop:
      if (in_window) ++s.entry_drops;
      break;
    case ObsKind::BufferLoss:
      if (in_window) ++s.buffer_losses;
      break;
    case ObsKind::WaitingDelta: {
      LevelTrack& t = waiting_[i];
      advance(t, o.time);
      t.count += static_cast<std::int64_t>(o.a);
      if (t.count < 0) throw std::logic_error("Accumulators: negative waiting count");
      break;
    }
    case ObsKind::BusyDelta: {
      LevelTrack& t = busy_[i];
      advance(t, o.time);
      t.count += static_cast<std::int64_t>(o.a);
      if (t.count < 0) throw std::logic_error("Accumulators: negative busy count");
      break;
    }
    case ObsKind::StationCompletion:
      if (in_window) {
        ++s.completions;
        s.waiting_time_sum += o.a;
        s.server_time_sum += o.b;
      }
      break;
    case ObsKind::Preemption:
      if (in_window) ++s.preemptions;
      break;
    default:
      throw std::logic_error("Accumulators::apply: unhandled observation kind");
  }
}

RunStats Accumulators::finalize(double horizon) {
  if (!(horizon > warmup_)) {
    throw std::invalid_argument("Accumulators::finalize: horizon must exceed warmup");
  }
  for (std::size_t i = 0; i < sc_.size(); ++i) {
    advance(waiting_[i], horizon);
    advance(busy_[i], horizon);
    sc_[i].waiting_area = waiting_[i].area;
    sc_[i].busy_area = busy_[i].area;
  }
  RunStats out;
  out.warmup = warmup_;
  out.horizon = horizon;
  out.per_station_class = sc_;
  out.end_to_end[0] = e2e_[0];
  out.end_to_end[1] = e2e_[1];
  return out;
}

// ---------------------------------------------------------------------------
// Derived metrics

namespace {

const char* kClassScope[3] = {"PU", "SU", "total"};

struct ScopeSums {
  std::uint64_t offered = 0, entry_drops = 0, buffer_losses = 0;
  std::uint64_t completions = 0, preemptions = 0;
  double waiting_time_sum = 0, server_time_sum = 0, waiting_area = 0, busy_area = 0;

  void add(const StationClassStats& s) {
    offered += s.offered;
    entry_drops += s.entry_drops;
    buffer_losses += s.buffer_losses;
    completions += s.completions;
    preemptions += s.preemptions;
    waiting_time_sum += s.waiting_time_sum;
    server_time_sum += s.server_time_sum;
    waiting_area += s.waiting_area;
    busy_area += s.busy_area;
  }
};

}  // namespace

MetricMap metric_map(const RunStats& run) {
  const double T = run.window();
  if (!(T > 0.0)) {
    throw std::invalid_argument("metric_map: empty measurement window");
  }
  if (run.per_station_class.size() != run.stations.size() * 2) {
    throw std::invalid_argument("metric_map: stats/layout size mismatch");
  }
  MetricMap m;
  const auto put = [&m](const char* name, const std::string& cls,
                        const std::string& st, double v) {
    m[MetricKey{name, cls, st}] = v;
  };

  // Per-station scopes, classes PU / SU / total.
  for (std::size_t s = 0; s < run.stations.size(); ++s) {
    const std::string st = station_kind_name(run.stations[s].kind);
    const double servers = run.stations[s].servers;
    for (int ci = 0; ci < 3; ++ci) {
      ScopeSums v;
      if (ci < 2) {
        v.add(run.per_station_class[s * 2 + ci]);
      } else {
        v.add(run.per_station_class[s * 2]);
        v.add(run.per_station_class[s * 2 + 1]);
      }
      const std::string cls = kClassScope[ci];
      if (v.completions > 0) {
        put("mean_waiting_time", cls, st, v.waiting_time_sum / v.completions);
        put("mean_response_time", cls, st,
            (v.waiting_time_sum + v.server_time_sum) / v.completions);
      }
      put("mean_queue_length", cls, st, v.waiting_area / T);
      put("utilization", cls, st, v.busy_area / (servers * T));
      if (v.offered > 0) {
        put("loss_probability", cls, st,
            static_cast<double>(v.buffer_losses) / static_cast<double>(v.offered));
      }
      if (ci != 0) {  // PUs are never preempted
        put("preemptions", cls, st, static_cast<double>(v.preemptions));
      }
      if (run.stations[s].kind == StationKind::SEC) {
        put("security_drops", cls, st, static_cast<double>(v.entry_drops));
      } else if (run.stations[s].kind == StationKind::AC) {
        put("admission_drops", cls, st, static_cast<double>(v.entry_drops));
      }
    }
  }

  // Station scope "total": network-wide aggregates.
  double total_servers = 0;
  for (const auto& st : run.stations) total_servers += st.servers;
  for (int ci = 0; ci < 3; ++ci) {
    ScopeSums v;
    for (std::size_t s = 0; s < run.stations.size(); ++s) {
      if (ci < 2) {
        v.add(run.per_station_class[s * 2 + ci]);
      } else {
        v.add(run.per_station_class[s * 2]);
        v.add(run.per_station_class[s * 2 + 1]);
      }
    }
    const std::string cls = kClassScope[ci];
    put("mean_queue_length", cls, "total", v.waiting_area / T);
    put("utilization", cls, "total", v.busy_area / (total_servers * T));
    std::uint64_t ext = 0;
    if (ci == 0 || ci == 2) ext += run.end_to_end[0].external_arrivals;
    if (ci == 1 || ci == 2) ext += run.end_to_end[1].external_arrivals;
    if (ext > 0) {
      // Network loss: fraction of externally arriving packets of this scope
      // that were eventually rejected at some waiting buffer.
      put("loss_probability", cls, "total",
          static_cast<double>(v.buffer_losses) / static_cast<double>(ext));
    }
    if (ci != 0) put("preemptions", cls, "total", static_cast<double>(v.preemptions));
  }

  // End-to-end scope.
  for (int ci = 0; ci < 3; ++ci) {
    ClassEndToEnd v;
    if (ci == 0 || ci == 2) {
      v.external_arrivals += run.end_to_end[0].external_arrivals;
      v.departures += run.end_to_end[0].departures;
      v.response_sum += run.end_to_end[0].response_sum;
      v.waiting_sum += run.end_to_end[0].waiting_sum;
    }
    if (ci == 1 || ci == 2) {
      v.external_arrivals += run.end_to_end[1].external_arrivals;
      v.departures += run.end_to_end[1].departures;
      v.response_sum += run.end_to_end[1].response_sum;
      v.waiting_sum += run.end_to_end[1].waiting_sum;
    }
    const std::string cls = kClassScope[ci];
    put("external_arrivals", cls, "end_to_end", static_cast<double>(v.external_arrivals));
    put("departures", cls, "end_to_end", static_cast<double>(v.departures));
    if (v.departures > 0) {
      put("mean_response_time", cls, "end_to_end", v.response_sum / v.departures);
      put("mean_waiting_time", cls, "end_to_end", v.waiting_sum / v.departures);
    }
  }
  return m;
}

double littles_residual(const RunStats& run, std::size_t station, JobClass c) {
  const StationClassStats& s = run.at(station, c);
  if (s.completions == 0) return -1.0;
  const double T = run.window();
  const double accepted =
      static_cast<double>(s.offered - s.entry_drops - s.buffer_losses);
  const double lambda_eff = accepted / T;
  const double wq = s.waiting_time_sum / static_cast<double>(s.completions);
  const double lq = s.waiting_area / T;
  return std::abs(lq - lambda_eff * wq) / std::max(lq, 1e-12);
}

// ---------------------------------------------------------------------------
// Student-t confidence intervals

namespace {

// Continued fraction for the regularized incomplete beta function.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-16;
  constexpr double kFpMin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kFpMin) d = kFpMin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kFpMin) d = kFpMin;
    c = 1.0 + aa / c;
    if (std::abs(c) < kFpMin) c = kFpMin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double reg_inc_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

// P(T <= t) for Student's t with dof degrees of freedom, t >= 0.
double student_t_cdf(double t, double dof) {
  const double x = dof / (dof + t * t);
  return 1.0 - 0.5 * reg_inc_beta(dof / 2.0, 0.5, x);
}

}  // namespace

double student_t_975(std::uint32_t dof) {
  if (dof == 0) {
    throw std::invalid_argument("student_t_975: dof must be >= 1");
  }
  double lo = 0.0, hi = 1024.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (student_t_cdf(mid, static_cast<double>(dof)) < 0.975) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-12) break;
  }
  return 0.5 * (lo + hi);
}

AggregateEntry aggregate_values(const std::vector<double>& values) {
  if (values.size() < 2) {
    throw std::invalid_argument("aggregate_values: need at least two replications");
  }
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = ss / static_cast<double>(n - 1);
  const double sd = std::sqrt(var);
  AggregateEntry e;
  e.mean = mean;
  e.stddev = sd;
  e.ci95_half_width =
      student_t_975(static_cast<std::uint32_t>(n - 1)) * sd / std::sqrt(static_cast<double>(n));
  e.reps = static_cast<std::uint32_t>(n);
  return e;
}

AggregateStats aggregate(const std::vector<RunStats>& runs) {
  if (runs.size() < 2) {
    throw std::invalid_argument("aggregate: need at least two replications");
  }
  for (const RunStats& r : runs) {
    if (r.config_hash != runs.front().config_hash ||
        r.stations != runs.front().stations) {
      throw std::invalid_argument(
          "aggregate: replications come from different configurations");
    }
  }
  std::map<MetricKey, std::vector<double>> samples;
  for (const RunStats& r : runs) {
    for (const auto& [key, value] : metric_map(r)) {
      samples[key].push_back(value);
    }
  }
  AggregateStats out;
  out.reps = static_cast<std::uint32_t>(runs.size());
  for (const auto& [key, values] : samples) {
    if (values.size() < 2) continue;  // metric defined in fewer than two runs
    out.metrics[key] = aggregate_values(values);
  }
  return out;
}

}  // namespace crnsim
