#include "crnsim/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "crnsim/rng.hpp"

namespace crnsim::experiments {

void SchemeConfig::validate() const {
  const auto bad = [this](const std::string& msg) {
    throw std::invalid_argument("scheme '" + scheme_id + "': " + msg);
  };
  if (scheme_id.empty()) bad("empty scheme id");
  if (disciplines.empty()) bad("no disciplines");
  if (security.empty()) bad("no security settings");
  if (servers.empty()) bad("no server counts");
  if (pu_rates.empty()) bad("no PU rates");
  if (su_rates.empty()) bad("no SU rates");
  if (scv_pairs.empty()) bad("no scv settings");
  for (int s : security) {
    if (s != 0 && s != 1) bad("security flags must be 0 or 1");
  }
  for (std::int32_t c : servers) {
    if (c < 1) bad("server counts must be >= 1");
  }
  for (double r : pu_rates) {
    if (!std::isfinite(r) || r < 0.0) bad("PU rates must be >= 0");
  }
  for (double r : su_rates) {
    if (!std::isfinite(r) || r < 0.0) bad("SU rates must be >= 0");
  }
  for (const auto& [a, s] : scv_pairs) {
    if (!std::isfinite(a) || a < 1.0 || !std::isfinite(s) || s < 1.0) {
      bad("scv values must be >= 1");
    }
  }
  if (!std::isfinite(mu) || mu <= 0.0) bad("mu must be > 0");
  if (reps < 2) bad("reps must be >= 2");
  if (!std::isfinite(horizon) || horizon <= 0.0) bad("horizon must be > 0");
  if (!std::isfinite(warmup_fraction) || warmup_fraction < 0.0 || warmup_fraction >= 1.0) {
    bad("warmup fraction must lie in [0, 1)");
  }
  if (p_malicious < 0.0 || p_malicious > 1.0) bad("p_malicious must be in [0,1]");
  if (p_admission_reject < 0.0 || p_admission_reject > 1.0) {
    bad("p_admission_reject must be in [0,1]");
  }
}

SchemeConfig builtin_scheme(const std::string& id) {
  SchemeConfig cfg;
  cfg.scheme_id = id;
  if (id == "A") {
    cfg.disciplines = {Discipline::PR, Discipline::PRI};
    cfg.security = {0, 1};
    cfg.servers = {1};
    cfg.pu_rates = {3.0};
    cfg.scv_pairs = {{1.0, 1.0}};
  } else if (id == "B") {
    cfg.disciplines = {Discipline::PR};
    cfg.security = {0, 1};
    cfg.servers = {1};
    cfg.pu_rates = {1.0, 3.0, 5.0};
    cfg.scv_pairs = {{1.0, 1.0}};
  } else if (id == "C") {
    cfg.disciplines = {Discipline::PR};
    cfg.security = {0, 1};
    cfg.servers = {1};
    cfg.pu_rates = {3.0};
    cfg.scv_pairs = {{4.0, 4.0}, {8.0, 8.0}, {10.0, 10.0}};
  } else if (id == "D") {
    cfg.disciplines = {Discipline::PR};
    cfg.security = {0, 1};
    cfg.servers = {1, 3};
    cfg.pu_rates = {3.0};
    cfg.scv_pairs = {{1.0, 1.0}};
  } else {
    throw std::invalid_argument("builtin_scheme: unknown scheme '" + id +
                                "', expected A, B, C or D");
  }
  return cfg;
}

std::vector<GridPoint> enumerate_grid(const SchemeConfig& cfg) {
  cfg.validate();
  std::vector<GridPoint> grid;
  for (Discipline d : cfg.disciplines) {
    for (int sec : cfg.security) {
      for (std::int32_t c : cfg.servers) {
        for (double pu : cfg.pu_rates) {
          for (const auto& [scv_a, scv_s] : cfg.scv_pairs) {
            for (double su : cfg.su_rates) {
              GridPoint p;
              p.discipline = d;
              p.security = sec != 0;
              p.servers = c;
              p.pu_rate = pu;
              p.su_rate = su;
              p.scv_arrival = scv_a;
              p.scv_service = scv_s;
              grid.push_back(p);
            }
          }
        }
      }
    }
  }
  return grid;
}

namespace {
std::uint64_t hash_double_bits(std::uint64_t h, double v) {
  if (v == 0.0) v = 0.0;  // collapse -0.0
  return hash_combine(h, std::bit_cast<std::uint64_t>(v));
}
}  // namespace

std::uint64_t grid_point_key(const SchemeConfig& cfg, const GridPoint& p) {
  std::uint64_t h = 0x475249444B455931ull;
  h = hash_combine(h, static_cast<std::uint64_t>(p.discipline));
  h = hash_combine(h, p.security ? 1u : 0u);
  h = hash_combine(h, static_cast<std::uint64_t>(p.servers));
  h = hash_double_bits(h, p.pu_rate);
  h = hash_double_bits(h, p.su_rate);
  h = hash_double_bits(h, p.scv_arrival);
  h = hash_double_bits(h, p.scv_service);
  h = hash_combine(h, cfg.capacity);
  h = hash_double_bits(h, cfg.mu);
  h = hash_double_bits(h, cfg.p_malicious);
  h = hash_double_bits(h, cfg.p_admission_reject);
  return h;
}

NetworkConfig to_network_config(const SchemeConfig& cfg, const GridPoint& p) {
  NetworkConfig net;
  net.discipline = p.discipline;
  net.pu_arrival = {p.pu_rate, p.scv_arrival};
  net.su_arrival = {p.su_rate, p.scv_arrival};
  net.stations = standard_stations(p.security, p.servers, cfg.capacity,
                                   GEParams(cfg.mu, p.scv_service));
  net.p_malicious = cfg.p_malicious;
  net.p_admission_reject = cfg.p_admission_reject;
  net.horizon = cfg.horizon;
  net.warmup = cfg.warmup_fraction * cfg.horizon;
  net.seed = hash_combine(mix64(cfg.base_seed + 0x9E3779B97F4A7C15ull),
                          grid_point_key(cfg, p));
  return net;
}

namespace {

std::string describe_point(const SchemeConfig& cfg, const GridPoint& p) {
  std::ostringstream os;
  os << "scheme " << cfg.scheme_id << " point [discipline=" << discipline_name(p.discipline)
     << " security=" << (p.security ? "ON" : "OFF") << " c=" << p.servers
     << " pu_rate=" << p.pu_rate << " su_rate=" << p.su_rate
     << " scv=(" << p.scv_arrival << "," << p.scv_service << ")]";
  return os.str();
}

}  // namespace

std::vector<OutputRow> run_scheme(const SchemeConfig& cfg, const RunOptions& opt) {
  cfg.validate();
  const std::vector<GridPoint> grid = enumerate_grid(cfg);
  const std::size_t reps = static_cast<std::size_t>(cfg.reps);

  std::vector<NetworkConfig> nets;
  nets.reserve(grid.size());
  for (const GridPoint& p : grid) nets.push_back(to_network_config(cfg, p));

  std::vector<std::vector<RunStats>> results(grid.size());
  for (auto& v : results) v.resize(reps);
  std::vector<std::string> errors(grid.size());
  std::mutex err_mutex;

  const std::size_t tasks = grid.size() * reps;
  const int workers = std::max(1, std::min<int>(opt.parallel, static_cast<int>(tasks)));
  std::atomic<std::size_t> cursor{0};
  const auto work = [&]() {
    for (;;) {
      const std::size_t t = cursor.fetch_add(1);
      if (t >= tasks) return;
      const std::size_t g = t / reps;
      const std::size_t r = t % reps;
      try {
        results[g][r] = run_replication(nets[g], r);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (errors[g].empty()) {
          errors[g] = describe_point(cfg, grid[g]) + " failed: " + e.what();
        }
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (std::thread& th : pool) th.join();
  }

  std::vector<OutputRow> rows;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!errors[g].empty()) {
      if (opt.errors) {
        opt.errors->push_back(errors[g]);
        continue;
      }
      throw std::runtime_error(errors[g]);
    }
    const AggregateStats agg = aggregate(results[g]);
    const GridPoint& p = grid[g];
    for (const auto& [key, entry] : agg.metrics) {
      OutputRow row;
      row.scheme = cfg.scheme_id;
      row.discipline = p.discipline;
      row.security = p.security;
      row.servers = p.servers;
      row.capacity = cfg.capacity;
      row.pu_rate = p.pu_rate;
      row.su_rate = p.su_rate;
      row.scv_arrival = p.scv_arrival;
      row.scv_service = p.scv_service;
      row.metric = key.name;
      row.class_scope = key.class_scope;
      row.station_scope = key.station_scope;
      row.mean = entry.mean;
      row.ci95_half_width = entry.ci95_half_width;
      row.reps = entry.reps;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace crnsim::experiments
