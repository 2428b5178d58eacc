#include <algorithm>
#include <array>
#include <charconv>
#include <filesystem>
#include <tuple>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnsim/experiments.hpp"

namespace crnsim::experiments {

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
  if (ec != std::errc{}) throw std::runtime_error("format_number: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv(const std::vector<OutputRow>& rows) {
  std::string out =
      "scheme,discipline,security,c,N,pu_rate,su_rate,scv_arrival,scv_service,"
      "metric,class_scope,station_scope,mean,ci95_half_width,reps\n";
  for (const OutputRow& r : rows) {
    out += csv_field(r.scheme);
    out += ',';
    out += discipline_name(r.discipline);
    out += ',';
    out += r.security ? "ON" : "OFF";
    out += ',';
    out += std::to_string(r.servers);
    out += ',';
    out += std::to_string(r.capacity);
    out += ',';
    out += format_number(r.pu_rate);
    out += ',';
    out += format_number(r.su_rate);
    out += ',';
    out += format_number(r.scv_arrival);
    out += ',';
    out += format_number(r.scv_service);
    out += ',';
    out += csv_field(r.metric);
    out += ',';
    out += csv_field(r.class_scope);
    out += ',';
    out += csv_field(r.station_scope);
    out += ',';
    out += format_number(r.mean);
    out += ',';
    out += format_number(r.ci95_half_width);
    out += ',';
    out += std::to_string(r.reps);
    out += '\n';
  }
  return out;
}

namespace {

// The four curves the studies plot, all at network scope.
struct FigureMetric {
  const char* name;
  const char* class_scope;
  const char* station_scope;
};

constexpr FigureMetric kFigureMetrics[] = {
    {"mean_waiting_time", "total", "end_to_end"},
    {"mean_response_time", "total", "end_to_end"},
    {"mean_queue_length", "total", "total"},
    {"loss_probability", "total", "total"},
};

struct SeriesId {
  Discipline discipline;
  bool security;
  std::int32_t servers;
  double pu_rate;
  double scv_arrival;
  double scv_service;

  auto tie() const {
    return std::tuple(static_cast<int>(discipline), security, servers, pu_rate,
                      scv_arrival, scv_service);
  }
  bool operator==(const SeriesId& o) const { return tie() == o.tie(); }
  bool operator<(const SeriesId& o) const { return tie() < o.tie(); }
};

}  // namespace

std::map<std::string, std::string> to_plotdata(const std::vector<OutputRow>& rows) {
  // Preserve first-seen order of schemes and series.
  std::vector<std::string> schemes;
  for (const OutputRow& r : rows) {
    if (std::find(schemes.begin(), schemes.end(), r.scheme) == schemes.end()) {
      schemes.push_back(r.scheme);
    }
  }

  std::map<std::string, std::string> files;
  for (const std::string& scheme : schemes) {
    std::vector<SeriesId> series;
    std::set<double> su_values;
    for (const OutputRow& r : rows) {
      if (r.scheme != scheme) continue;
      const SeriesId id{r.discipline, r.security, r.servers,
                        r.pu_rate,    r.scv_arrival, r.scv_service};
      if (std::find(series.begin(), series.end(), id) == series.end()) {
        series.push_back(id);
      }
      su_values.insert(r.su_rate);
    }

    // Label only the dimensions that actually vary between series.
    bool vary_disc = false, vary_sec = false, vary_srv = false, vary_pu = false,
         vary_scv = false;
    for (const SeriesId& s : series) {
      vary_disc |= s.discipline != series.front().discipline;
      vary_sec |= s.security != series.front().security;
      vary_srv |= s.servers != series.front().servers;
      vary_pu |= s.pu_rate != series.front().pu_rate;
      vary_scv |= s.scv_arrival != series.front().scv_arrival ||
                  s.scv_service != series.front().scv_service;
    }
    const auto label = [&](const SeriesId& s) {
      std::string out;
      const auto append = [&out](const std::string& part) {
        if (!out.empty()) out += '-';
        out += part;
      };
      if (vary_disc) append(discipline_name(s.discipline));
      if (vary_sec) append(s.security ? "secON" : "secOFF");
      if (vary_srv) append("c" + std::to_string(s.servers));
      if (vary_pu) append("PU" + format_number(s.pu_rate));
      if (vary_scv) {
        if (s.scv_arrival == s.scv_service) {
          append("SCV" + format_number(s.scv_service));
        } else {
          append("SCVa" + format_number(s.scv_arrival) + "s" +
                 format_number(s.scv_service));
        }
      }
      if (out.empty()) out = "all";
      return out;
    };

    for (const FigureMetric& fm : kFigureMetrics) {
      std::map<std::pair<std::size_t, double>, double> cell;  // (series, su) -> mean
      bool any = false;
      for (const OutputRow& r : rows) {
        if (r.scheme != scheme || r.metric != fm.name ||
            r.class_scope != fm.class_scope || r.station_scope != fm.station_scope) {
          continue;
        }
        const SeriesId id{r.discipline, r.security, r.servers,
                          r.pu_rate,    r.scv_arrival, r.scv_service};
        const auto it = std::find(series.begin(), series.end(), id);
        const std::size_t si = static_cast<std::size_t>(it - series.begin());
        cell[{si, r.su_rate}] = r.mean;
        any = true;
      }
      if (!any) continue;
      std::string body = "# scheme " + scheme + " metric " + fm.name + " (" +
                         fm.class_scope + ", " + fm.station_scope + ")\n# su_rate";
      for (const SeriesId& s : series) body += " " + label(s);
      body += '\n';
      for (double su : su_values) {
        body += format_number(su);
        for (std::size_t si = 0; si < series.size(); ++si) {
          const auto it = cell.find({si, su});
          body += ' ';
          body += it == cell.end() ? "nan" : format_number(it->second);
        }
        body += '\n';
      }
      files["scheme_" + scheme + "_" + std::string(fm.name) + ".dat"] = std::move(body);
    }
  }
  return files;
}

std::vector<std::string> emit(const std::vector<OutputRow>& rows,
                              const std::string& format, const std::string& out_dir) {
  if (format != "csv" && format != "plotdata" && format != "both") {
    throw std::invalid_argument("emit: format must be csv, plotdata or both");
  }
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw std::runtime_error("emit: cannot create directory '" + out_dir +
                             "': " + ec.message());
  }
  const auto write_file = [&](const std::string& name, const std::string& content) {
    const fs::path p = fs::path(out_dir) / name;
    std::ofstream out(p, std::ios::binary);
    out << content;
    out.flush();
    if (!out) {
      throw std::runtime_error("emit: cannot write '" + p.string() + "'");
    }
    return p.string();
  };
  std::vector<std::string> written;
  if (format == "csv" || format == "both") {
    written.push_back(write_file("results.csv", to_csv(rows)));
  }
  if (format == "plotdata" || format == "both") {
    for (const auto& [name, content] : to_plotdata(rows)) {
      written.push_back(write_file(name, content));
    }
  }
  return written;
}

}  // namespace crnsim::experiments
