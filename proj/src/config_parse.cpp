#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "crnsim/experiments.hpp"

namespace crnsim::experiments {

namespace {

struct Setting {
  int line;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || t.empty()) {
    fail(origin, line, "key '" + key + "': malformed number '" + t + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& origin, int line, const std::string& key,
                         const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || t.empty()) {
    fail(origin, line, "key '" + key + "': malformed non-negative integer '" + t + "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur, ',')) parts.push_back(trim(cur));
  if (parts.empty()) parts.push_back(trim(text));
  return parts;
}

// Accepts "1,2,3" and the shorthand "1-6" for consecutive integer rates.
std::vector<double> parse_rate_list(const std::string& origin, int line,
                                    const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const auto dash = t.find('-');
  if (dash != std::string::npos && t.find(',') == std::string::npos && dash > 0) {
    const auto lo = static_cast<long long>(
        parse_uint(origin, line, key, t.substr(0, dash)));
    const auto hi = static_cast<long long>(
        parse_uint(origin, line, key, t.substr(dash + 1)));
    if (hi < lo) fail(origin, line, "key '" + key + "': empty range '" + t + "'");
    std::vector<double> out;
    for (long long v = lo; v <= hi; ++v) out.push_back(static_cast<double>(v));
    return out;
  }
  std::vector<double> out;
  for (const std::string& part : split_list(t)) {
    out.push_back(parse_double(origin, line, key, part));
  }
  return out;
}

std::string upper(std::string s) {
  for (char& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

const char* const kKnownKeys[] = {
    "scheme",       "discipline", "security",   "servers",
    "capacity",     "pu_rate",    "su_rates",   "scv_arrival",
    "scv_service",  "mu",         "reps",       "horizon",
    "warmup",       "seed",       "p_malicious", "p_admission_reject",
};

bool known_key(const std::string& k) {
  for (const char* known : kKnownKeys) {
    if (k == known) return true;
  }
  return false;
}

}  // namespace

SchemeConfig parse_config(std::istream& in, const std::string& origin) {
  std::map<std::string, Setting> settings;  // last occurrence wins
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail(origin, line_no, "expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(origin, line_no, "missing key before '='");
    if (!known_key(key)) fail(origin, line_no, "unknown key '" + key + "'");
    if (value.empty()) fail(origin, line_no, "key '" + key + "': empty value");
    settings[key] = Setting{line_no, value};
  }
  if (settings.empty()) {
    throw std::runtime_error(origin + ": no scenario settings found");
  }

  SchemeConfig cfg;
  bool scheme_selected = false;
  if (const auto it = settings.find("scheme"); it != settings.end()) {
    const std::string id = upper(it->second.value);
    try {
      cfg = builtin_scheme(id);
    } catch (const std::exception& e) {
      fail(origin, it->second.line, e.what());
    }
    scheme_selected = true;  // the built-in grid wins over explicit grid keys
  }

  std::vector<double> scv_arrival, scv_service;
  for (const auto& [key, setting] : settings) {
    const int ln = setting.line;
    const std::string& value = setting.value;
    if (key == "scheme") continue;
    const bool grid_key = key == "discipline" || key == "security" || key == "servers" ||
                          key == "pu_rate" || key == "su_rates" ||
                          key == "scv_arrival" || key == "scv_service";
    if (scheme_selected && grid_key) continue;

    if (key == "discipline") {
      cfg.disciplines.clear();
      for (const std::string& part : split_list(value)) {
        const std::string d = upper(part);
        if (d == "PR") {
          cfg.disciplines.push_back(Discipline::PR);
        } else if (d == "PRI") {
          cfg.disciplines.push_back(Discipline::PRI);
        } else {
          fail(origin, ln, "key 'discipline': expected PR or PRI, got '" + part + "'");
        }
      }
    } else if (key == "security") {
      cfg.security.clear();
      for (const std::string& part : split_list(value)) {
        const std::string s = upper(part);
        if (s == "ON" || s == "1") {
          cfg.security.push_back(1);
        } else if (s == "OFF" || s == "0") {
          cfg.security.push_back(0);
        } else {
          fail(origin, ln, "key 'security': expected ON or OFF, got '" + part + "'");
        }
      }
    } else if (key == "servers") {
      cfg.servers.clear();
      for (const std::string& part : split_list(value)) {
        cfg.servers.push_back(static_cast<std::int32_t>(parse_uint(origin, ln, key, part)));
      }
    } else if (key == "capacity") {
      cfg.capacity = parse_uint(origin, ln, key, value);
    } else if (key == "pu_rate") {
      cfg.pu_rates = parse_rate_list(origin, ln, key, value);
    } else if (key == "su_rates") {
      cfg.su_rates = parse_rate_list(origin, ln, key, value);
    } else if (key == "scv_arrival" || key == "scv_service") {
      std::vector<double> vals = parse_rate_list(origin, ln, key, value);
      for (double v : vals) {
        if (v < 1.0) {
          fail(origin, ln, "key '" + key + "': scv must be >= 1, got " +
                               format_number(v));
        }
      }
      (key == "scv_arrival" ? scv_arrival : scv_service) = std::move(vals);
    } else if (key == "mu") {
      cfg.mu = parse_double(origin, ln, key, value);
      if (cfg.mu <= 0.0) fail(origin, ln, "key 'mu': must be > 0");
    } else if (key == "reps") {
      cfg.reps = static_cast<int>(parse_uint(origin, ln, key, value));
      if (cfg.reps < 2) fail(origin, ln, "key 'reps': need at least 2 replications");
    } else if (key == "horizon") {
      cfg.horizon = parse_double(origin, ln, key, value);
      if (cfg.horizon <= 0.0) fail(origin, ln, "key 'horizon': must be > 0");
    } else if (key == "warmup") {
      cfg.warmup_fraction = parse_double(origin, ln, key, value);
      if (cfg.warmup_fraction < 0.0 || cfg.warmup_fraction >= 1.0) {
        fail(origin, ln, "key 'warmup': fraction must lie in [0, 1)");
      }
    } else if (key == "seed") {
      cfg.base_seed = parse_uint(origin, ln, key, value);
    } else if (key == "p_malicious") {
      cfg.p_malicious = parse_double(origin, ln, key, value);
      if (cfg.p_malicious < 0.0 || cfg.p_malicious > 1.0) {
        fail(origin, ln, "key 'p_malicious': must lie in [0, 1]");
      }
    } else if (key == "p_admission_reject") {
      cfg.p_admission_reject = parse_double(origin, ln, key, value);
      if (cfg.p_admission_reject < 0.0 || cfg.p_admission_reject > 1.0) {
        fail(origin, ln, "key 'p_admission_reject': must lie in [0, 1]");
      }
    }
  }

  if (!scheme_selected && (!scv_arrival.empty() || !scv_service.empty())) {
    if (scv_arrival.empty()) scv_arrival.push_back(1.0);
    if (scv_service.empty()) scv_service.push_back(1.0);
    cfg.scv_pairs.clear();
    for (double a : scv_arrival) {
      for (double s : scv_service) cfg.scv_pairs.emplace_back(a, s);
    }
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return cfg;
}

SchemeConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open scenario file '" + path + "'");
  }
  return parse_config(in, path);
}

}  // namespace crnsim::experiments
