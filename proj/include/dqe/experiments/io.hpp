#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dqe/experiments/rwa_validation.hpp"
#include "dqe/experiments/sweep.hpp"
#include "dqe/experiments/zero_field_scan.hpp"

namespace dqe {

inline constexpr const char* kVersion = "0.1.0";

// Shortest round-trip representation; identical input gives identical text.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw IoError("format_double: conversion failed");
  return std::string(buf, end);
}

struct Metadata {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
  void add(const std::string& key, const char* value) { entries.emplace_back(key, value); }
  void add(const std::string& key, double value) { entries.emplace_back(key, format_double(value)); }
  void add(const std::string& key, int value) { entries.emplace_back(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { entries.emplace_back(key, value ? "true" : "false"); }

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
};

inline void add_params(Metadata& m, const ModelParams& p) {
  const DipoleCoeffs a = dipole_coeffs(p);
  m.add("omega_rabi", p.omega_rabi);
  m.add("delta", p.delta);
  m.add("mu_b", p.mu_b);
  m.add("dip_prefactor", p.dip_prefactor);
  m.add("theta", p.theta);
  m.add("omega_carrier", p.omega_carrier);
  m.add("explicit_couplings", p.couplings.has_value());
  m.add("axx", a.axx);
  m.add("ayy", a.ayy);
  m.add("azz", a.azz);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> r) {
    if (r.size() != columns.size()) throw IoError("Table: row width does not match the header");
    rows.push_back(std::move(r));
  }
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

// '#'-prefixed "key = value" metadata lines, then a header and CRLF-free rows.
inline void write_csv(std::ostream& os, const Metadata& meta, const Table& t) {
  for (const auto& [k, v] : meta.entries) os << "# " << k << " = " << v << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << csv_field(t.columns[i]);
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << '\n';
  }
}

struct CsvDocument {
  Metadata meta;
  Table table;
};

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline CsvDocument read_csv(std::istream& is) {
  CsvDocument d;
  std::string line;
  bool header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!header && line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) throw IoError("read_csv: malformed metadata line: " + line);
      d.meta.add(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    if (!header) {
      d.table.columns = split_csv_line(line);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    d.table.add_row(split_csv_line(line));
  }
  if (!header) throw IoError("read_csv: missing header row");
  return d;
}


// Numeric cells become numbers, nan/inf become null, anything else stays a string.
inline nlohmann::ordered_json json_cell(const std::string& s) {
  if (s == "nan" || s == "inf" || s == "-inf") return nullptr;
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (!s.empty() && ec == std::errc{} && end == s.data() + s.size()) return v;
  return s;
}

inline nlohmann::ordered_json meta_json(const Metadata& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.entries) j[k] = json_cell(v);
  return j;
}

inline nlohmann::ordered_json table_json(const Table& t) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    nlohmann::ordered_json col = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) col.push_back(json_cell(r[c]));
    j[t.columns[c]] = col;
  }
  return j;
}

inline void write_json(std::ostream& os, const Metadata& meta, const nlohmann::ordered_json& data) {
  nlohmann::ordered_json j;
  j["meta"] = meta_json(meta);
  j["data"] = data;
  os << j.dump(2) << '\n';
}

// ---- tables for each artifact ----

inline Table trajectory_table(const Trajectory& tr) {
  Table t;
  t.columns.push_back("t");
  for (const auto& l : tr.labels) t.columns.push_back("pop_" + l);
  t.columns.push_back("doe");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::vector<std::string> r{format_double(tr.times[i])};
    for (const auto& s : tr.populations) r.push_back(format_double(s[i]));
    r.push_back(format_double(tr.doe[i]));
    t.add_row(std::move(r));
  }
  return t;
}

inline Table sweep_grid_table(const SweepResult& s) {
  Table t;
  t.columns = {"theta_index", "theta", "time_index", "t", "population"};
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& p = s.points[i];
    for (std::size_t k = 0; k < p.times.size(); ++k)
      t.add_row({std::to_string(i), format_double(p.theta), std::to_string(k), format_double(p.times[k]),
                 format_double(p.population[k])});
  }
  return t;
}

inline Table sweep_max_table(const SweepResult& s) {
  Table t;
  t.columns = {"theta", "theta_over_pi", "axx", "ayy", "azz", "delta", "delta_over_azz", "delta_polynomial",
               "t_max", "t_peak", "p_peak", "t_rise", "degenerate_azz", "degenerate_axx", "error"};
  for (const auto& p : s.points) {
    const double ratio = p.coeffs.azz != 0.0 ? p.delta / p.coeffs.azz : std::numeric_limits<double>::quiet_NaN();
    t.add_row({format_double(p.theta), format_double(p.theta / std::numbers::pi), format_double(p.coeffs.axx),
               format_double(p.coeffs.ayy), format_double(p.coeffs.azz), format_double(p.delta), format_double(ratio),
               format_double(p.delta_polynomial), format_double(p.t_max), format_double(p.t_peak),
               format_double(p.p_peak), format_double(p.t_rise), p.degenerate_azz ? "1" : "0", p.degenerate_axx ? "1" : "0", p.error});
  }
  return t;
}

inline void add_sweep_meta(Metadata& m, const SweepResult& s) {
  const SweepConfig& c = s.config;
  m.add("protocol", to_string(c.protocol));
  m.add("tuning", to_string(c.tuning));
  m.add("theta_min", c.theta_min);
  m.add("theta_max", c.theta_max);
  m.add("n_theta", c.n_theta);
  m.add("n_time", c.n_time);
  m.add("window_factor", c.window_factor);
  m.add("degeneracy_window", kDegeneracyWindow);
}

inline nlohmann::ordered_json sweep_json(const SweepResult& s) {
  nlohmann::ordered_json d;
  d["max_curve"] = table_json(sweep_max_table(s));
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& p : s.points) {
    nlohmann::ordered_json r;
    r["theta"] = p.theta;
    r["times"] = p.times;
    r["population"] = p.population;
    rows.push_back(r);
  }
  d["rows"] = rows;
  return d;
}

inline Table zero_field_scan_table(const std::vector<ZeroFieldScanPoint>& pts) {
  Table t;
  t.columns = {"ratio", "axx", "depletion_time", "pop_00", "doe", "fidelity", "bell_fidelity", "relative_phase",
               "raman_regime"};
  for (const auto& p : pts)
    t.add_row({format_double(p.ratio), format_double(p.axx), format_double(p.depletion_time),
               format_double(p.ground_population), format_double(p.report.doe),
               format_double(p.report.fidelity_to_target), format_double(p.bell_fidelity),
               p.report.relative_phase ? format_double(*p.report.relative_phase) : "nan",
               p.raman_regime ? "1" : "0"});
  return t;
}

inline Table rwa_table(const RwaValidation& v) {
  Table t;
  t.columns = {"carrier_ratio", "overlap", "t_span", "steps", "dt"};
  for (const auto& p : v.points)
    t.add_row({format_double(p.carrier_ratio), format_double(p.overlap), format_double(p.t_span),
               std::to_string(p.steps), format_double(p.dt)});
  return t;
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw IoError("write to '" + path + "' failed");
}

}  // namespace dqe
