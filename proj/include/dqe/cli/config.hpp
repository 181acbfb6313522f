#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dqe/cli/units.hpp"
#include "dqe/experiments/sweep.hpp"

namespace dqe {

enum class Command { tune, transfer_n, transfer_p, zero_field, sweep, rwa_check, units };

inline constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands = {{
    {Command::tune, "tune"},
    {Command::transfer_n, "transfer-n"},
    {Command::transfer_p, "transfer-p"},
    {Command::zero_field, "zero-field"},
    {Command::sweep, "sweep"},
    {Command::rwa_check, "rwa-check"},
    {Command::units, "units"},
}};

inline std::string_view to_string(Command c) {
  for (const auto& [k, n] : kCommands)
    if (k == c) return n;
  return "unknown";
}

inline std::optional<Command> parse_command(std::string_view s) {
  for (const auto& [k, n] : kCommands)
    if (n == s) return k;
  return std::nullopt;
}

struct KeySpec {
  std::string_view name;
  std::string_view kind;  // number, integer, word, list, path
  std::string_view help;
};

inline const std::vector<KeySpec>& config_keys() {
  static const std::vector<KeySpec> keys = {
      {"command", "word", "tune | transfer-n | transfer-p | zero-field | sweep | rwa-check | units"},
      {"preset", "word", "fig3 ... fig11, caption parameters of the corresponding figure"},
      {"omega_rabi", "number", "Rabi amplitude (unit of all rates)"},
      {"delta", "number", "detuning, units of omega_rabi"},
      {"delta_over_azz", "number", "detuning in units of azz"},
      {"detuning", "word", "tuned | cubic | fixed | explicit"},
      {"mu_b", "number", "Zeeman rate"},
      {"dip_prefactor", "number", "dipolar prefactor mu0 mu^2/(4 pi r^3)"},
      {"theta", "number", "polar angle, radians"},
      {"theta_over_pi", "number", "polar angle in units of pi"},
      {"omega_carrier", "number", "carrier frequency (lab-frame runs)"},
      {"axx", "number", "explicit coupling axx"},
      {"ayy", "number", "explicit coupling ayy (default -(axx + azz))"},
      {"azz", "number", "explicit coupling azz"},
      {"protocol", "word", "n | p"},
      {"t_final", "number", "trajectory length, 0 = automatic"},
      {"n_samples", "integer", "samples per trajectory"},
      {"window_factor", "number", "automatic window in predicted half-flops"},
      {"theta_min_over_pi", "number", "sweep start"},
      {"theta_max_over_pi", "number", "sweep end"},
      {"n_theta", "integer", "sweep points"},
      {"tuning", "word", "sweep detuning: tuned | cubic | fixed"},
      {"threads", "integer", "sweep worker threads, 0 = all cores"},
      {"ratio", "number", "zero field: Omega_eff / azz; omit to scan"},
      {"ratio_min", "number", "zero-field scan lower ratio"},
      {"ratio_max", "number", "zero-field scan upper ratio"},
      {"n_ratio", "integer", "zero-field scan points"},
      {"carrier_ratios", "list", "rwa-check carrier ratios omega/Omega, comma separated"},
      {"steps_per_period", "integer", "rwa-check integrator steps per carrier period"},
      {"t_span", "number", "rwa-check propagation time, 0 = one transfer"},
      {"separation_nm", "number", "physical NV-NV distance"},
      {"b_field_mT", "number", "physical bias field"},
      {"rabi_MHz", "number", "physical drive amplitude"},
      {"output", "path", "output file (relative to $DQE_OUTPUT_DIR if set)"},
      {"format", "word", "csv | json"},
  };
  return keys;
}

inline bool is_known_key(std::string_view k) {
  const auto& keys = config_keys();
  return std::any_of(keys.begin(), keys.end(), [&](const KeySpec& s) { return s.name == k; });
}

struct RunConfig {
  std::map<std::string, std::string> values;

  bool operator==(const RunConfig&) const = default;

  bool has(const std::string& k) const { return values.count(k) > 0; }
  void set(const std::string& k, const std::string& v) {
    if (!is_known_key(k)) throw ConfigError("unknown configuration key '" + k + "'");
    values[k] = v;
  }
};

namespace detail {
inline std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}
}  // namespace detail

// Grammar: one "key = value" per line; '#' starts a comment; blank lines ignored.
inline RunConfig parse_config(std::string_view text, std::string_view source = "<config>") {
  RunConfig c;
  std::istringstream is{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(is, line)) {
    ++n;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    const auto where = std::string(source) + ":" + std::to_string(n) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = detail::trim(std::string_view(t).substr(0, eq));
    const std::string value = detail::trim(std::string_view(t).substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError(where + "empty key or value");
    if (!is_known_key(key)) throw ConfigError(where + "unknown configuration key '" + key + "'");
    if (c.has(key)) throw ConfigError(where + "duplicate key '" + key + "'");
    c.values[key] = value;
  }
  if (c.values.empty()) throw ConfigError(std::string(source) + ": empty configuration");
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read configuration file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

inline std::string serialize(const RunConfig& c) {
  std::string s;
  for (const auto& [k, v] : c.values) s += k + " = " + v + "\n";
  return s;
}

// later wins
inline RunConfig merge(const RunConfig& base, const RunConfig& overrides) {
  RunConfig r = base;
  for (const auto& [k, v] : overrides.values) r.values[k] = v;
  return r;
}

// ---- presets ----

inline const std::map<std::string, std::map<std::string, std::string>>& presets() {
  static const std::map<std::string, std::map<std::string, std::string>> p = {
      {"fig3", {{"command", "transfer-n"}, {"protocol", "n"}, {"omega_rabi", "1"}, {"mu_b", "0.05"},
                {"theta_over_pi", "0.426"}, {"dip_prefactor", "10"}}},
      {"fig4", {{"command", "sweep"}, {"protocol", "n"}, {"omega_rabi", "1"}, {"mu_b", "0.05"},
                {"dip_prefactor", "10"}, {"tuning", "tuned"}}},
      {"fig5", {{"command", "sweep"}, {"protocol", "n"}, {"omega_rabi", "1"}, {"mu_b", "0.05"},
                {"dip_prefactor", "10"}, {"tuning", "tuned"}}},
      {"fig6", {{"command", "transfer-p"}, {"protocol", "p"}, {"omega_rabi", "1"}, {"mu_b", "0.001"},
                {"theta_over_pi", "0.292"}, {"dip_prefactor", "9.09"}}},
      {"fig7", {{"command", "sweep"}, {"protocol", "p"}, {"omega_rabi", "1"}, {"mu_b", "0.001"},
                {"dip_prefactor", "9.091"}, {"tuning", "tuned"}}},
      {"fig8", {{"command", "sweep"}, {"protocol", "p"}, {"omega_rabi", "1"}, {"mu_b", "0.001"},
                {"dip_prefactor", "9.091"}, {"tuning", "tuned"}}},
      {"fig9", {{"command", "zero-field"}, {"omega_rabi", "40"}, {"azz", "1"}, {"theta_over_pi", "0.303"}}},
      {"fig10", {{"command", "sweep"}, {"protocol", "n"}, {"omega_rabi", "1"}, {"mu_b", "0.05"},
                 {"dip_prefactor", "10"}, {"tuning", "fixed"}}},
      {"fig11", {{"command", "sweep"}, {"protocol", "p"}, {"omega_rabi", "1"}, {"mu_b", "0.001"},
                 {"dip_prefactor", "9.091"}, {"tuning", "fixed"}}},
  };
  return p;
}

// Detuning printed in the captions; the transfer commands report it next to the tuned value.
inline std::optional<double> caption_delta_over_azz(const std::string& preset) {
  if (preset == "fig3") return -0.49875;
  if (preset == "fig6") return 0.504;
  return std::nullopt;
}

// ---- dispatch plan ----

enum class DetuningMode { tuned, cubic, fixed, explicit_value };
enum class OutputFormat { csv, json };

struct DispatchPlan {
  Command command = Command::tune;
  std::string preset;
  ModelParams params;
  Protocol protocol = Protocol::N;
  DetuningMode detuning = DetuningMode::tuned;
  std::optional<double> delta_over_azz;  // explicit detuning given relative to azz
  RunOptions run;
  SweepConfig sweep;
  std::optional<double> ratio;
  double ratio_min = 0.05, ratio_max = 2.0;
  int n_ratio = 80;
  std::vector<double> carrier_ratios{100.0, 300.0, 500.0, 1000.0};
  int steps_per_period = 40;
  double t_span = 0.0;
  std::optional<PhysicalInputs> physical;
  std::string output;
  OutputFormat format = OutputFormat::csv;

  bool operator==(const DispatchPlan&) const = default;
};

namespace detail {
inline double to_number(const std::string& key, const std::string& v) {
  double x = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [p, ec] = std::from_chars(b, e, x);
  if (ec != std::errc{} || p != e || !std::isfinite(x))
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return x;
}
inline int to_integer(const std::string& key, const std::string& v) {
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}
}  // namespace detail

inline DispatchPlan make_plan(const RunConfig& given) {
  RunConfig cfg;
  if (given.has("preset")) {
    const std::string name = given.values.at("preset");
    const auto it = presets().find(name);
    if (it == presets().end()) throw ConfigError("unknown preset '" + name + "'");
    for (const auto& [k, v] : it->second) cfg.values[k] = v;
  }
  for (const auto& [k, v] : given.values) cfg.set(k, v);

  auto num = [&](const char* k) { return detail::to_number(k, cfg.values.at(k)); };
  auto integer = [&](const char* k) { return detail::to_integer(k, cfg.values.at(k)); };
  auto has = [&](const char* k) { return cfg.has(k); };

  DispatchPlan plan;
  if (!has("command")) throw ConfigError("no command given");
  const auto cmd = parse_command(cfg.values.at("command"));
  if (!cmd) throw ConfigError("unknown command '" + cfg.values.at("command") + "'");
  plan.command = *cmd;
  if (has("preset")) plan.preset = cfg.values.at("preset");

  ModelParams& p = plan.params;
  if (has("omega_rabi")) p.omega_rabi = num("omega_rabi");
  if (has("mu_b")) p.mu_b = num("mu_b");
  if (has("dip_prefactor")) p.dip_prefactor = num("dip_prefactor");
  if (has("omega_carrier")) p.omega_carrier = num("omega_carrier");
  if (has("theta") && has("theta_over_pi")) throw ConfigError("give either theta or theta_over_pi, not both");
  if (has("theta")) p.theta = num("theta");
  if (has("theta_over_pi")) p.theta = num("theta_over_pi") * std::numbers::pi;

  if (has("separation_nm") || has("b_field_mT") || has("rabi_MHz")) {
    PhysicalInputs phys;
    phys.separation_nm = has("separation_nm") ? num("separation_nm") : 0.0;
    phys.b_field_mT = has("b_field_mT") ? num("b_field_mT") : 0.0;
    phys.rabi_MHz = has("rabi_MHz") ? num("rabi_MHz") : 0.0;
    phys.theta = p.theta;
    plan.physical = phys;
    if (given.has("dip_prefactor") || given.has("mu_b") || given.has("omega_rabi"))
      throw ConfigError("physical inputs conflict with dimensionless mu_b/dip_prefactor/omega_rabi");
    const ConvertedUnits u = convert_units(phys);
    p.omega_rabi = u.params.omega_rabi;
    p.mu_b = u.params.mu_b;
    p.dip_prefactor = u.params.dip_prefactor;
  }

  if (has("axx") || has("azz") || has("ayy")) {
    if (!has("azz")) throw ConfigError("explicit couplings need at least azz");
    DipoleCoeffs c;
    c.azz = num("azz");
    c.axx = has("axx") ? num("axx") : 0.0;
    c.ayy = has("ayy") ? num("ayy") : -(c.axx + c.azz);
    p.couplings = c;
  }

  if (has("protocol")) {
    const std::string v = cfg.values.at("protocol");
    if (v == "n" || v == "N") plan.protocol = Protocol::N;
    else if (v == "p" || v == "P") plan.protocol = Protocol::P;
    else throw ConfigError("protocol must be n or p");
  }
  if (plan.command == Command::transfer_n) plan.protocol = Protocol::N;
  if (plan.command == Command::transfer_p) plan.protocol = Protocol::P;

  if (has("delta") && has("delta_over_azz")) throw ConfigError("give either delta or delta_over_azz, not both");
  if (has("delta")) p.delta = num("delta");
  if (has("delta_over_azz")) plan.delta_over_azz = num("delta_over_azz");
  const bool explicit_delta = has("delta") || has("delta_over_azz");
  plan.detuning = explicit_delta ? DetuningMode::explicit_value : DetuningMode::tuned;
  if (has("detuning")) {
    const std::string v = cfg.values.at("detuning");
    if (v == "tuned") plan.detuning = DetuningMode::tuned;
    else if (v == "cubic") plan.detuning = DetuningMode::cubic;
    else if (v == "fixed") plan.detuning = DetuningMode::fixed;
    else if (v == "explicit") plan.detuning = DetuningMode::explicit_value;
    else throw ConfigError("detuning must be tuned, cubic, fixed or explicit");
    if (plan.detuning == DetuningMode::explicit_value && !explicit_delta)
      throw ConfigError("detuning = explicit needs delta or delta_over_azz");
    if (plan.detuning != DetuningMode::explicit_value && explicit_delta)
      throw ConfigError("delta given but detuning is not explicit");
  }
  if (plan.delta_over_azz) p.delta = *plan.delta_over_azz * dipole_coeffs(p).azz;

  if (has("t_final")) plan.run.t_final = num("t_final");
  if (has("n_samples")) plan.run.n_samples = integer("n_samples");
  if (has("window_factor")) plan.run.window_factor = num("window_factor");
  if (plan.run.n_samples < 2) throw ConfigError("n_samples must be >= 2");
  if (!(plan.run.window_factor > 0)) throw ConfigError("window_factor must be positive");

  SweepConfig& s = plan.sweep;
  s.protocol = plan.protocol;
  s.base = p;
  s.n_time = plan.run.n_samples;
  s.window_factor = plan.run.window_factor;
  if (has("theta_min_over_pi")) s.theta_min = num("theta_min_over_pi") * std::numbers::pi;
  if (has("theta_max_over_pi")) s.theta_max = num("theta_max_over_pi") * std::numbers::pi;
  if (has("n_theta")) s.n_theta = integer("n_theta");
  if (has("threads")) s.threads = static_cast<unsigned>(std::max(0, integer("threads")));
  if (has("tuning")) {
    const std::string v = cfg.values.at("tuning");
    if (v == "tuned") s.tuning = Tuning::tuned;
    else if (v == "cubic") s.tuning = Tuning::cubic;
    else if (v == "fixed") s.tuning = Tuning::fixed_half_azz;
    else throw ConfigError("tuning must be tuned, cubic or fixed");
  }

  if (has("ratio")) plan.ratio = num("ratio");
  if (has("ratio_min")) plan.ratio_min = num("ratio_min");
  if (has("ratio_max")) plan.ratio_max = num("ratio_max");
  if (has("n_ratio")) plan.n_ratio = integer("n_ratio");

  if (has("carrier_ratios")) {
    plan.carrier_ratios.clear();
    std::stringstream ss(cfg.values.at("carrier_ratios"));
    std::string item;
    while (std::getline(ss, item, ',')) plan.carrier_ratios.push_back(detail::to_number("carrier_ratios", detail::trim(item)));
    if (plan.carrier_ratios.empty()) throw ConfigError("carrier_ratios is empty");
  }
  if (has("steps_per_period")) plan.steps_per_period = integer("steps_per_period");
  if (has("t_span")) plan.t_span = num("t_span");

  if (has("output")) plan.output = cfg.values.at("output");
  if (has("format")) {
    const std::string v = cfg.values.at("format");
    if (v == "csv") plan.format = OutputFormat::csv;
    else if (v == "json") plan.format = OutputFormat::json;
    else throw ConfigError("format must be csv or json");
  }
  if (plan.command == Command::units && !plan.physical)
    throw ConfigError("units needs separation_nm, b_field_mT and rabi_MHz");
  if (plan.command != Command::units) {
    try {
      p.validate();
    } catch (const ModelError& e) {
      throw ConfigError(e.what());
    }
  }
  plan.sweep.base = p;
  return plan;
}

}  // namespace dqe
