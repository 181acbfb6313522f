#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dqe/cli/dispatch.hpp"

namespace {

std::string flag_name(std::string_view key) {
  std::string f(key);
  for (char& c : f)
    if (c == '_') c = '-';
  return "--" + f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entangled double-quantum states of two dipole-coupled NV centers"};
  app.set_version_flag("--version", std::string("dqe ") + dqe::kVersion);

  std::string command, config_path;
  std::vector<std::string> sets;
  bool print_config = false;
  app.add_option("command", command, "tune | transfer-n | transfer-p | zero-field | sweep | rwa-check | units");
  app.add_option("-c,--config", config_path, "key = value configuration file");
  app.add_option("--set", sets, "extra key=value override (repeatable)");
  app.add_flag("--print-config", print_config, "print the merged configuration and exit");

  std::map<std::string, std::string> flag_values;
  for (const auto& k : dqe::config_keys()) {
    if (k.name == "command") continue;
    app.add_option(flag_name(k.name), flag_values[std::string(k.name)], std::string(k.help));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : dqe::kExitConfig;
  }

  try {
    dqe::RunConfig file;
    if (!config_path.empty()) file = dqe::load_config(config_path);
    dqe::RunConfig flags;
    for (const auto& k : dqe::config_keys()) {
      if (k.name == "command") continue;
      if (app.count(flag_name(k.name)) > 0) flags.set(std::string(k.name), flag_values[std::string(k.name)]);
    }
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw dqe::ConfigError("--set expects key=value, got '" + s + "'");
      flags.set(dqe::detail::trim(s.substr(0, eq)), dqe::detail::trim(s.substr(eq + 1)));
    }
    if (!command.empty()) flags.set("command", command);
    const dqe::RunConfig merged = dqe::merge(file, flags);
    if (print_config) {
      std::cout << dqe::serialize(merged);
      return dqe::kExitOk;
    }
    const dqe::DispatchPlan plan = dqe::make_plan(merged);
    dqe::dispatch(plan, merged, std::cout, std::cerr);
    return dqe::kExitOk;
  } catch (const dqe::Error& e) {
    std::cerr << "error[" << dqe::to_string(e.category()) << "]: " << e.what() << '\n';
    return dqe::exit_code_for(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error[other]: " << e.what() << '\n';
    return dqe::kExitOther;
  }
}
