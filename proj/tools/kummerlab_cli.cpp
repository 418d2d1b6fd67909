#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "kummerlab/expcli.hpp"

using namespace kummerlab::cli;

int main(int argc, char** argv) {
  CLI::App app{"kummerlab: exact experiments with order-ell characters over F_q[t]"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_file;
  std::map<std::string, std::string> given;
  // Every setting is accepted globally and after the subcommand.
  auto add_keys = [&](CLI::App* a) {
    a->add_option("--config", config_file, "key=value file; command-line settings override it");
    for (const std::string& k : config_keys()) {
      std::string dashed = k;
      for (char& c : dashed)
        if (c == '_') c = '-';
      std::string names = "--" + k;
      if (dashed != k) names += ",--" + dashed;
      a->add_option_function<std::string>(
          names, [&given, k](const std::string& v) { given[k] = v; }, "see README");
    }
  };
  add_keys(&app);
  std::string command;
  for (const std::string& s : subcommands()) {
    CLI::App* sub = app.add_subcommand(s);
    add_keys(sub);
    sub->callback([&command, s] { command = s; });
  }
  app.fallthrough(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kConfigError;
  }

  RunConfig cfg;
  try {
    if (!config_file.empty()) load_config_file(cfg, config_file);
    if (!command.empty()) cfg.command = command;
    for (const auto& [k, v] : given) apply_setting(cfg, k, v);
    validate(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return run(cfg, std::cout);
}
