// casimir-stress: command-line front end.
//
//   casimir-stress <command> [--preset NAME] [--config PATH]... [--out PATH]
//                            [--threads N] [--tolerance X]
//
// Exit status: 0 success, 1 usage or configuration error, 2 numerical
// non-convergence (the CSV is still written).

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "casimir/app/commands.hpp"
#include "casimir/app/config.hpp"
#include "casimir/app/presets.hpp"
#include "casimir/errors.hpp"

namespace {

struct Options {
  std::string preset;
  std::vector<std::string> configs;
  std::string out;
  unsigned threads = 1;
  double tolerance = 0.0;
};

int run(casimir::app::Command cmd, const Options& opt) {
  using namespace casimir::app;
  RunConfig cfg;
  if (!opt.preset.empty()) apply_preset(cfg, opt.preset);
  for (const auto& path : opt.configs)
    apply_config(cfg, parse_ini_file(path), std::filesystem::path(path).parent_path());
  if (opt.tolerance > 0.0) cfg.quadrature.rel_tol = opt.tolerance;
  validate_config(cfg);

  const auto result = run_command(cmd, cfg, opt.threads);
  if (opt.out.empty() || opt.out == "-") {
    std::cout << result.csv;
    std::cout.flush();
  } else {
    std::ofstream f(opt.out, std::ios::binary);
    if (!(f << result.csv)) throw ConfigError("cannot write '" + opt.out + "'");
  }
  if (!result.converged)
    std::fprintf(stderr, "warning: %s did not converge everywhere (see the converged column / summary)\n",
                 command_name(cmd));
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace casimir::app;
  CLI::App app{"Casimir stress in a planar cavity under two electromagnetic stress tensors"};
  app.require_subcommand(1);
  app.set_version_flag("--version", casimir::version);

  Options opt;
  std::string preset_help = "built-in configuration:";
  for (const auto& name : preset_names()) preset_help += " " + name;

  std::vector<std::pair<CLI::App*, Command>> subs;
  for (Command c : {Command::pressure, Command::rw_profile, Command::cutoff_scan, Command::near_interface,
                    Command::classical, Command::liquid_rise}) {
    auto* sub = app.add_subcommand(command_name(c));
    sub->add_option("--preset", opt.preset, preset_help);
    sub->add_option("--config", opt.configs, "config file, applied after the preset (repeatable)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "output CSV path (default: stdout)");
    sub->add_option("--threads", opt.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--tolerance", opt.tolerance, "relative tolerance (overrides the config)")
        ->check(CLI::PositiveNumber);
    subs.emplace_back(sub, c);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  for (const auto& [sub, cmd] : subs) {
    if (!sub->parsed()) continue;
    try {
      return run(cmd, opt);
    } catch (const casimir::DivergenceError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    } catch (const ConfigError& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    } catch (const std::invalid_argument& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    } catch (const std::domain_error& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 2;
    }
  }
  return 1;
}
