#pragma once

// Command runners behind the CLI. Each returns the full CSV text; the
// exit status is 0 when every point converged and 2 otherwise.
//
// CSV layout:
//   # casimir-stress <version>
//   # command: <name>
//   # config:
//   #   <resolved config, one line each>
//   <column header>
//   <rows, %.16e>
//   # summary: key = value          (command specific)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/app/config.hpp"
#include "casimir/app/version.hpp"
#include "casimir/casimir_am.hpp"
#include "casimir/casimir_rw.hpp"
#include "casimir/classical_fields.hpp"

namespace casimir::app {

enum class Command { pressure, rw_profile, cutoff_scan, near_interface, classical, liquid_rise };

inline const char* command_name(Command c) {
  switch (c) {
    case Command::pressure: return "pressure";
    case Command::rw_profile: return "rw-profile";
    case Command::cutoff_scan: return "cutoff-scan";
    case Command::near_interface: return "near-interface";
    case Command::classical: return "classical";
    case Command::liquid_rise: return "liquid-rise";
  }
  return "?";
}

inline std::optional<Command> parse_command(const std::string& name) {
  for (Command c : {Command::pressure, Command::rw_profile, Command::cutoff_scan, Command::near_interface,
                    Command::classical, Command::liquid_rise})
    if (name == command_name(c)) return c;
  return std::nullopt;
}

struct CommandOutput {
  std::string csv;
  bool converged = true;
  int exit_code() const { return converged ? 0 : 2; }
};

namespace detail {

class CsvWriter {
 public:
  CsvWriter(Command cmd, const RunConfig& cfg) {
    os_ << "# casimir-stress " << casimir::version << "\n";
    os_ << "# command: " << command_name(cmd) << "\n";
    os_ << "# config:\n";
    std::istringstream cfg_text(cfg.resolved_text());
    std::string line;
    while (std::getline(cfg_text, line)) os_ << "#   " << line << "\n";
  }

  void columns(std::initializer_list<const char*> names) {
    bool first = true;
    for (const char* n : names) {
      os_ << (first ? "" : ",") << n;
      first = false;
    }
    os_ << "\n";
  }

  void row(std::initializer_list<double> values) {
    bool first = true;
    char buf[40];
    for (double v : values) {
      std::snprintf(buf, sizeof buf, "%.16e", v);
      os_ << (first ? "" : ",") << buf;
      first = false;
    }
    os_ << "\n";
  }

  void summary(const std::string& key, double value) {
    summary(key, casimir::detail::format_number(value));
  }
  void summary(const std::string& key, std::size_t value) { summary(key, std::to_string(value)); }
  void summary(const std::string& key, bool value) { summary(key, std::string(value ? "true" : "false")); }
  void summary(const std::string& key, const std::string& value) {
    os_ << "# summary: " << key << " = " << value << "\n";
  }

  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

inline QuadratureSpec with_threads(const RunConfig& cfg, unsigned threads) {
  QuadratureSpec s = cfg.quadrature;
  s.threads = std::max(1u, threads);
  return s;
}

}  // namespace detail

inline CommandOutput cmd_pressure(const RunConfig& cfg, unsigned threads = 1) {
  detail::CsvWriter out(Command::pressure, cfg);
  const auto spec = detail::with_threads(cfg, threads);
  CommandOutput result;
  out.columns({"a", "T", "P_AM", "error", "te_part", "tm_part", "converged"});
  for (double a : cfg.pressure_widths())
    for (double T : cfg.pressure_temps()) {
      auto cavity = cfg.cavity();
      cavity.gap_width = a;
      cavity.temperature = T;
      const auto p = am_pressure(cavity, spec);
      result.converged = result.converged && p.report.converged;
      out.row({a, T, p.pressure, p.error, p.te_part, p.tm_part, p.report.converged ? 1.0 : 0.0});
    }
  out.summary("all_converged", result.converged);
  result.csv = out.str();
  return result;
}

inline CommandOutput cmd_rw_profile(const RunConfig& cfg, unsigned threads = 1) {
  detail::CsvWriter out(Command::rw_profile, cfg);
  const auto spec = detail::with_threads(cfg, threads);
  const auto cavity = cfg.cavity();
  const auto z = cfg.profile_grid();
  const auto profile = rw_profile(cavity, z, spec);
  const auto am = am_pressure(cavity, spec);

  CommandOutput result;
  result.converged = profile.report.converged && am.report.converged;
  out.columns({"z", "T_zz_RW", "error"});
  double max_abs = 0.0, lo = profile.values.front(), hi = profile.values.front();
  for (std::size_t i = 0; i < z.size(); ++i) {
    out.row({z[i], profile.values[i], profile.per_point_error[i]});
    max_abs = std::max(max_abs, std::abs(profile.values[i]));
    lo = std::min(lo, profile.values[i]);
    hi = std::max(hi, profile.values[i]);
  }

  // Mirror pairs present in the grid.
  const double a = cavity.gap_width;
  double residual = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = 0; j < z.size(); ++j)
      if (std::abs(z[i] - (a - z[j])) <= 1e-12 * a) {
        residual = std::max(residual, std::abs(profile.values[i] - profile.values[j]));
        ++pairs;
      }
  const double scale = max_abs > 0.0 ? max_abs : 1.0;
  const double flat_tol = 10.0 * spec.rel_tol;

  // Midpoint value against the grid points nearest the walls.
  std::size_t mid = 0;
  for (std::size_t i = 0; i < z.size(); ++i)
    if (std::abs(z[i] - 0.5 * a) < std::abs(z[mid] - 0.5 * a)) mid = i;
  bool edges_larger = z.size() >= 3;
  for (std::size_t i : {std::size_t{0}, z.size() - 1})
    if (i != mid) edges_larger = edges_larger && std::abs(profile.values[i]) > std::abs(profile.values[mid]);

  out.summary("symmetry_pairs", pairs);
  out.summary("symmetry_residual", pairs ? residual / scale : 0.0);
  out.summary("flat", (hi - lo) <= flat_tol * scale);
  out.summary("edges_exceed_midpoint", edges_larger);
  out.summary("P_AM", am.pressure);
  out.summary("max_abs_T_RW_plus_P_AM", [&] {
    double m = 0.0;
    for (double v : profile.values) m = std::max(m, std::abs(v + am.pressure));
    return m;
  }());
  out.summary("matsubara_terms", profile.report.matsubara_terms_used);
  out.summary("all_converged", result.converged);
  result.csv = out.str();
  return result;
}

inline CommandOutput cmd_cutoff_scan(const RunConfig& cfg, unsigned threads = 1) {
  detail::CsvWriter out(Command::cutoff_scan, cfg);
  const auto spec = detail::with_threads(cfg, threads);
  const auto cutoffs = cfg.cutoff_grid();
  if (cutoffs.size() < 4) throw ConfigError("cutoff-scan needs at least 4 cutoffs");
  const auto scan = cutoff_scan(cfg.cavity(), cfg.scan_z, cutoffs, spec);

  CommandOutput result;
  result.converged = scan.report.converged;
  out.columns({"cutoff", "P_RW"});
  double lo = scan.values.front(), hi = scan.values.front(), max_abs = 0.0;
  for (std::size_t i = 0; i < scan.cutoffs.size(); ++i) {
    out.row({scan.cutoffs[i], scan.values[i]});
    lo = std::min(lo, scan.values[i]);
    hi = std::max(hi, scan.values[i]);
    max_abs = std::max(max_abs, std::abs(scan.values[i]));
  }
  out.summary("z", scan.z);
  out.summary("c0", scan.fitted_intercept);
  out.summary("c1", scan.fitted_slope);
  out.summary("c1_stderr", scan.slope_stderr);
  out.summary("correlation", scan.correlation);
  out.summary("fit_points", scan.fit_points);
  if (scan.analytic_slope) {
    out.summary("analytic_c1", *scan.analytic_slope);
    out.summary("relative_deviation",
                *scan.analytic_slope != 0.0 ? scan.fitted_slope / *scan.analytic_slope - 1.0 : scan.fitted_slope);
  }
  out.summary("cutoff_insensitive", (hi - lo) <= 1e-6 * (max_abs > 0.0 ? max_abs : 1.0));
  out.summary("all_converged", result.converged);
  result.csv = out.str();
  return result;
}

inline CommandOutput cmd_near_interface(const RunConfig& cfg, unsigned threads = 1) {
  detail::CsvWriter out(Command::near_interface, cfg);
  const auto spec = detail::with_threads(cfg, threads);
  const auto z = cfg.near_interface_grid();
  const auto res = near_interface_growth(cfg.cavity(), z, spec);

  CommandOutput result;
  result.converged = res.report.converged;
  out.columns({"z", "T_zz_RW_minus_midpoint"});
  for (std::size_t i = 0; i < z.size(); ++i) out.row({z[i], res.z_dependent[i]});
  out.summary("has_divergent_part", res.has_divergent_part);
  out.summary("exponent", res.exponent);
  out.summary("exponent_stderr", res.exponent_stderr);
  out.summary("all_converged", result.converged);
  result.csv = out.str();
  return result;
}

inline CommandOutput cmd_classical(const RunConfig& cfg, unsigned threads = 1) {
  detail::CsvWriter out(Command::classical, cfg);
  const auto& spec = cfg.liquid;
  const Vec3 up{0.0, 0.0, 1.0};
  const double h = liquid_rise_height(spec);
  const double am = surface_stress_jump(StressKind::am, spec.liquid(), spec.vacuum(), up);
  const double rw = surface_stress_jump(StressKind::rw, spec.liquid(), spec.vacuum(), up);
  out.columns({"eps", "E", "rho_mass", "g", "height", "am_jump", "rw_jump"});
  out.row({spec.eps, spec.E, spec.rho_mass, spec.g, h, am, rw});

  if (!cfg.field_state_path.empty()) {
    if (cfg.force_output_path.empty()) throw ConfigError("classical: field_state needs force_output");
    std::ifstream in(cfg.field_state_path);
    if (!in) throw ConfigError("cannot open field state '" + cfg.field_state_path + "'");
    const auto state = read_field_state(in);
    const auto f_am = force_density(StressKind::am, state, threads);
    const auto f_rw = force_density(StressKind::rw, state, threads);
    detail::CsvWriter forces(Command::classical, cfg);
    forces.columns({"i", "j", "k", "f_AM_x", "f_AM_y", "f_AM_z", "f_RW_x", "f_RW_y", "f_RW_z"});
    for (std::size_t k = 0; k < state.nz; ++k)
      for (std::size_t j = 0; j < state.ny; ++j)
        for (std::size_t i = 0; i < state.nx; ++i) {
          const std::size_t c = state.index(i, j, k);
          forces.row({double(i), double(j), double(k), f_am[c][0], f_am[c][1], f_am[c][2], f_rw[c][0], f_rw[c][1],
                      f_rw[c][2]});
        }
    std::ofstream fo(cfg.force_output_path);
    if (!(fo << forces.str())) throw ConfigError("cannot write '" + cfg.force_output_path + "'");
    out.summary("force_output", cfg.force_output_path);
  }
  CommandOutput result;
  result.csv = out.str();
  return result;
}

inline CommandOutput cmd_liquid_rise(const RunConfig& cfg, unsigned /*threads*/ = 1) {
  detail::CsvWriter out(Command::liquid_rise, cfg);
  out.columns({"eps", "E", "rho_mass", "g", "height"});
  for (double E : cfg.liquid_fields()) {
    LiquidRiseSpec s = cfg.liquid;
    s.E = E;
    out.row({s.eps, E, s.rho_mass, s.g, liquid_rise_height(s)});
  }
  CommandOutput result;
  result.csv = out.str();
  return result;
}

inline CommandOutput run_command(Command cmd, const RunConfig& cfg, unsigned threads = 1) {
  switch (cmd) {
    case Command::pressure: return cmd_pressure(cfg, threads);
    case Command::rw_profile: return cmd_rw_profile(cfg, threads);
    case Command::cutoff_scan: return cmd_cutoff_scan(cfg, threads);
    case Command::near_interface: return cmd_near_interface(cfg, threads);
    case Command::classical: return cmd_classical(cfg, threads);
    case Command::liquid_rise: return cmd_liquid_rise(cfg, threads);
  }
  return {};
}

}  // namespace casimir::app
