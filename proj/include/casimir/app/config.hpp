#pragma once

// Run configuration: a preset and/or config files layered in order, each
// key overriding earlier values. All quantities are SI.
//
//   [cavity]          gap_width, temperature, wall, gap, check_dilute_gap
//   [materials]       library = path (relative to the config file)
//   [quadrature]      rel_tol, abs_tol, max_matsubara_terms, k_cutoff (number or inf),
//                     max_quadrature_evals_per_term, force_am_cutoff
//   [pressure]        gap_widths, temperatures
//   [rw-profile]      z (list) or points (interior grid a (i + 1/2) / points)
//   [cutoff-scan]     z, cutoffs
//   [near-interface]  z (list) or z_min, z_max, points (log grid)
//   [classical]       eps, E, rho_mass, g, field_state, force_output
//   [liquid-rise]     eps, fields (list of E), rho_mass, g

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/app/ini.hpp"
#include "casimir/app/material_library.hpp"
#include "casimir/cavity.hpp"
#include "casimir/classical_fields.hpp"
#include "casimir/spectral_engine.hpp"

namespace casimir::app {

struct RunConfig {
  // cavity
  double gap_width = 1e-6;
  double temperature = 0.0;
  std::string wall = "perfect_mirror";
  std::string gap = "vacuum";
  SourceLocation wall_at{"<default>", 0, 0}, gap_at{"<default>", 0, 0};
  bool check_dilute_gap = true;
  std::vector<std::string> material_libraries;

  QuadratureSpec quadrature;

  // pressure
  std::optional<std::vector<double>> pressure_gap_widths;
  std::optional<std::vector<double>> pressure_temperatures;

  // rw-profile
  std::optional<std::vector<double>> profile_z;
  std::size_t profile_points = 21;

  // cutoff-scan
  double scan_z = 0.0;
  std::optional<std::vector<double>> scan_cutoffs;  // default: 100/a x {1, 2, 5, 10}

  // near-interface
  std::optional<std::vector<double>> near_z;
  double near_z_min_fraction = 1e-4;  // of a, used when near_z is empty
  double near_z_max_fraction = 1e-2;
  std::optional<double> near_z_min, near_z_max;
  std::size_t near_points = 9;

  // classical / liquid-rise
  LiquidRiseSpec liquid;
  std::string field_state_path;
  std::string force_output_path;
  std::optional<std::vector<double>> rise_fields;

  std::vector<double> pressure_widths() const { return pressure_gap_widths.value_or(std::vector<double>{gap_width}); }
  std::vector<double> pressure_temps() const { return pressure_temperatures.value_or(std::vector<double>{temperature}); }

  std::vector<double> profile_grid() const {
    if (profile_z) return *profile_z;
    std::vector<double> z;
    for (std::size_t i = 0; i < profile_points; ++i)
      z.push_back(gap_width * (static_cast<double>(i) + 0.5) / static_cast<double>(profile_points));
    return z;
  }

  std::vector<double> near_interface_grid() const {
    if (near_z) return *near_z;
    const double lo = near_z_min.value_or(near_z_min_fraction * gap_width);
    const double hi = near_z_max.value_or(near_z_max_fraction * gap_width);
    std::vector<double> z;
    for (std::size_t i = 0; i < near_points; ++i) {
      const double t = near_points > 1 ? static_cast<double>(i) / static_cast<double>(near_points - 1) : 0.0;
      z.push_back(lo * std::pow(hi / lo, t));
    }
    return z;
  }

  std::vector<double> cutoff_grid() const {
    if (scan_cutoffs) return *scan_cutoffs;
    std::vector<double> out;
    for (double f : {1.0, 2.0, 5.0, 10.0}) out.push_back(100.0 * f / gap_width);
    return out;
  }

  std::vector<double> liquid_fields() const { return rise_fields.value_or(std::vector<double>{liquid.E}); }

  MaterialLibrary library() const {
    auto lib = MaterialLibrary::with_builtins();
    for (const auto& path : material_libraries) lib.load_file(path);
    return lib;
  }

  CavitySpec cavity() const {
    const auto lib = library();
    CavitySpec c;
    c.gap_width = gap_width;
    c.temperature = temperature;
    c.wall = lib.resolve_wall(wall, wall_at);
    c.gap = lib.resolve(gap, gap_at);
    c.check_dilute_gap = check_dilute_gap;
    return c;
  }

  /// Canonical text of every resolved setting (thread count excluded: it
  /// does not change results).
  std::string resolved_text() const;
};

namespace detail {

inline std::string fmt(double x) { return casimir::detail::format_number(x); }

inline std::string fmt_list(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

inline void require_sorted(const std::vector<double>& v, const SourceLocation& at, const std::string& what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1])) throw ConfigError(at, what + " must be strictly increasing");
}

inline std::size_t parse_count(const IniEntry& e) {
  const double v = parse_number(e.value, e.value_at);
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e12) throw ConfigError(e.value_at, "expected a positive integer");
  return static_cast<std::size_t>(v);
}

inline double parse_positive(const IniEntry& e) {
  const double v = parse_number(e.value, e.value_at);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(e.value_at, "'" + e.key + "' must be positive and finite");
  return v;
}

inline double parse_nonnegative(const IniEntry& e) {
  const double v = parse_number(e.value, e.value_at);
  if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(e.value_at, "'" + e.key + "' must be >= 0 and finite");
  return v;
}

inline std::vector<double> parse_grid(const IniEntry& e, bool allow_zero = false) {
  auto v = parse_number_list(e.value, e.value_at);
  for (double x : v)
    if (!std::isfinite(x) || !(allow_zero ? x >= 0.0 : x > 0.0))
      throw ConfigError(e.value_at, "'" + e.key + "' values must be " + (allow_zero ? "finite and >= 0" : "positive"));
  require_sorted(v, e.value_at, "'" + e.key + "'");
  return v;
}

}  // namespace detail

/// Applies one parsed document on top of `cfg`. `base_dir` resolves
/// relative paths.
inline void apply_config(RunConfig& cfg, const IniDocument& doc, const std::filesystem::path& base_dir = {}) {
  using Handler = std::function<void(const IniEntry&)>;
  auto path_of = [&](const std::string& p) {
    std::filesystem::path path(p);
    return (path.is_absolute() || base_dir.empty() ? path : base_dir / path).string();
  };

  const std::map<std::string, std::map<std::string, Handler>> schema{
      {"cavity",
       {
           {"gap_width", [&](const IniEntry& e) { cfg.gap_width = detail::parse_positive(e); }},
           {"temperature", [&](const IniEntry& e) { cfg.temperature = detail::parse_nonnegative(e); }},
           {"wall",
            [&](const IniEntry& e) {
              cfg.wall = e.value;
              cfg.wall_at = e.value_at;
            }},
           {"gap",
            [&](const IniEntry& e) {
              cfg.gap = e.value;
              cfg.gap_at = e.value_at;
            }},
           {"check_dilute_gap", [&](const IniEntry& e) { cfg.check_dilute_gap = parse_bool(e.value, e.value_at); }},
       }},
      {"materials",
       {
           {"library", [&](const IniEntry& e) { cfg.material_libraries.push_back(path_of(e.value)); }},
       }},
      {"quadrature",
       {
           {"rel_tol", [&](const IniEntry& e) { cfg.quadrature.rel_tol = detail::parse_positive(e); }},
           {"abs_tol", [&](const IniEntry& e) { cfg.quadrature.abs_tol = detail::parse_nonnegative(e); }},
           {"max_matsubara_terms", [&](const IniEntry& e) { cfg.quadrature.max_matsubara_terms = detail::parse_count(e); }},
           {"max_quadrature_evals_per_term",
            [&](const IniEntry& e) { cfg.quadrature.max_quadrature_evals_per_term = detail::parse_count(e); }},
           {"k_cutoff",
            [&](const IniEntry& e) {
              if (e.value == "inf" || e.value == "none")
                cfg.quadrature.k_cutoff.reset();
              else
                cfg.quadrature.k_cutoff = detail::parse_positive(e);
            }},
           {"force_am_cutoff", [&](const IniEntry& e) { cfg.quadrature.force_am_cutoff = parse_bool(e.value, e.value_at); }},
       }},
      {"pressure",
       {
           {"gap_widths", [&](const IniEntry& e) { cfg.pressure_gap_widths = detail::parse_grid(e); }},
           {"temperatures", [&](const IniEntry& e) { cfg.pressure_temperatures = detail::parse_grid(e, true); }},
       }},
      {"rw-profile",
       {
           {"z", [&](const IniEntry& e) { cfg.profile_z = detail::parse_grid(e, true); }},
           {"points",
            [&](const IniEntry& e) {
              cfg.profile_points = detail::parse_count(e);
              cfg.profile_z.reset();
            }},
       }},
      {"cutoff-scan",
       {
           {"z", [&](const IniEntry& e) { cfg.scan_z = detail::parse_nonnegative(e); }},
           {"cutoffs", [&](const IniEntry& e) { cfg.scan_cutoffs = detail::parse_grid(e); }},
       }},
      {"near-interface",
       {
           {"z", [&](const IniEntry& e) { cfg.near_z = detail::parse_grid(e); }},
           {"z_min",
            [&](const IniEntry& e) {
              cfg.near_z_min = detail::parse_positive(e);
              cfg.near_z.reset();
            }},
           {"z_max",
            [&](const IniEntry& e) {
              cfg.near_z_max = detail::parse_positive(e);
              cfg.near_z.reset();
            }},
           {"points",
            [&](const IniEntry& e) {
              cfg.near_points = detail::parse_count(e);
              cfg.near_z.reset();
            }},
       }},
      {"classical",
       {
           {"eps", [&](const IniEntry& e) { cfg.liquid.eps = parse_number(e.value, e.value_at); }},
           {"E", [&](const IniEntry& e) { cfg.liquid.E = detail::parse_nonnegative(e); }},
           {"rho_mass", [&](const IniEntry& e) { cfg.liquid.rho_mass = detail::parse_positive(e); }},
           {"g", [&](const IniEntry& e) { cfg.liquid.g = detail::parse_positive(e); }},
           {"field_state", [&](const IniEntry& e) { cfg.field_state_path = path_of(e.value); }},
           {"force_output", [&](const IniEntry& e) { cfg.force_output_path = path_of(e.value); }},
       }},
      {"liquid-rise",
       {
           {"eps", [&](const IniEntry& e) { cfg.liquid.eps = parse_number(e.value, e.value_at); }},
           {"fields", [&](const IniEntry& e) { cfg.rise_fields = detail::parse_grid(e, true); }},
           {"rho_mass", [&](const IniEntry& e) { cfg.liquid.rho_mass = detail::parse_positive(e); }},
           {"g", [&](const IniEntry& e) { cfg.liquid.g = detail::parse_positive(e); }},
       }},
  };

  for (const auto& section : doc.sections) {
    auto it = schema.find(section.name);
    if (it == schema.end()) throw ConfigError(section.at, "unknown section [" + section.name + "]");
    if (!section.argument.empty()) throw ConfigError(section.at, "section [" + section.name + "] takes no argument");
    for (const auto& e : section.entries) {
      auto h = it->second.find(e.key);
      if (h == it->second.end())
        throw ConfigError(e.key_at, "unknown key '" + e.key + "' in [" + section.name + "]");
      h->second(e);
    }
  }
}

/// Cross-field checks; material references are resolved here so that a bad
/// name is reported before any computation starts.
inline void validate_config(const RunConfig& cfg) {
  try {
    const auto lib = cfg.library();
    lib.resolve_wall(cfg.wall, cfg.wall_at);
    lib.resolve(cfg.gap, cfg.gap_at);
    cfg.quadrature.validate();
    cfg.liquid.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
  if (cfg.profile_points == 0) throw ConfigError("rw-profile points must be >= 1");
  const auto near = cfg.near_interface_grid();
  for (std::size_t i = 1; i < near.size(); ++i)
    if (!(near[i] > near[i - 1])) throw ConfigError("near-interface z grid must be strictly increasing");
}

inline std::string RunConfig::resolved_text() const {
  using detail::fmt;
  using detail::fmt_list;
  std::ostringstream os;
  os << "[cavity]\n"
     << "gap_width = " << fmt(gap_width) << "\n"
     << "temperature = " << fmt(temperature) << "\n"
     << "wall = " << wall << "  # " << cavity().wall.describe() << "\n"
     << "gap = " << gap << "  # " << cavity().gap.describe() << "\n"
     << "check_dilute_gap = " << (check_dilute_gap ? "true" : "false") << "\n";
  if (!material_libraries.empty()) {
    os << "[materials]\n";
    for (const auto& p : material_libraries) os << "library = " << p << "\n";
  }
  os << "[quadrature]\n"
     << "rel_tol = " << fmt(quadrature.rel_tol) << "\n"
     << "abs_tol = " << fmt(quadrature.abs_tol) << "\n"
     << "max_matsubara_terms = " << quadrature.max_matsubara_terms << "\n"
     << "max_quadrature_evals_per_term = " << quadrature.max_quadrature_evals_per_term << "\n"
     << "k_cutoff = " << (quadrature.k_cutoff ? fmt(*quadrature.k_cutoff) : std::string("inf")) << "\n"
     << "force_am_cutoff = " << (quadrature.force_am_cutoff ? "true" : "false") << "\n";
  os << "[pressure]\n"
     << "gap_widths = " << fmt_list(pressure_widths()) << "\n"
     << "temperatures = " << fmt_list(pressure_temps()) << "\n";
  os << "[rw-profile]\n"
     << "z = " << fmt_list(profile_grid()) << "\n";
  os << "[cutoff-scan]\n"
     << "z = " << fmt(scan_z) << "\n"
     << "cutoffs = " << fmt_list(cutoff_grid()) << "\n";
  os << "[near-interface]\n"
     << "z = " << fmt_list(near_interface_grid()) << "\n";
  os << "[classical]\n"
     << "eps = " << fmt(liquid.eps) << "\n"
     << "E = " << fmt(liquid.E) << "\n"
     << "rho_mass = " << fmt(liquid.rho_mass) << "\n"
     << "g = " << fmt(liquid.g) << "\n";
  if (!field_state_path.empty()) os << "field_state = " << field_state_path << "\n";
  if (!force_output_path.empty()) os << "force_output = " << force_output_path << "\n";
  os << "[liquid-rise]\n"
     << "fields = " << fmt_list(liquid_fields()) << "\n";
  return os.str();
}

}  // namespace casimir::app
