#pragma once

// Built-in run configurations. Each preset is ordinary config text applied
// before any --config file.

#include <map>
#include <string>
#include <vector>

#include "casimir/app/config.hpp"

namespace casimir::app {

inline const std::map<std::string, std::string>& preset_texts() {
  static const std::map<std::string, std::string> presets{
      {"ideal-metal-vacuum", R"(
[cavity]
gap_width = 1e-6
temperature = 0
wall = perfect_mirror
gap = vacuum

[pressure]
gap_widths = 1e-7 1e-6 1e-5
temperatures = 0 300

[rw-profile]
points = 21

[cutoff-scan]
z = 5e-7
cutoffs = 1e8 2e8 5e8 1e9
)"},
      {"dilute-gap-demo", R"(
[cavity]
gap_width = 1e-6
temperature = 300
wall = dense-wall
gap = dilute-gap

[pressure]
gap_widths = 5e-7 1e-6 2e-6

[rw-profile]
points = 21

[cutoff-scan]
z = 5e-7
cutoffs = 1e8 2e8 5e8 1e9
)"},
      {"dilute-gap-dispersive", R"(
[cavity]
gap_width = 1e-6
temperature = 300
wall = dense-wall-lorentz
gap = dilute-gap-lorentz

[pressure]
gap_widths = 5e-7 1e-6 2e-6

[rw-profile]
points = 21

[cutoff-scan]
z = 0
cutoffs = 1e8 1.5848931924611135e8 2.5118864315095801e8 3.9810717055349724e8 6.3095734448019326e8 1e9
)"},
      {"gold-vacuum", R"(
[cavity]
gap_width = 1e-6
temperature = 300
wall = gold-drude
gap = vacuum

[pressure]
gap_widths = 1e-7 1e-6 1e-5
)"},
      {"water-condenser", R"(
[classical]
eps = 80
E = 1e6
rho_mass = 1000
g = 9.81

[liquid-rise]
eps = 80
fields = 1e5 3e5 1e6
)"},
  };
  return presets;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [name, text] : preset_texts()) out.push_back(name);
  return out;
}

inline void apply_preset(RunConfig& cfg, const std::string& name) {
  const auto& presets = preset_texts();
  auto it = presets.find(name);
  if (it == presets.end()) throw ConfigError("unknown preset '" + name + "'");
  apply_config(cfg, parse_ini_string(it->second, "<preset " + name + ">"));
}

}  // namespace casimir::app
