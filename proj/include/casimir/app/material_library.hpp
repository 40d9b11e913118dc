#pragma once

// Named permittivity models.
//
// Library file:
//   [material gold]
//   model = drude          # constant | drude | plasma | lorentz
//   omega_p = 1.37e16      # rad/s
//   gamma = 5.32e13        # rad/s
//
//   [material glass]
//   model = lorentz
//   oscillator = 1.0e32 1.5e16 0     # strength omega gamma, repeatable
//
//   [material dense]
//   model = constant
//   eps = 10
//
// A material reference is either a library name or an inline spec such as
// "constant 10", "drude 1.37e16 5.32e13", "plasma 9e15",
// "lorentz 1e32 1e16 0, 2e31 3e15 1e13", "vacuum" or "perfect_mirror".

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "casimir/app/ini.hpp"
#include "casimir/cavity.hpp"
#include "casimir/materials.hpp"

namespace casimir::app {

class MaterialLibrary {
 public:
  /// Library preloaded with the built-in names listed in builtin_text().
  static MaterialLibrary with_builtins() {
    MaterialLibrary lib;
    lib.load(parse_ini_string(builtin_text(), "<builtin materials>"));
    return lib;
  }

  static const char* builtin_text() {
    return R"(
[material gold-drude]
model = drude
omega_p = 1.37e16
gamma = 5.32e13

[material gold-plasma]
model = plasma
omega_p = 1.37e16

[material dilute-gap]
model = constant
eps = 1.5

[material dense-wall]
model = constant
eps = 10

# Same static permittivities as dilute-gap / dense-wall, transparent above 1e14 rad/s.
[material dilute-gap-lorentz]
model = lorentz
oscillator = 0.5e28 1e14 0

[material dense-wall-lorentz]
model = lorentz
oscillator = 9e28 1e14 0
)";
  }

  /// Adds every [material name] section; other sections are rejected.
  void load(const IniDocument& doc) {
    for (const auto& section : doc.sections) {
      if (section.name != "material") throw ConfigError(section.at, "expected [material <name>] section");
      if (section.argument.empty() || section.argument.find_first_of(" \t") != std::string::npos)
        throw ConfigError(section.at, "material name must be a single word");
      if (is_keyword(section.argument)) throw ConfigError(section.at, "'" + section.argument + "' is reserved");
      entries_.insert_or_assign(section.argument, parse_section(section));
    }
  }

  void load_file(const std::string& path) { load(parse_ini_file(path)); }

  bool contains(const std::string& name) const { return entries_.count(name) > 0; }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, model] : entries_) out.push_back(name);
    return out;
  }

  /// Resolves a wall reference (library name, inline spec, or perfect_mirror).
  WallMaterial resolve_wall(const std::string& ref, const SourceLocation& at = {}) const {
    if (trim(ref) == "perfect_mirror") return WallMaterial::perfect_mirror();
    return resolve(ref, at);
  }

  PermittivityModel resolve(const std::string& ref_in, const SourceLocation& at = {}) const {
    const std::string ref = trim(ref_in);
    if (ref == "perfect_mirror") throw ConfigError(at, "perfect_mirror is only allowed for walls");
    if (ref == "vacuum") return PermittivityModel::vacuum();
    auto it = entries_.find(ref);
    if (it != entries_.end()) return it->second;

    std::istringstream in(ref);
    std::string kind;
    in >> kind;
    std::string rest;
    std::getline(in >> std::ws, rest);
    SourceLocation args = at;
    args.column += ref.size() - rest.size();
    try {
      if (kind == "constant") return expect_count(parse_number_list(rest, args), 1, at, [](auto& v) {
          return PermittivityModel::constant(v[0]);
        });
      if (kind == "drude") return expect_count(parse_number_list(rest, args), 2, at, [](auto& v) {
          return PermittivityModel::drude(v[0], v[1]);
        });
      if (kind == "plasma") return expect_count(parse_number_list(rest, args), 1, at, [](auto& v) {
          return PermittivityModel::plasma(v[0]);
        });
      if (kind == "lorentz") {
        // Oscillators separated by ','; each is "strength omega gamma".
        std::vector<LorentzOscillator> osc;
        std::stringstream groups(rest);
        std::string group;
        while (std::getline(groups, group, ',')) {
          const auto v = parse_number_list(group, args);
          if (v.size() != 3) throw ConfigError(at, "each Lorentz oscillator needs 'strength omega gamma'");
          osc.push_back({v[0], v[1], v[2]});
        }
        return PermittivityModel::lorentz(std::move(osc));
      }
    } catch (const ParameterError& e) {
      throw ConfigError(at, e.what());
    }
    throw ConfigError(at, "unknown material '" + ref + "'");
  }

 private:
  std::map<std::string, PermittivityModel> entries_;

  static bool is_keyword(const std::string& name) {
    static const std::set<std::string> words{"vacuum", "perfect_mirror", "constant", "drude", "plasma", "lorentz"};
    return words.count(name) > 0;
  }

  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
  }

  template <class Make>
  static PermittivityModel expect_count(const std::vector<double>& v, std::size_t n, const SourceLocation& at,
                                        Make&& make) {
    if (v.size() != n) throw ConfigError(at, "expected " + std::to_string(n) + " parameter(s)");
    return make(v);
  }

  static PermittivityModel parse_section(const IniSection& section) {
    std::map<std::string, const IniEntry*> single;
    std::vector<const IniEntry*> oscillators;
    for (const auto& e : section.entries) {
      if (e.key == "oscillator") {
        oscillators.push_back(&e);
        continue;
      }
      static const std::set<std::string> known{"model", "eps", "omega_p", "gamma"};
      if (!known.count(e.key)) throw ConfigError(e.key_at, "unknown key '" + e.key + "' in material section");
      if (single.count(e.key)) throw ConfigError(e.key_at, "duplicate key '" + e.key + "'");
      single[e.key] = &e;
    }
    if (!single.count("model")) throw ConfigError(section.at, "material section needs 'model ='");
    const auto& model_entry = *single.at("model");
    const std::string& model = model_entry.value;

    auto allowed = [&](std::set<std::string> keys, bool osc_ok) {
      keys.insert("model");
      for (const auto& [key, entry] : single)
        if (!keys.count(key)) throw ConfigError(entry->key_at, "key '" + key + "' does not apply to model " + model);
      if (!osc_ok && !oscillators.empty())
        throw ConfigError(oscillators.front()->key_at, "'oscillator' applies to the lorentz model only");
    };
    auto number = [&](const std::string& key) {
      auto it = single.find(key);
      if (it == single.end()) throw ConfigError(section.at, "model " + model + " needs '" + key + " ='");
      return parse_number(it->second->value, it->second->value_at);
    };

    try {
      if (model == "constant") {
        allowed({"eps"}, false);
        return PermittivityModel::constant(number("eps"));
      }
      if (model == "drude") {
        allowed({"omega_p", "gamma"}, false);
        return PermittivityModel::drude(number("omega_p"), number("gamma"));
      }
      if (model == "plasma") {
        allowed({"omega_p"}, false);
        return PermittivityModel::plasma(number("omega_p"));
      }
      if (model == "lorentz") {
        allowed({}, true);
        std::vector<LorentzOscillator> osc;
        for (const auto* e : oscillators) {
          const auto v = parse_number_list(e->value, e->value_at);
          if (v.size() != 3) throw ConfigError(e->value_at, "oscillator needs 'strength omega gamma'");
          osc.push_back({v[0], v[1], v[2]});
        }
        return PermittivityModel::lorentz(std::move(osc));
      }
    } catch (const ParameterError& e) {
      throw ConfigError(section.at, e.what());
    }
    throw ConfigError(model_entry.value_at, "unknown model '" + model + "'");
  }
};

}  // namespace casimir::app
