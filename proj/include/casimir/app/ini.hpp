#pragma once

// Minimal sectioned key = value reader used for run configurations and
// material libraries.
//
//   # comment            ; comment
//   [section]            [section argument]
//   key = value          trailing " # ..." is stripped
//
// Keys may repeat; the caller decides whether that is allowed.

#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace casimir::app {

struct SourceLocation {
  std::string source;
  std::size_t line = 0;
  std::size_t column = 0;

  std::string str() const { return source + ":" + std::to_string(line) + ":" + std::to_string(column); }
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const SourceLocation& where, const std::string& what)
      : std::runtime_error(where.str() + ": " + what), where_(where) {}
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
  const SourceLocation& where() const noexcept { return where_; }

 private:
  SourceLocation where_;
};

struct IniEntry {
  std::string key;
  std::string value;
  SourceLocation key_at;
  SourceLocation value_at;
};

struct IniSection {
  std::string name;
  std::string argument;  // "[material gold]" -> name "material", argument "gold"
  SourceLocation at;
  std::vector<IniEntry> entries;
};

struct IniDocument {
  std::vector<IniSection> sections;
};

namespace detail {
inline std::size_t first_non_space(const std::string& s, std::size_t from = 0) {
  while (from < s.size() && (s[from] == ' ' || s[from] == '\t')) ++from;
  return from;
}
inline std::string trim_right(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
  return s;
}
}  // namespace detail

inline IniDocument parse_ini(std::istream& in, const std::string& source) {
  IniDocument doc;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = detail::trim_right(raw);
    const std::size_t start = detail::first_non_space(line);
    if (start == line.size() || line[start] == '#' || line[start] == ';') continue;
    SourceLocation at{source, line_no, start + 1};

    if (line[start] == '[') {
      const std::size_t close = line.find(']', start);
      if (close == std::string::npos) throw ConfigError(at, "missing ']' in section header");
      const std::size_t after = detail::first_non_space(line, close + 1);
      if (after != line.size() && line[after] != '#' && line[after] != ';')
        throw ConfigError({source, line_no, after + 1}, "unexpected text after section header");
      std::istringstream header(line.substr(start + 1, close - start - 1));
      IniSection section;
      section.at = at;
      header >> section.name;
      std::string rest;
      std::getline(header >> std::ws, rest);
      section.argument = detail::trim_right(rest);
      if (section.name.empty()) throw ConfigError(at, "empty section name");
      doc.sections.push_back(std::move(section));
      continue;
    }

    const std::size_t eq = line.find('=', start);
    if (eq == std::string::npos) throw ConfigError(at, "expected 'key = value'");
    if (doc.sections.empty()) throw ConfigError(at, "key outside of any section");
    IniEntry entry;
    entry.key = detail::trim_right(line.substr(start, eq - start));
    entry.key_at = at;
    if (entry.key.empty()) throw ConfigError(at, "empty key");
    if (entry.key.find_first_of(" \t") != std::string::npos) throw ConfigError(at, "key contains whitespace");
    const std::size_t vstart = detail::first_non_space(line, eq + 1);
    entry.value_at = {source, line_no, vstart + 1};
    std::string value = line.substr(vstart);
    for (std::size_t i = 0; i < value.size(); ++i) {
      if ((value[i] == '#' || value[i] == ';') && i > 0 && (value[i - 1] == ' ' || value[i - 1] == '\t')) {
        value.resize(i);
        break;
      }
    }
    entry.value = detail::trim_right(value);
    doc.sections.back().entries.push_back(std::move(entry));
  }
  return doc;
}

inline IniDocument parse_ini_string(const std::string& text, const std::string& source = "<string>") {
  std::istringstream in(text);
  return parse_ini(in, source);
}

inline IniDocument parse_ini_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_ini(in, path);
}

/// Strict number parsing; the whole token must be consumed.
inline double parse_number(const std::string& token, const SourceLocation& at) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ConfigError(at, "expected a number, got '" + token + "'");
  }
  if (used != token.size()) throw ConfigError(at, "expected a number, got '" + token + "'");
  return v;
}

/// Whitespace- or comma-separated list of numbers.
inline std::vector<double> parse_number_list(const std::string& text, const SourceLocation& at) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == ',')) ++i;
    if (i == text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t' && text[j] != ',') ++j;
    SourceLocation here = at;
    here.column += i;
    out.push_back(parse_number(text.substr(i, j - i), here));
    i = j;
  }
  if (out.empty()) throw ConfigError(at, "expected at least one number");
  return out;
}

inline bool parse_bool(const std::string& token, const SourceLocation& at) {
  if (token == "true" || token == "1" || token == "yes" || token == "on") return true;
  if (token == "false" || token == "0" || token == "no" || token == "off") return false;
  throw ConfigError(at, "expected true/false, got '" + token + "'");
}

}  // namespace casimir::app
