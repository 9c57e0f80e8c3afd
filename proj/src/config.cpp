#include "filterlab/config.hpp"

#include <sstream>

#include "filterlab/dsl.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/gallery.hpp"
#include "filterlab/modulus.hpp"
#include "filterlab/natset.hpp"
#include "filterlab/sequence.hpp"

namespace filterlab {

namespace {

std::string render(const std::vector<ConfigIssue>& issues) {
  std::string out = "invalid configuration";
  for (const auto& i : issues) out += "\n  line " + std::to_string(i.line) + ": " + i.message;
  return out;
}

std::string unquote(std::string v) {
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#' || c == ';') {
      return line.substr(0, i);
    }
  }
  return line;
}

bool valid_label(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
  return true;
}

std::string quoted(const std::string& v) {
  // Values with comment characters or outer whitespace need quotes.
  const bool needs = v.empty() || v.find_first_of("#;\"'") != std::string::npos || dsl::trim(v) != v;
  if (!needs) return v;
  return v.find('"') == std::string::npos ? "\"" + v + "\"" : "'" + v + "'";
}

struct Parser {
  RunConfig cfg;
  std::vector<ConfigIssue> issues;
  std::size_t line = 0;
  std::map<std::string, std::size_t> seen;

  void issue(std::string msg) { issues.push_back({line, std::move(msg)}); }

  template <class F>
  void guarded(F&& f) {
    try {
      f();
    } catch (const Error& e) {
      issue(e.what());
    }
  }

  void assign(const std::string& section, const std::string& key, const std::string& value) {
    const std::string full = section.empty() ? key : section + "." + key;
    if (auto [it, inserted] = seen.emplace(full, line); !inserted) {
      issue("duplicate key '" + full + "' (first set on line " + std::to_string(it->second) + ")");
      return;
    }
    if (section.empty()) {
      const auto dot = key.find('.');
      if (dot != std::string::npos && key.rfind("experiment.", 0) != 0) {
        seen.erase(full);
        assign(key.substr(0, dot), key.substr(dot + 1), value);
        return;
      }
      if (key.rfind("experiment.", 0) == 0) {
        const auto last = key.rfind('.');
        seen.erase(full);
        assign(key.substr(0, last), key.substr(last + 1), value);
        return;
      }
      guarded([&] {
        if (key == "horizon") cfg.horizon = dsl::parse_index(value);
        else if (key == "dim") cfg.dim = dsl::parse_index(value);
        else if (key == "tolerance") cfg.tolerance = dsl::parse_number(value);
        else if (key == "seed") cfg.seed = dsl::parse_index(value);
        else if (key == "jobs") cfg.jobs = dsl::parse_index(value);
        else issue("unknown key '" + key + "'; expected horizon, dim, tolerance, seed or jobs");
      });
    } else if (section == "modulus") {
      if (key == "name") {
        guarded([&] {
          (void)parse_modulus(value);
          cfg.modulus_name = value;
        });
      } else if (key == "expr") {
        guarded([&] { check_expression(value); });
        cfg.modulus_expr = value;
      } else {
        issue("unknown key 'modulus." + key + "'; expected name or expr");
      }
    } else if (section == "sets" || section == "filters" || section == "sequences") {
      if (!valid_label(key)) return issue("invalid label '" + key + "'");
      guarded([&] {
        if (section == "sets") {
          (void)NatSet::parse(value);
          cfg.sets[key] = value;
        } else if (section == "filters") {
          (void)NatFilter::parse(value);
          cfg.filters[key] = value;
        } else {
          (void)parse_sequence(value, cfg.dim.value_or(100));
          cfg.sequences[key] = value;
        }
      });
    } else if (section == "output") {
      if (key == "report") cfg.report_path = value;
      else if (key == "format") {
        if (value != "json" && value != "csv" && value != "text")
          issue("format must be json, csv or text");
        else
          cfg.format = value;
      } else {
        issue("unknown key 'output." + key + "'; expected report or format");
      }
    } else if (section.rfind("experiment.", 0) == 0) {
      const std::string name = section.substr(11);
      guarded([&] {
        const Experiment& e = find_experiment(name);
        bool known = false;
        for (const auto& s : e.params) known = known || s.key == key;
        if (!known) issue("unknown parameter '" + key + "' for experiment " + name);
        else cfg.experiments[name][key] = value;
      });
    } else {
      issue("unknown section '" + section + "'");
    }
  }

  void check_expression(const std::string& expr) {
    const ModulusFunction f = modulus_from_expression(expr);
    const ValidationReport r = validate_modulus(f);
    for (const auto& a : r.axioms) {
      if (a.outcome != Outcome::fails) continue;
      std::string msg = "modulus expression '" + expr + "' fails " + a.axiom;
      if (a.witness)
        msg += " with witness (" + dsl::format_number(a.witness->first) + ", " +
               dsl::format_number(a.witness->second) + ")";
      if (!a.detail.empty()) msg += ": " + a.detail;
      issue(msg);
    }
  }
};

}  // namespace

ConfigParseError::ConfigParseError(std::vector<ConfigIssue> issues)
    : ConfigError(render(issues)), issues_(std::move(issues)) {}

RunConfig parse_config(std::string_view text) {
  Parser p;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  // Sets are validated before filters that may name them, so collect first.
  struct Entry {
    std::size_t line;
    std::string section, key, value;
  };
  std::vector<Entry> entries;
  while (std::getline(in, raw)) {
    ++p.line;
    const std::string l = dsl::trim(strip_comment(raw));
    if (l.empty()) continue;
    if (l.front() == '[') {
      if (l.back() != ']') {
        p.issue("unterminated section header");
        continue;
      }
      section = dsl::trim(l.substr(1, l.size() - 2));
      if (section.empty()) p.issue("empty section name");
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) {
      p.issue("expected 'key = value'");
      continue;
    }
    const std::string key = dsl::trim(l.substr(0, eq));
    if (key.empty()) {
      p.issue("missing key");
      continue;
    }
    entries.push_back({p.line, section, key, unquote(dsl::trim(l.substr(eq + 1)))});
  }
  // Dimension first: sequence validation depends on it.
  for (const auto& e : entries) {
    if (e.section.empty() && e.key == "dim") {
      p.line = e.line;
      p.assign(e.section, e.key, e.value);
    }
  }
  for (const auto& e : entries) {
    if (e.section.empty() && e.key == "dim") continue;
    p.line = e.line;
    p.assign(e.section, e.key, e.value);
  }
  if (p.cfg.modulus_name && p.cfg.modulus_expr) {
    p.line = 0;
    p.issue("[modulus] takes name or expr, not both");
  }
  if (!p.issues.empty()) throw ConfigParseError(std::move(p.issues));
  return p.cfg;
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream out;
  if (c.horizon) out << "horizon = " << *c.horizon << "\n";
  if (c.dim) out << "dim = " << *c.dim << "\n";
  if (c.tolerance) out << "tolerance = " << dsl::format_number(*c.tolerance) << "\n";
  if (c.seed) out << "seed = " << *c.seed << "\n";
  if (c.jobs) out << "jobs = " << *c.jobs << "\n";
  if (c.modulus_name || c.modulus_expr) {
    out << "\n[modulus]\n";
    if (c.modulus_name) out << "name = " << quoted(*c.modulus_name) << "\n";
    if (c.modulus_expr) out << "expr = " << quoted(*c.modulus_expr) << "\n";
  }
  const auto block = [&](const char* name, const std::map<std::string, std::string>& m) {
    if (m.empty()) return;
    out << "\n[" << name << "]\n";
    for (const auto& [k, v] : m) out << k << " = " << quoted(v) << "\n";
  };
  block("sets", c.sets);
  block("filters", c.filters);
  block("sequences", c.sequences);
  if (c.report_path || c.format) {
    out << "\n[output]\n";
    if (c.report_path) out << "report = " << quoted(*c.report_path) << "\n";
    if (c.format) out << "format = " << *c.format << "\n";
  }
  for (const auto& [name, params] : c.experiments) block(("experiment." + name).c_str(), params);
  std::string s = out.str();
  if (!s.empty() && s.front() == '\n') s.erase(0, 1);
  return s;
}

}  // namespace filterlab
