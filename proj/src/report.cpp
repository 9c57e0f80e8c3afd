#include "filterlab/report.hpp"

#include <fstream>
#include <sstream>

#include "filterlab/error.hpp"

namespace filterlab {

namespace {

std::string csv_cell(const Json& v) {
  std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_row(std::ostringstream& out, std::initializer_list<Json> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << csv_cell(c);
    first = false;
  }
  out << '\n';
}

const Json& unwrap(const Json& r) { return r.is_object() && r.contains("result") ? r["result"] : r; }

bool is_experiment(const Json& j) { return j.is_object() && j.contains("sub_verdicts"); }

std::string emit_csv(const Json& report) {
  const Json& r = unwrap(report);
  std::ostringstream out;
  if (r.is_object() && r.contains("samples") && r["samples"].is_array()) {
    out << "n,ratio\n";
    for (const auto& s : r["samples"]) csv_row(out, {s[0], s[1]});
  } else if (is_experiment(r) || (r.is_array() && !r.empty() && is_experiment(r[0]))) {
    out << "experiment,status,label,outcome,reason\n";
    const Json all = r.is_array() ? r : Json::array({r});
    for (const auto& e : all)
      for (const auto& v : e["sub_verdicts"]) csv_row(out, {e["name"], e["status"], v["label"], v["outcome"], v["reason"]});
  } else if (r.is_object() && r.contains("outcome")) {
    out << "check,outcome,detail\n";
    csv_row(out, {"overall", r["outcome"], r.value("reason", "")});
    const Json& diag = r.value("diagnostics", Json::object());
    if (diag.contains("checks"))
      for (const auto& c : diag["checks"]) {
        Json label = c.value("label", Json(""));
        if (c.contains("eps")) label = label.get<std::string>() + "@" + c["eps"].dump();
        csv_row(out, {label, c.value("outcome", ""), c.value("reason", "")});
      }
  } else if (r.is_object()) {
    out << "key,value\n";
    for (const auto& [k, v] : r.items()) csv_row(out, {k, v});
  } else {
    out << "value\n";
    csv_row(out, {r});
  }
  return out.str();
}

void text_verdicts(std::ostringstream& out, const Json& verdicts, const std::string& indent) {
  for (const auto& v : verdicts)
    out << indent << "[" << v["outcome"].get<std::string>() << "] " << v["label"].get<std::string>() << ": "
        << v["reason"].get<std::string>() << '\n';
}

std::string emit_text(const Json& report) {
  std::ostringstream out;
  if (report.is_object() && report.contains("tool"))
    out << report["tool"].get<std::string>() << " " << report["version"].get<std::string>() << " "
        << report.value("command", "") << '\n';
  const Json& r = unwrap(report);
  const Json all = r.is_array() ? r : Json::array({r});
  for (const auto& e : all) {
    if (is_experiment(e)) {
      out << e["name"].get<std::string>() << ": " << e["status"].get<std::string>() << '\n';
      out << "  " << e["summary"].get<std::string>() << '\n';
      if (e.contains("notes"))
        for (const auto& n : e["notes"]) out << "  note: " << n.get<std::string>() << '\n';
      text_verdicts(out, e["sub_verdicts"], "  ");
    } else if (e.is_object() && e.contains("outcome") && e.contains("reason")) {
      out << e["outcome"].get<std::string>() << ": " << e["reason"].get<std::string>() << '\n';
      if (e.contains("warnings"))
        for (const auto& w : e["warnings"]) out << "  warning: " << w.get<std::string>() << '\n';
    } else if (e.is_object()) {
      for (const auto& [k, v] : e.items())
        if (k != "samples") out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    } else {
      out << e.dump() << '\n';
    }
  }
  return out.str();
}

}  // namespace

ReportFormat parse_format(std::string_view text) {
  if (text == "json") return ReportFormat::json;
  if (text == "csv") return ReportFormat::csv;
  if (text == "text") return ReportFormat::text;
  throw ConfigError("unknown format '" + std::string(text) + "'; expected json, csv or text");
}

Json envelope(std::string_view command, Json result) {
  Json j;
  j["tool"] = "filterlab";
  j["version"] = std::string(kVersion);
  j["command"] = std::string(command);
  j["result"] = std::move(result);
  return j;
}

std::string emit_report(const Json& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::json: return report.dump(2) + "\n";
    case ReportFormat::csv: return emit_csv(report);
    case ReportFormat::text: return emit_text(report);
  }
  return {};
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("io", "cannot write '" + path + "'");
  f << bytes;
  if (!f.flush()) throw Error("io", "cannot write '" + path + "'");
}

}  // namespace filterlab
