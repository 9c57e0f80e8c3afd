// filterlab: command-line front end.
//
// Exit codes: 0 every requested verdict holds, 2 some verdict fails,
// 3 nothing fails but something is inconclusive, 1 usage or input errors.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "filterlab/config.hpp"
#include "filterlab/converge.hpp"
#include "filterlab/density.hpp"
#include "filterlab/dsl.hpp"
#include "filterlab/error.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/gallery.hpp"
#include "filterlab/modulus.hpp"
#include "filterlab/report.hpp"

using namespace filterlab;

namespace {

struct Globals {
  std::string horizon = "1e6";
  std::size_t dim = 100;
  double tolerance = 1e-3;
  unsigned jobs = 1;
  std::uint64_t seed = 7;
  std::string report;
  std::string format = "json";
  std::string config;
  bool timings = false;
};

struct Context {
  Globals g;
  CLI::App* app = nullptr;
  RunConfig cfg;

  bool given(const char* name) const { return app->get_option(name)->count() > 0; }

  void load() {
    if (g.config.empty()) return;
    std::ifstream in(g.config);
    if (!in) throw Error("io", "cannot read config '" + g.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = parse_config(ss.str());
    if (cfg.horizon && !given("--horizon")) g.horizon = std::to_string(*cfg.horizon);
    if (cfg.dim && !given("--dim")) g.dim = *cfg.dim;
    if (cfg.tolerance && !given("--tolerance")) g.tolerance = *cfg.tolerance;
    if (cfg.seed && !given("--seed")) g.seed = *cfg.seed;
    if (cfg.jobs && !given("--jobs")) g.jobs = static_cast<unsigned>(*cfg.jobs);
    if (cfg.report_path && !given("--report")) g.report = *cfg.report_path;
    if (cfg.format && !given("--format")) g.format = *cfg.format;
  }

  Index horizon() const { return dsl::parse_index(g.horizon); }

  DensityOptions density() const {
    DensityOptions d;
    d.tolerance = g.tolerance;
    d.zero_tolerance = g.tolerance;
    return d;
  }

  static std::string lookup(const std::map<std::string, std::string>& named, const std::string& text) {
    auto it = named.find(text);
    return it == named.end() ? text : it->second;
  }
  NatSet set(const std::string& t) const { return NatSet::parse(lookup(cfg.sets, t)); }
  NatFilter filter(const std::string& t) const { return NatFilter::parse(lookup(cfg.filters, t)); }
  std::string sequence_text(const std::string& t) const { return lookup(cfg.sequences, t); }

  ModulusFunction modulus(const std::string& t) const {
    if (!t.empty()) return parse_modulus(t);
    if (cfg.modulus_name) return parse_modulus(*cfg.modulus_name);
    if (cfg.modulus_expr) return modulus_from_expression(*cfg.modulus_expr);
    return builtin_modulus("identity");
  }

  int emit(std::string_view command, Json result, Outcome outcome) const {
    const std::string bytes = emit_report(envelope(command, std::move(result)), parse_format(g.format));
    if (g.report.empty()) std::cout << bytes;
    else write_file(g.report, bytes);
    switch (outcome) {
      case Outcome::holds: return 0;
      case Outcome::fails: return 2;
      case Outcome::inconclusive: return 3;
    }
    return 1;
  }
};

Outcome status_outcome(const std::string& s) {
  if (s == "pass") return Outcome::holds;
  if (s == "fail") return Outcome::fails;
  return Outcome::inconclusive;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  for (const auto& t : dsl::split_top_level(text)) out.push_back(dsl::parse_number(t));
  return out;
}

Vector parse_point(const std::string& text, const SpaceModel& space) {
  try {
    const double v = dsl::parse_number(text);
    return Vector::dense({v});
  } catch (const ParseError&) {
    return Vector::parse(text, space.dim());
  }
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& pairs) {
  std::map<std::string, std::string> out;
  for (const auto& p : pairs) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) throw ConfigError("parameter '" + p + "' must be key=value");
    out[dsl::trim(p.substr(0, eq))] = dsl::trim(p.substr(eq + 1));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"filterlab: filter convergence, f-densities and summability experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Context ctx;
  ctx.app = &app;
  Globals& g = ctx.g;
  app.add_option("--horizon", g.horizon, "largest index inspected")->capture_default_str();
  app.add_option("--dim", g.dim, "truncation dimension")->capture_default_str();
  app.add_option("--tolerance", g.tolerance, "density tolerance, also the zero-density tolerance")
      ->capture_default_str();
  app.add_option("--jobs", g.jobs, "worker threads for gallery run-all")->capture_default_str();
  app.add_option("--seed", g.seed, "seed for randomized inputs")->capture_default_str();
  app.add_option("--report", g.report, "write the report to this path instead of stdout");
  app.add_option("--format", g.format, "json, csv or text")->capture_default_str();
  app.add_option("--config", g.config, "configuration file");
  app.add_flag("--timings", g.timings, "add wall time to gallery reports (breaks byte identity)");

  std::function<int()> action;

  // modulus
  auto* modulus = app.add_subcommand("modulus", "modulus functions");
  modulus->require_subcommand(1);
  std::string mod_name, mod_expr;
  auto* validate = modulus->add_subcommand("validate", "check the modulus axioms on the validation grid");
  validate->add_option("--name", mod_name, "catalog name, pow(p) or expr(...)");
  validate->add_option("--expr", mod_expr, "expression in t");
  validate->callback([&] {
    action = [&] {
      const ModulusFunction f = !mod_expr.empty() ? modulus_from_expression(mod_expr) : ctx.modulus(mod_name);
      const ValidationReport r = validate_modulus(f);
      Outcome o = r.axioms_hold() ? Outcome::holds : Outcome::fails;
      if (o == Outcome::holds && !r.all_hold()) o = Outcome::inconclusive;
      return ctx.emit("modulus validate", to_json(r), o);
    };
  });
  modulus->add_subcommand("list", "catalog names")->callback([&] {
    action = [&] { return ctx.emit("modulus list", catalog_names(), Outcome::holds); };
  });

  // density
  auto* density = app.add_subcommand("density", "f-density of a set");
  std::string d_set, d_mod, d_csv;
  bool d_zero = false;
  density->add_option("--set", d_set, "set DSL or a label from [sets]")->required();
  density->add_option("--modulus", d_mod, "modulus (default from config, else identity)");
  density->add_option("--csv", d_csv, "also write (n, ratio) samples to this path");
  density->add_flag("--zero", d_zero, "decide f-density zero instead of estimating");
  density->callback([&] {
    action = [&] {
      const NatSet s = ctx.set(d_set);
      const ModulusFunction f = ctx.modulus(d_mod);
      if (d_zero) {
        const Verdict v = has_f_density_zero(s, f, ctx.horizon(), ctx.density());
        return ctx.emit("density", to_json(v), v.outcome);
      }
      const DensityEstimate e = f_density(s, f, ctx.horizon(), ctx.density());
      if (!d_csv.empty()) write_file(d_csv, samples_csv(e));
      return ctx.emit("density", to_json(e),
                      e.status == DensityStatus::inconclusive ? Outcome::inconclusive : Outcome::holds);
    };
  });

  // filter
  auto* filter = app.add_subcommand("filter", "filters on the naturals");
  filter->require_subcommand(1);
  std::string f_filter, f_set, f_one, f_two;
  for (const char* name : {"member", "stationary"}) {
    auto* sub = filter->add_subcommand(name, std::string(name) == "member" ? "is the set in F" : "does the set meet every member of F");
    sub->add_option("--filter", f_filter, "filter DSL or a label from [filters]")->required();
    sub->add_option("--set", f_set, "set DSL or a label from [sets]")->required();
    const std::string which = name;
    sub->callback([&, which] {
      action = [&, which] {
        const NatFilter f = ctx.filter(f_filter);
        const NatSet s = ctx.set(f_set);
        const Verdict v = which == "member" ? member(f, s, ctx.horizon(), ctx.density())
                                            : is_stationary(f, s, ctx.horizon(), ctx.density());
        return ctx.emit("filter " + which, to_json(v), v.outcome);
      };
    });
  }
  auto* inc = filter->add_subcommand("includes", "F1 contained in F2 on the standard testbed");
  inc->add_option("--f1", f_one, "smaller filter")->required();
  inc->add_option("--f2", f_two, "larger filter")->required();
  inc->callback([&] {
    action = [&] {
      const Verdict v = includes(ctx.filter(f_one), ctx.filter(f_two), standard_testbed(), ctx.horizon(), ctx.density());
      return ctx.emit("filter includes", to_json(v), v.outcome);
    };
  });

  // space
  auto* space = app.add_subcommand("space", "truncated sequence spaces");
  space->require_subcommand(1);
  std::string s_x, s_y, s_space = "l1", s_label;
  auto* pair = space->add_subcommand("pair", "the pairing <x, y>");
  pair->add_option("--x", s_x, "vector")->required();
  pair->add_option("--y", s_y, "vector")->required();
  pair->callback([&] {
    action = [&] {
      const Vector x = Vector::parse(s_x, g.dim), y = Vector::parse(s_y, g.dim);
      Json j;
      j["x"] = x.to_string();
      j["y"] = y.to_string();
      j["dim"] = g.dim;
      j["pairing"] = pairing(x, y);
      return ctx.emit("space pair", j, Outcome::holds);
    };
  });
  auto* semi = space->add_subcommand("seminorm", "seminorms of a vector");
  semi->add_option("--space", s_space, "space DSL")->capture_default_str();
  semi->add_option("--x", s_x, "vector")->required();
  semi->add_option("--label", s_label, "one seminorm label (default all)");
  semi->callback([&] {
    action = [&] {
      const SpaceModel sp = SpaceModel::parse(s_space, g.dim);
      const Vector x = Vector::parse(s_x, sp.dim());
      Json j;
      j["space"] = sp.to_string();
      j["x"] = x.to_string();
      Json values = Json::object();
      for (const auto& l : sp.labels())
        if (s_label.empty() || l == s_label) values[l] = sp.seminorm(l, x);
      if (!s_label.empty() && values.empty()) throw UnknownLabelError(s_label);
      j["seminorms"] = values;
      return ctx.emit("space seminorm", j, Outcome::holds);
    };
  });

  // converge
  auto* converge = app.add_subcommand("converge", "F-limits, F-Cauchy and cluster checks");
  converge->require_subcommand(1);
  std::string c_seq, c_filter = "frechet", c_space = "scalar", c_candidate, c_eps = "1,0.1,0.01,0.001", c_labels,
                     c_keys;
  for (const char* name : {"limit", "cauchy", "cluster", "audit", "sparse"}) {
    const std::string which = name;
    auto* sub = converge->add_subcommand(name, which == "limit"     ? "is the candidate an F-limit"
                                               : which == "cauchy"  ? "is the sequence F-Cauchy"
                                               : which == "cluster" ? "is the candidate an F-cluster point"
                                               : which == "audit"   ? "cluster point of an F-Cauchy sequence is its limit"
                                                                    : "per-key limits of finitely supported sequences");
    sub->add_option("--seq", c_seq, "sequence DSL or a label from [sequences]")->required();
    sub->add_option("--filter", c_filter, "filter DSL or a label from [filters]")->capture_default_str();
    sub->add_option("--eps", c_eps, "epsilon grid")->capture_default_str();
    if (which == "sparse") {
      sub->add_option("--keys", c_keys, "keys to inspect (default: union of supports)");
    } else {
      sub->add_option("--space", c_space, "space DSL")->capture_default_str();
      sub->add_option("--labels", c_labels, "seminorm labels (default all)");
    }
    if (which == "limit" || which == "cluster" || which == "audit")
      sub->add_option("--candidate", c_candidate, "candidate point")->required();
    sub->callback([&, which] {
      action = [&, which] {
        CheckOptions opts;
        opts.horizon = ctx.horizon();
        opts.eps_grid = parse_grid(c_eps);
        opts.density = ctx.density();
        if (which == "sparse") {
          const auto x = parse_sequence(ctx.sequence_text(c_seq), 0);
          std::vector<std::string> keys;
          for (const auto& k : dsl::split_top_level(c_keys)) keys.push_back(dsl::trim(k));
          if (dsl::trim(c_keys).empty()) keys.clear();
          const SparseLimit r = sparse_pointwise_limit(*x, ctx.filter(c_filter), keys, opts);
          return ctx.emit("converge sparse", to_json(r), r.verdict.outcome);
        }
        const SpaceModel sp = SpaceModel::parse(c_space, g.dim);
        for (const auto& l : dsl::split_top_level(c_labels))
          if (!dsl::trim(l).empty()) opts.labels.push_back(dsl::trim(l));
        const auto x = parse_sequence(ctx.sequence_text(c_seq), sp.dim());
        const NatFilter f = ctx.filter(c_filter);
        Verdict v;
        if (which == "cauchy") v = f_cauchy_check(*x, f, sp, opts);
        else if (which == "limit") v = f_limit_check(*x, parse_point(c_candidate, sp), f, sp, opts);
        else if (which == "cluster") v = cluster_point_check(*x, parse_point(c_candidate, sp), f, sp, opts);
        else v = cluster_implies_limit_audit(*x, parse_point(c_candidate, sp), f, sp, opts);
        return ctx.emit("converge " + which, to_json(v), v.outcome);
      };
    });
  }

  // gallery
  auto* gal = app.add_subcommand("gallery", "reproducible experiments");
  gal->require_subcommand(1);
  gal->add_subcommand("list", "experiments and their parameters")->callback([&] {
    action = [&] {
      Json all = Json::array();
      for (const auto& e : gallery()) {
        Json j;
        j["name"] = e.name;
        j["summary"] = e.summary;
        Json params = Json::array();
        for (const auto& p : e.params) params.push_back({{"key", p.key}, {"default", p.default_value}, {"help", p.help}});
        j["parameters"] = params;
        all.push_back(j);
      }
      return ctx.emit("gallery list", all, Outcome::holds);
    };
  });
  std::string g_name;
  std::vector<std::string> g_params;
  auto* run = gal->add_subcommand("run", "run one experiment");
  run->add_option("name", g_name, "experiment name")->required();
  run->add_option("--param,-p", g_params, "key=value overrides");
  run->callback([&] {
    action = [&] {
      auto values = ctx.cfg.experiments[g_name];
      for (auto& [k, v] : parse_params(g_params)) values[k] = v;
      const ExperimentReport r = run_experiment(g_name, values, g.seed, g.timings);
      return ctx.emit("gallery run", r.to_json(), status_outcome(r.status()));
    };
  });
  gal->add_subcommand("run-all", "run every experiment")->callback([&] {
    action = [&] {
      const auto reports = run_all(ctx.cfg.experiments, g.seed, g.jobs, g.timings);
      Json all = Json::array();
      Outcome o = Outcome::holds;
      for (const auto& r : reports) {
        all.push_back(r.to_json());
        o = conjunction(o, status_outcome(r.status()));
      }
      return ctx.emit("gallery run-all", all, o);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }
  try {
    ctx.load();
    (void)parse_format(g.format);
    return action ? action() : 1;
  } catch (const ConfigParseError& e) {
    std::cerr << "error[config]: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
