#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "filterlab/config.hpp"
#include "filterlab/density.hpp"
#include "filterlab/filters.hpp"
#include "filterlab/report.hpp"

using namespace filterlab;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(FILTERLAB_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("shipped configs round-trip") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(std::string(FILTERLAB_SOURCE_DIR) + "/configs")) {
    if (entry.path().extension() != ".ini") continue;
    CAPTURE(entry.path().string());
    const RunConfig c = parse_config(slurp(entry.path()));
    const std::string text = emit_config(c);
    CHECK(parse_config(text) == c);
    CHECK(emit_config(parse_config(text)) == text);
    ++seen;
  }
  CHECK(seen >= 3);
}

TEST_CASE("minimal config keeps defaults") {
  const RunConfig c = parse_config("horizon = 1e6\n");
  CHECK(c.horizon == 1'000'000u);
  CHECK_FALSE(c.dim);
  CHECK(c.sets.empty());
  CHECK(c.experiments.empty());
}

TEST_CASE("named filter round-trips through the filter language") {
  const RunConfig c = parse_config("[filters]\nflog = fstat(log1p)\n");
  const NatFilter f = NatFilter::parse(c.filters.at("flog"));
  CHECK(NatFilter::parse(f.to_string()).to_string() == f.to_string());
  CHECK(member(f, NatSet::parse("compl(cubes)"), 1'000'000).outcome ==
        member(NatFilter::parse("fstat(log1p)"), NatSet::parse("compl(cubes)"), 1'000'000).outcome);
}

TEST_CASE("t*t is rejected with its subadditivity witness") {
  for (const char* text : {"modulus.expr = \"t*t\"\n", "\n[modulus]\nexpr = t*t\n"}) {
    try {
      parse_config(text);
      FAIL("accepted");
    } catch (const ConfigParseError& e) {
      REQUIRE(e.issues().size() == 1);
      CHECK(e.issues()[0].message.find("subadditive") != std::string::npos);
      CHECK(e.issues()[0].message.find("(1, 1)") != std::string::npos);
      CHECK(e.issues()[0].line == (text[0] == '\n' ? 3u : 1u));
    }
  }
}

TEST_CASE("config errors carry line numbers") {
  try {
    parse_config("horizon = 1e6\nhorizn = 3\n[sets]\nbad = union(squares\n[experiment.inclusion]\nmoduli = log1p\nfoo = 1\n[nowhere]\nx = 1\n");
    FAIL("accepted");
  } catch (const ConfigParseError& e) {
    std::vector<std::size_t> lines;
    for (const auto& i : e.issues()) lines.push_back(i.line);
    CHECK(lines == std::vector<std::size_t>{2, 4, 7, 9});
  }
  CHECK_THROWS_AS(parse_config("[experiment.nope]\nx = 1\n"), ConfigParseError);
  CHECK_THROWS_AS(parse_config("horizon\n"), ConfigParseError);
}

TEST_CASE("report emission") {
  const DensityEstimate e = f_density(NatSet::parse("evens"), builtin_modulus("identity"), 10000);
  const Json env = envelope("density", to_json(e));
  const std::string json = emit_report(env, ReportFormat::json);
  CHECK(json == emit_report(envelope("density", to_json(e)), ReportFormat::json));
  const Json back = Json::parse(json);
  CHECK(back["version"] == "0.1.0");
  CHECK(back["result"].contains("value"));
  CHECK(back["result"].contains("status"));
  CHECK(back["result"].contains("samples"));
  const std::string csv = emit_report(env, ReportFormat::csv);
  CHECK(csv.rfind("n,ratio\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(e.samples.size()) + 1);
  CHECK(emit_report(env, ReportFormat::text).find("status: converged") != std::string::npos);
  CHECK_THROWS_AS(parse_format("yaml"), ConfigError);
  CHECK_THROWS_AS(write_file("/nonexistent/dir/x.json", "{}"), Error);
}

TEST_CASE("exit codes") {
  CHECK(cli("modulus validate --name log1p") == 0);
  CHECK(cli("modulus validate --expr 't*t'") == 2);
  CHECK(cli("modulus validate --name bounded_rational") == 0);
  CHECK(cli("filter member --filter stat --set 'compl(cubes)'") == 0);
  CHECK(cli("filter member --filter stat --set evens") == 2);
  CHECK(cli("filter member --filter stat --set 'compl(squares)' --horizon 1e6") == 3);
  CHECK(cli("converge limit --seq 'scalar((-1)^n)' --candidate 1 --filter stat --horizon 1e4") == 2);
  CHECK(cli("converge cauchy --seq 'scalar(1/n)' --horizon 1e4") == 0);
  CHECK(cli("gallery run composition_identity --horizon 1e4") == 0);
  CHECK(cli("gallery run nope") == 1);
  CHECK(cli("density --set 'union(squares'") == 1);
}
