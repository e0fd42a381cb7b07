#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "curvedcomb/cli/app.hpp"
#include "curvedcomb/cli/config.hpp"
#include "curvedcomb/cli/output.hpp"

using namespace curvedcomb;
using namespace curvedcomb::cli;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "curvedcomb");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("curvedcomb_test_" + name);
}

std::string write_temp(const std::string& name, const std::string& text) {
  const auto p = temp_path(name);
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config parsing is strict") {
  CHECK_NOTHROW(parse_config(json::object()));
  try {
    parse_config(json::parse(R"({"geometry": {"r_um": 100, "radius": 1}})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("geometry.radius") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config(json::parse(R"({"gap_um": "two"})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"mech": {"combs": 2.5}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"geometry": {"phi_rad": 0.2, "arc_um": 20}})")),
                  ConfigError);
  try {
    parse_config(json::parse(R"({"variants": ["planar", "wavy"]})"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("variants[1]") != std::string::npos);
  }
  try {
    mechanics(parse_config(json::parse(R"({"mech": {"k_n_per_m": -1}})")));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("mech") != std::string::npos);
  }
}

TEST_CASE("template round-trips") {
  const RunConfig c = parse_config(json::parse(default_template()));
  CHECK(c.geometry.radius_um == 100.0);
  CHECK(c.geometry.arc_um == 20.0);
  CHECK(c.mechanics.combs == 21);
  CHECK(to_json(c) == json::parse(default_template()));
  const Run r = invoke({"template"});
  CHECK(r.code == 0);
  CHECK(r.out == default_template());
}

TEST_CASE("number formatting") {
  CHECK(format_sci(1.0) == "1.0000000000000000e+00");
  CHECK(format_sci(-0.5) == "-5.0000000000000000e-01");
  CHECK(format_sci(0.125) == "1.2500000000000000e-01");
  CsvWriter w({"a", "b"});
  w.add_row({"1", "2"});
  CHECK(w.str() == "a,b\n1,2\n");
  CHECK_THROWS(w.add_row({"1"}));
}

TEST_CASE("capacitance subcommand") {
  Run r = invoke({"capacitance", "--kind", "convex", "--r-um", "100", "--phi", "0.2",
                  "--h-um", "2", "--gap-um", "2", "--verify"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("capacitance_f: 1.64210782606008") != std::string::npos);
  CHECK(r.out.find("verify: PASS") != std::string::npos);

  r = invoke({"capacitance", "--kind", "flat", "--b-um", "20", "--h-um", "2", "--gap-um", "2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("capacitance_f: 1.770799999999") != std::string::npos);

  r = invoke({"capacitance", "--kind", "concave", "--phi", "0.2", "--gap-um", "0.4"});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("edge contact") != std::string::npos);
}

TEST_CASE("usage errors") {
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"frobnicate"}).code == kExitUsage);
  CHECK(invoke({"capacitance"}).code == kExitUsage);
  CHECK(invoke({"capacitance", "--kind", "oval"}).code == kExitUsage);
  CHECK(invoke({"compare", "--phi", "0.2", "--arc-um", "20"}).code == kExitUsage);
  CHECK(invoke({"compare", "--gap-um", "abc"}).code == kExitUsage);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("config file errors are domain errors") {
  const std::string bad = write_temp("bad.json", R"({"gap_um": 2, "extra": true})");
  Run r = invoke({"compare", "--config", bad});
  CHECK(r.code == kExitDomain);
  CHECK(r.err.find("extra") != std::string::npos);
  CHECK(invoke({"compare", "--config", temp_path("missing.json").string()}).code == kExitDomain);
}

TEST_CASE("flags override the config file") {
  const std::string cfg = write_temp("gap.json", R"({"gap_um": 4, "variants": ["planar"]})");
  const Run from_file = invoke({"compare", "--config", cfg});
  const Run flag = invoke({"compare", "--config", cfg, "--gap-um", "2"});
  REQUIRE(from_file.code == 0);
  REQUIRE(flag.code == 0);
  // Planar S = V m g0 / (k d)
  CHECK(from_file.out.find("6.374322") != std::string::npos);
  CHECK(flag.out.find("1.274864") != std::string::npos);
}

TEST_CASE("gain-curve csv") {
  const Run r = invoke({"gain-curve", "--variants", "planar,biconvex", "--accel-points", "5"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "variant,accel_g,displacement_m,c1_f,c2_f,gain,v_out_v");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 10);
  CHECK(r.out.find('\r') == std::string::npos);
}

TEST_CASE("sensitivity-sweep csv is byte-identical across runs") {
  const auto a = temp_path("sweep_a.csv");
  const auto b = temp_path("sweep_b.csv");
  const auto svg = temp_path("sweep.svg");
  REQUIRE(invoke({"sensitivity-sweep", "--csv", a.string(), "--svg", svg.string()}).code == 0);
  REQUIRE(invoke({"sensitivity-sweep", "--csv", b.string()}).code == 0);
  const std::string first = slurp(a);
  CHECK(first == slurp(b));
  CHECK(first.rfind("variant,arc_length_m,radius_m,phi_rad,s_mv_per_g,s_net_mv_per_g\n", 0) == 0);
  const std::string chart = slurp(svg);
  CHECK(chart.find("<svg") == 0);
  CHECK(chart.find("biconvex") != std::string::npos);
  CHECK(chart.find("width=\"800\" height=\"600\"") != std::string::npos);
}

TEST_CASE("sensitivity-sweep verify column") {
  const Run r = invoke({"sensitivity-sweep", "--verify", "--arc-points", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find(",fd_s_mv_per_g\n") != std::string::npos);
}

TEST_CASE("sweep with no valid points") {
  const Run r = invoke({"sensitivity-sweep", "--variants", "biconcave", "--arc-min-um", "50",
                        "--arc-max-um", "60"});
  CHECK(r.code == kExitDomain);
}

TEST_CASE("compare labels the comb-count scaling") {
  const Run r = invoke({"compare"});
  CHECK(r.code == 0);
  CHECK(r.err.find("paper-scaling") != std::string::npos);
  CHECK(r.out.rfind("rank,variant,s_mv_per_g,s_net_paper_scaling_mv_per_g,ratio_to_planar\n", 0) ==
        0);
  CHECK(r.out.find("\033[") == std::string::npos);
}

TEST_CASE("maximize") {
  const Run r = invoke({"maximize", "--variants", "biconvex,biconcave"});
  CHECK(r.code == 0);
  CHECK(r.out.find("variant,arc_min_m,arc_max_m,arc_opt_m,s_mv_per_g,s_net_paper_scaling_mv_per_g\n") !=
        std::string::npos);
  CHECK(invoke({"maximize", "--variants", "biconcave", "--arc-min-um", "50"}).code == kExitDomain);
}

TEST_CASE("validate") {
  Run r = invoke({"validate", "--json"});
  CHECK(r.code == kExitOk);
  const json doc = json::parse(r.out);
  CHECK(doc["passed"] == true);
  REQUIRE(doc["suites"].size() == 3);
  CHECK(doc["suites"][0]["name"] == "quadrature");
  CHECK(doc["suites"][0]["max_error"].get<double>() < 1e-9);

  r = invoke({"validate", "--inject-fault", "1e-6"});
  CHECK(r.code == kExitVerify);
  CHECK(r.out.find("FAIL") != std::string::npos);

  r = invoke({"validate", "--phi", "0.4"});
  CHECK(r.code == kExitDomain);
  CHECK(r.out.empty());
}
