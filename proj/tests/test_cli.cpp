#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "lkpos/json_io.hpp"

using namespace lkpos;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("lkpos_cli_" + name);
  std::ofstream(path) << content;
  return path.string();
}

Json without_timing(Json j) {
  j.erase("timing_ms");
  return j;
}

}  // namespace

TEST_CASE("reflection negativity of |t|^alpha") {
  CHECK(run({"check-rn", "--function", "catalog:abs_power", "--alpha", "0.5"}).code == 0);
  const Run r = run({"check-rn", "--function", "catalog:abs_power", "--alpha", "1.5", "--json"});
  CHECK(r.code == 1);
  const Json j = parse_json(r.out);
  CHECK(j["verdict"] == "FAIL");
  const Json& detail = j["results"][0]["detail"];
  const bool has_witness = !detail["minus"]["witness"].empty() || !detail["plus"]["witness"].empty() ||
                           (detail.contains("bernstein") && !detail["bernstein"]["witness"].empty());
  CHECK(has_witness);
}

TEST_CASE("synth log1p measure gives log 2") {
  const std::string rep =
      temp_file("log1p.json", R"({"a":0,"b":0,"sigma":{"atoms":[],"density":null,"terms":[{"coeff":1,"power":-1,"rate":1}]}})");
  const Run r = run({"synth", "--form", "bernstein", "--rep", rep, "--t", "1.0", "--json"});
  REQUIRE(r.code == 0);
  const Json j = parse_json(r.out);
  const double v = j["results"][0]["detail"]["values"][0]["value"].get<double>();
  CHECK(std::abs(v - std::log(2.0)) < 1e-9);
  const Run human = run({"synth", "--form", "bernstein", "--rep", rep, "--t", "1.0"});
  CHECK(human.out.find("0.693147") != std::string::npos);
}

TEST_CASE("exit codes for checks") {
  CHECK(run({"check-pd", "--function", "catalog:neg_power"}).code == 0);
  CHECK(run({"check-pd", "--function", "catalog:green", "--interval=-2,2"}).code == 1);
  CHECK(run({"check-nd", "--function", "catalog:log"}).code == 0);
  CHECK(run({"check-nd", "--function", "catalog:power", "--alpha", "2"}).code == 1);
  CHECK(run({"check-cm", "--function", "catalog:exp"}).code == 0);
  CHECK(run({"check-cm", "--function", "catalog:cosh"}).code == 1);
  CHECK(run({"check-bernstein", "--function", "catalog:power", "--alpha", "0.5"}).code == 0);
  CHECK(run({"check-bernstein", "--function", "catalog:power", "--alpha", "1.5"}).code == 1);
  CHECK(run({"check-rp", "--function", "catalog:thermal_green"}).code == 0);
  CHECK(run({"check-rp", "--function", "catalog:cosh"}).code == 1);
  CHECK(run({"hankel", "--function", "catalog:exp", "--n", "3", "--shifted"}).code == 0);
  CHECK(run({"hankel", "--function", "catalog:cosh", "--n", "3"}).code == 0);
  CHECK(run({"hankel", "--function", "catalog:cosh", "--n", "3", "--shifted"}).code == 1);
  CHECK(run({"polya", "--function", "catalog:green"}).code == 0);
  CHECK(run({"gallery", "--check"}).code == 0);
}

TEST_CASE("inconclusive maps to 3") {
  // Density known on [0, 1] with support claimed up to 10 and no tail bound.
  const std::string rep = temp_file(
      "gap.json",
      R"({"form":"laplace","mu":{"atoms":[],"density":{"grid":[0,0.5,1],"values":[1,1,1]},"support":[0,10]}})");
  const Run r = run({"check-pd", "--rep", rep, "--interval", "0.5,2"});
  CHECK(r.code == 3);
}

TEST_CASE("usage errors map to 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"check-pd"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:nope"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:power", "--alpha", "x"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:power", "--interval", "3,1"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:power", "--points", "0"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:power", "--grid-kind", "sobol"}).code == 2);
  CHECK(run({"check-rn", "--function", "catalog:abs_power", "--h-list", "0,1"}).code == 2);
  CHECK(run({"check-pd", "--function", "catalog:log1p", "--beta", "2"}).code == 2);
  const std::string broken = temp_file("broken.json", R"({"a": 1, "sigma": {"atoms": [)");
  const Run r = run({"synth", "--form", "bernstein", "--rep", broken, "--t", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("JSON") != std::string::npos);
  CHECK(run({"synth", "--form", "bernstein", "--rep", "/nonexistent/rep.json"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("analyze") {
  const Run ok = run({"analyze", "--form", "increasing", "--function", "catalog:log1p", "--json"});
  REQUIRE(ok.code == 0);
  const Json j = parse_json(ok.out);
  CHECK(std::abs(j["results"][0]["detail"]["rep"]["c"].get<double>() - std::log(2.0)) < 1e-8);
  CHECK(run({"analyze", "--form", "increasing", "--function", "catalog:cosh", "--interval", "0,4"}).code == 1);
  const Run iv = run({"analyze", "--form", "interval", "--function", "catalog:neg_tlogt", "--t", "1", "--json"});
  REQUIRE(iv.code == 0);
  const Json k = parse_json(iv.out);
  CHECK(std::abs(k["results"][0]["detail"]["rep"]["d"].get<double>() + 1.0) < 1e-8);
}

TEST_CASE("thm59 from a measure file") {
  const double e1 = std::exp(-1.0);
  std::ostringstream bad, good;
  bad.precision(17);
  good.precision(17);
  bad << R"({"atoms":[{"lambda":1,"weight":1},{"lambda":-1,"weight":)" << 1.2 * e1 << "}]}";
  good << R"({"atoms":[{"lambda":1,"weight":1},{"lambda":-1,"weight":)" << std::exp(-2.0) << "}]}";
  CHECK(run({"thm59", "--rep", temp_file("bad.json", bad.str()), "--a", "1"}).code == 1);
  const Run r = run({"thm59", "--rep", temp_file("good.json", good.str()), "--a", "1", "--json"});
  CHECK(r.code == 0);
  const Json j = parse_json(r.out);
  CHECK(j["results"][1]["detail"]["sufficient"] == true);
}

TEST_CASE("reports round trip and are deterministic") {
  const std::vector<std::vector<std::string>> cases = {
      {"check-rn", "--function", "catalog:abs_power", "--alpha", "1.5", "--json"},
      {"check-pd", "--function", "catalog:green", "--grid-kind", "random", "--seed", "11", "--json"},
      {"gallery", "--json"},
      {"synth", "--function", "catalog:log1p", "--json"},
  };
  for (const auto& args : cases) {
    const Run a = run(args), b = run(args);
    const Json ja = parse_json(a.out);
    CHECK(render(ja) + "\n" == a.out);
    CHECK(render(without_timing(ja)) == render(without_timing(parse_json(b.out))));
    CHECK(ja["version"].is_string());
    CHECK(ja.contains("inputs"));
  }
}

TEST_CASE("csv table") {
  const auto path = std::filesystem::temp_directory_path() / "lkpos_cli_table.csv";
  std::filesystem::remove(path);
  REQUIRE(run({"synth", "--function", "catalog:ratio", "--points", "5", "--csv", path.string()}).code == 0);
  std::ifstream in(path);
  std::string header, line;
  std::getline(in, header);
  CHECK(header == "t,value");
  int rows = 0;
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    const double t = std::stod(line.substr(0, comma)), v = std::stod(line.substr(comma + 1));
    CHECK(std::abs(v - t / (1.0 + t)) < 1e-9);
    ++rows;
  }
  CHECK(rows == 5);
}
