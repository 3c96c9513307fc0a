#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "catamp/scenario.hpp"

using namespace catamp;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("catamp_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

int run_tool(const std::string& args) {
  const std::string cmd = std::string(CAT_AMP_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& body) {
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("engineering notation") {
  CHECK(parse_engineering("6G", "f") == doctest::Approx(6e9));
  CHECK(parse_engineering("3.58u", "f") == doctest::Approx(3.58e-6));
  CHECK(parse_engineering("250", "f") == 250.0);
  CHECK(parse_engineering("0.25k", "f") == doctest::Approx(250.0));
  CHECK(parse_engineering("2m", "f") == doctest::Approx(2e-3));
  CHECK(parse_engineering("1e-8", "f") == doctest::Approx(1e-8));
  CHECK(parse_engineering(Json(12.5), "f") == 12.5);
  CHECK_THROWS_AS(parse_engineering("fast", "f"), ConfigError);
  CHECK_THROWS_AS(parse_engineering("", "f"), ConfigError);
  CHECK_THROWS_AS(parse_engineering("1.5x", "f"), ConfigError);
  CHECK_THROWS_AS(parse_engineering(Json(true), "f"), ConfigError);
}

TEST_CASE("CSV formatting") {
  CsvTable t({"a", "b,c"});
  t.add_row(std::vector<double>{1.0 / 3.0, 2.0});
  t.add_row(std::vector<std::string>{"x\"y", "plain"});
  CHECK(t.str() == "a,\"b,c\"\r\n0.333333333,2\r\n\"x\"\"y\",plain\r\n");
  CHECK(format_number(123456789.123) == "123456789");
  CHECK(format_number(0.0) == "0");
  CHECK_THROWS_AS(t.add_row(std::vector<double>{1.0}), InvalidArgument);
}

TEST_CASE("matrix JSON round trip") {
  CMatrix m(2, 2);
  m << Complex(1, 2), Complex(-0.5, 0), Complex(0, 3), Complex(7, -7);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[[1,2]],[[1,2],[3,4]]]")), ConfigError);
}

TEST_CASE("scenario schema") {
  const Json ok = Json::parse(R"({"mode":"theory-gain","cat":{"alpha":"1.5","parity":"odd"},"k":2})");
  const ScenarioConfig c = parse_scenario(ok);
  CHECK(c.mode == ScenarioMode::theory_gain);
  CHECK(c.cat.parity == Parity::odd);
  CHECK(c.cat.alpha.real() == 1.5);

  const Json units_doc = Json::parse(R"({"mode":"simulate","device":{"kappa_hz":"250","cavity_dim":20},
      "sweep":{"duration_s":"6.2u"},"pulses":{"frequencies":"derived"}})");
  const ScenarioConfig u = parse_scenario(units_doc);
  CHECK(u.protocol.device.kappa == doctest::Approx(units::khz(0.25)));
  CHECK(u.protocol.sweep.duration == doctest::Approx(6.2));
  CHECK(u.pulse_options.frequencies == FrequencyMode::derived);
  CHECK(two_photon_residual(u.protocol.schedule_second.transfer_sets[0], u.protocol.device) < 1e-9);

  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"theory-gain","extra":1})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"theory-gain","cat":{"alpha":1,"phase":2}})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"nope"})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"k":2})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"simulate","device":{"cavity_dim":4}})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"simulate","device":{"kappa_hz":-1}})")), ConfigError);
  CHECK_THROWS_AS(parse_scenario(Json::parse(R"({"mode":"stirap-scan","scan":{"tau_s":[]}})")), ConfigError);
}

TEST_CASE("theory gain run writes a manifest and is deterministic") {
  const fs::path out1 = scratch("gain1"), out2 = scratch("gain2");
  const ScenarioConfig c = parse_scenario(Json::parse(R"({"mode":"theory-gain","cat":{"alpha":1.5},"k":2})"));
  const RunResult r1 = run_scenario(c, {.out_dir = out1});
  const RunResult r2 = run_scenario(c, {.out_dir = out2});
  CHECK(r1.summary["F_max"].get<double>() == doctest::Approx(0.947).epsilon(0.002 / 0.947));
  CHECK(std::abs(r1.summary["G"].get<double>() - 1.377) < 0.01);
  CHECK(slurp(out1 / "theory_gain.json") == slurp(out2 / "theory_gain.json"));
  const Json m = Json::parse(slurp(out1 / "manifest.json"));
  CHECK(m["version"] == kVersion);
  CHECK(m["config_hash"].get<std::string>().size() == 16);
  CHECK(m.contains("wall_time_s"));
  CHECK(m["config"] == c.source);
  // re-running from the manifest reproduces the data
  const ScenarioConfig again = parse_scenario(m["config"]);
  const RunResult r3 = run_scenario(again, {.out_dir = scratch("gain3")});
  CHECK(r3.summary == r1.summary);
}

TEST_CASE("curve and Wigner outputs are byte identical across runs") {
  const ScenarioConfig curve = parse_scenario(
      Json::parse(R"({"mode":"theory-curve","cat":{"alpha":2.0},"curve":{"alpha_prime_min":2,"alpha_prime_max":3,"points":41}})"));
  const fs::path c1 = scratch("c1"), c2 = scratch("c2"), w1 = scratch("w1");
  run_scenario(curve, {.out_dir = c1});
  run_scenario(curve, {.out_dir = c2});
  const std::string a = slurp(c1 / "theory_curve.csv");
  CHECK(a == slurp(c2 / "theory_curve.csv"));
  CHECK(a.rfind("alpha_prime,fidelity\r\n", 0) == 0);

  const ScenarioConfig w = parse_scenario(
      Json::parse(R"({"mode":"wigner","wigner":{"state":{"kind":"fock","n":1},"nx":11,"np":11}})"));
  const RunResult r = run_scenario(w, {.out_dir = w1});
  CHECK(r.summary["W_origin"].get<double>() == doctest::Approx(-2.0 / M_PI));
  const std::string csv = slurp(w1 / "wigner.csv");
  CHECK(csv.rfind("x,p,W\r\n", 0) == 0);
}

TEST_CASE("figure bundles") {
  const fs::path out = scratch("fig1");
  const RunResult r = reproduce_figure("fig1", {.out_dir = out});
  const Json& mx = r.summary["maxima"];
  REQUIRE(mx.size() == 8);
  const double expect_f[] = {0.854, 0.947, 0.974, 0.988, 0.681, 0.866, 0.960, 0.987};
  for (int i = 0; i < 8; ++i) CHECK(std::abs(mx[i]["F_max"].get<double>() - expect_f[i]) < 2e-3);
  CHECK(fs::exists(out / "fig1_curves.csv"));

  const RunResult b = reproduce_figure("fig3b", {.out_dir = scratch("fig3b"), .fast = true});
  CHECK(b.summary["theory_maxima"][0]["F_max"].get<double>() > 0.99);
  CHECK(std::abs(b.summary["theory_maxima"][1]["F_max"].get<double>() - 0.947) < 2e-3);

  const RunResult f4 = reproduce_figure("fig4", {.out_dir = scratch("fig4"), .fast = true});
  const char* signs[] = {"+", "-", "+", "+"};
  REQUIRE(f4.summary["panels"].size() == 4);
  for (int i = 0; i < 4; ++i) CHECK(f4.summary["panels"][i]["central_fringe"] == signs[i]);
  CHECK_THROWS_AS(reproduce_figure("fig9", {.out_dir = scratch("fig9")}), ConfigError);
  CHECK_FALSE(fs::exists(scratch("fig9")));
}

TEST_CASE("exit codes of the command-line tool") {
  const fs::path dir = scratch("cli");
  const fs::path good = write_config(dir, "good.json", R"({"mode":"theory-gain","cat":{"alpha":1.5}})");
  const fs::path bad = write_config(dir, "bad.json", R"({"mode":"theory-gain","bogus":true})");
  const fs::path broken = write_config(dir, "broken.json", R"({"mode": )");
  const fs::path numeric = write_config(
      dir, "numeric.json", R"({"mode":"wigner","device":{"cavity_dim":8},"wigner":{"state":{"kind":"cat","alpha":4}}})");

  CHECK(run_tool("run " + good.string() + " --out " + (dir / "o_good").string()) == 0);
  CHECK(fs::exists(dir / "o_good" / "manifest.json"));
  CHECK(run_tool("run " + bad.string() + " --out " + (dir / "o_bad").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "o_bad"));
  CHECK(run_tool("run " + broken.string() + " --out " + (dir / "o_broken").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "o_broken"));
  CHECK(run_tool("run " + numeric.string() + " --out " + (dir / "o_num").string()) == 3);
  CHECK_FALSE(fs::exists(dir / "o_num"));
  CHECK(run_tool("run " + good.string() + " --out /proc/catamp_forbidden") == 4);
  CHECK(run_tool("run " + (dir / "missing.json").string()) == 4);
  CHECK(run_tool("reproduce fig7 --out " + (dir / "o_fig").string()) == 2);
  CHECK(run_tool("frobnicate") == 2);
}
