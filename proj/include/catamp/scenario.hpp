#pragma once

// Scenario configs (JSON, SI units) and the figure bundles behind the CLI.

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "catamp/io.hpp"
#include "catamp/protocol.hpp"
#include "catamp/states.hpp"
#include "catamp/wigner.hpp"

namespace catamp {

inline constexpr const char* kVersion = "0.3.0";

enum class ScenarioMode { theory_gain, theory_curve, simulate, stirap_scan, wigner };

struct CurveSpec {
  double alpha_prime_min = 1.0;
  double alpha_prime_max = 3.0;
  int points = 201;
};

struct WignerStateSpec {
  std::string kind = "cat";  // cat | fock
  CatSpec cat{Complex(1.5, 0.0), Parity::even};
  int fock = 0;
};

struct ScenarioConfig {
  ScenarioMode mode = ScenarioMode::theory_gain;
  std::string output;
  CatSpec cat{Complex(1.5, 0.0), Parity::even};
  int k = 2;
  ScheduleOptions pulse_options;
  ProtocolConfig protocol;
  CurveSpec curve;
  std::vector<double> taus;  // us
  double delta0 = units::mhz(10.0);
  StirapScanConfig stirap;
  WignerStateSpec wigner_state;
  GridSpec grid;
  Json source;  // the document as read
};

// Throws ConfigError on any schema violation, including unknown keys.
ScenarioConfig parse_scenario(const Json& doc);
ScenarioConfig load_scenario(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir;
  int cavity_dim = 0;  // --nc, 0 keeps the config value
  bool fast = false;
  std::function<void(const std::string&)> progress;  // stderr reporter
};

struct RunResult {
  std::vector<std::filesystem::path> files;
  Json summary;  // small JSON printed on stdout
};

// Executes a scenario and writes its artifacts plus manifest.json.
RunResult run_scenario(const ScenarioConfig& config, const RunOptions& options);

// fig1 | fig3b | fig4 | fig5
RunResult reproduce_figure(const std::string& name, const RunOptions& options);

// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitSchema = 2, kExitNumerical = 3, kExitIo = 4 };

}  // namespace catamp
