#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "catamp/scenario.hpp"

using namespace catamp;

namespace {

int classify(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitSchema;
  if (dynamic_cast<const IoError*>(&e)) return kExitIo;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitIo;
  return kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  auto log = spdlog::stderr_color_mt("cat-amp");
  log->set_pattern("[%H:%M:%S] %v");

  CLI::App app{"Cat-state amplification in circuit QED"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  app.fallthrough();

  std::string out_dir;
  int nc = 0;
  bool fast = false;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--nc", nc, "cavity truncation override")->check(CLI::Range(2, 400));
  app.add_flag("--fast", fast, "smoke-test dimensions");

  std::string config_path;
  auto* run = app.add_subcommand("run", "execute a scenario config");
  run->add_option("config", config_path, "scenario JSON")->required();

  std::string figure;
  auto* repro = app.add_subcommand("reproduce", "emit the data behind a figure");
  repro->add_option("figure", figure, "fig1 | fig3b | fig4 | fig5")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitSchema;
  }

  RunOptions opts;
  opts.cavity_dim = nc;
  opts.fast = fast;
  opts.progress = [log](const std::string& msg) { log->info("{}", msg); };

  try {
    RunResult r;
    if (run->parsed()) {
      const ScenarioConfig cfg = load_scenario(config_path);
      opts.out_dir = !out_dir.empty() ? out_dir : !cfg.output.empty() ? cfg.output : "out";
      log->info("running {} -> {}", config_path, opts.out_dir.string());
      r = run_scenario(cfg, opts);
    } else {
      opts.out_dir = out_dir.empty() ? "out" : out_dir;
      log->info("reproducing {} -> {}", figure, opts.out_dir.string());
      r = reproduce_figure(figure, opts);
    }
    std::cout << r.summary.dump(2) << std::endl;
    for (const auto& f : r.files) log->info("wrote {}", f.string());
    return kExitOk;
  } catch (const std::exception& e) {
    const int rc = classify(e);
    log->error("{}", e.what());
    return rc;
  }
}
