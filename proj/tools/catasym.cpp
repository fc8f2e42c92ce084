#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "catasym/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"catasym: model-space verification experiments"};
  app.require_subcommand(1);

  std::string config_path;
  double mesh = -1.0;
  long long seed = -1;
  std::string out_dir;

  for (const std::string& name : catasym::known_experiments()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->add_option("--config", config_path, "config file (key=value)");
    sub->add_option("--mesh", mesh, "override mesh");
    sub->add_option("--seed", seed, "override seed");
    sub->add_option("--out", out_dir, "override output directory");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    catasym::ScenarioConfig cfg =
        config_path.empty()
            ? catasym::config_from_text("", experiment)
            : catasym::load_config(config_path, experiment);
    if (mesh > 0.0) cfg.values["mesh"] = std::to_string(mesh);
    if (seed >= 0) cfg.values["seed"] = std::to_string(seed);
    if (!out_dir.empty()) cfg.values["out"] = out_dir;
    return catasym::run_scenario(cfg);
  } catch (const catasym::ContractViolation& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return catasym::kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return catasym::kExitAssertionFailure;
  }
}
