// Command-line front end: `run`, `sweep` and `observe` on a key = value config.

#include <cstdlib>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "grenier/commands.hpp"
#include "grenier/config.hpp"

namespace {

constexpr const char* kOutputDirEnv = "GRENIER_OUTPUT_DIR";

grenier::RunConfig resolve(const std::string& path, std::optional<std::size_t> stride) {
  auto cfg = grenier::load_config(path);
  if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) cfg.output_dir = dir;
  if (stride) {
    if (*stride < 1) throw grenier::ConfigError("--stride must be >= 1");
    cfg.stride = *stride;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical NLS solver on the phase/amplitude system"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::size_t> stride;
  std::string eps_text;
  double fit_max_eps = std::numeric_limits<double>::infinity();

  auto* run = app.add_subcommand("run", "evolve one case and write snapshots and constraints");
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("--stride", stride, "constraint sampling stride");

  auto* sweep = app.add_subcommand("sweep", "eps sweep against the eps = 0 reference");
  sweep->add_option("config", config_path, "key = value config file")->required();
  sweep->add_option("--eps", eps_text, "comma-separated positive eps values")->required();
  sweep->add_option("--fit-max-eps", fit_max_eps, "largest eps entering the slope fit");
  sweep->add_option("--stride", stride, "constraint sampling stride");

  auto* observe = app.add_subcommand("observe", "write the constraint time series only");
  observe->add_option("config", config_path, "key = value config file")->required();
  observe->add_option("--stride", stride, "constraint sampling stride");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : grenier::exit_code::config;
  }

  return grenier::guarded(
      [&] {
        auto cfg = resolve(config_path, stride);
        if (run->parsed()) {
          grenier::cmd_run(cfg, std::cout);
        } else if (sweep->parsed()) {
          const auto eps = grenier::parse_eps_list(eps_text);
          grenier::cmd_sweep(cfg, eps, std::cout, fit_max_eps);
        } else {
          grenier::cmd_observe(cfg, std::cout);
        }
      },
      std::cerr);
}
