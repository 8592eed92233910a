// Command-line front end: sdns <spectrum|validate|simulate|sweep> [options].

#include "sdns/commands.hpp"
#include "sdns/config.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Navier-Stokes on the unit disk with Navier slip boundary conditions"};
  app.set_version_flag("--version", std::string(sdns::version()));
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  int verbose = 0;

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"spectrum", "Write the Stokes spectrum of the configured basis"},
      {"validate", "Run the invariant suite and write a pass/fail report"},
      {"simulate", "Integrate one or more trajectories"},
      {"sweep", "Run the vorticity form over sweep.nu_list on one shared path"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "Override key=value (repeatable)")->allow_extra_args(false);
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", seed, "Sets noise.seed and validate.seed");
    sub->add_flag_function(
        "-v,--verbose", [&verbose](std::int64_t count) { verbose += static_cast<int>(count); },
        "Print the resolved configuration to stderr");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    std::vector<std::string> overrides = sets;
    if (seed) {
      overrides.push_back("noise.seed=" + std::to_string(*seed));
      overrides.push_back("validate.seed=" + std::to_string(*seed));
    }
    sdns::RunConfig cfg = config_path.empty()
                              ? sdns::parse_config_text("", overrides, "<defaults>")
                              : sdns::parse_config(config_path, overrides);
    cfg.out_dir = out_dir;
    cfg.verbosity += verbose;
    if (cfg.verbosity > 0) std::cerr << sdns::canonical_text(cfg);
    return sdns::run_command(command, cfg, std::cout);
  } catch (const sdns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << command << " failed: " << e.what() << '\n';
    return 1;
  }
}
