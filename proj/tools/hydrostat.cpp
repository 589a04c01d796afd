#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "hydrostat/driver.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Hydrostatic variable-density flow solver and verification harness"};
  app.require_subcommand(1, 1);

  std::string config;
  std::string out;
  std::uint64_t seed = 0;
  for (const char* name : {"solve", "stokes", "transport", "picard-diagnose", "sweep", "mms"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "Run configuration file")->required();
    sub->add_option("--out", out, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Seed for initial.noise");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return hydrostat::kExitConfig;
  }

  hydrostat::RunOptions opts;
  if (!out.empty()) opts.out_dir = out;
  opts.seed = seed;
  opts.log = &std::cerr;
  return hydrostat::run_command_file(app.get_subcommands().front()->get_name(), config, opts);
}
