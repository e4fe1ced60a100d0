// viscolab <check|korn|simulate|convergence> --config <path> [--out <dir>] [--seed <int>]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "visco/commands.hpp"
#include "visco/config.hpp"
#include "visco/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Viscoelastic well-posedness checks and simulations"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  for (const char* name : {"check", "korn", "simulate", "convergence"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key = value run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output_dir)");
    sub->add_option("--seed", seed, "random seed (overrides seed)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? visco::kExitOk : visco::kExitInputError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "cannot read config " << config_path << '\n';
    return visco::kExitInputError;
  }
  std::stringstream text;
  text << in.rdbuf();

  visco::RunSpec spec;
  try {
    spec = visco::parse_config(text.str());
  } catch (const visco::Error& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return visco::kExitInputError;
  }
  if (visco::to_string(spec.command) != command) {
    std::cerr << "config command `" << visco::to_string(spec.command) << "` does not match `" << command << "`\n";
    return visco::kExitInputError;
  }
  auto* sub = app.get_subcommands().front();
  if (sub->count("--out") > 0) spec.output_dir = out_dir;
  if (sub->count("--seed") > 0) spec.seed = seed;

  return visco::run_command(spec, std::cout, std::cerr);
}
