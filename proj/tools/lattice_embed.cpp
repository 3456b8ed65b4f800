// lattice-embed: embed a lattice around a manifold, tabulate curvature,
// probe the energy, or run the built-in acceptance checks.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "latembed/commands.hpp"
#include "latembed/config.hpp"
#include "latembed/error.hpp"

namespace {

latembed::RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw latembed::Error(latembed::ErrorCode::InvalidArgument, "cannot read config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return latembed::parse_config(buf.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice embedding around parametrized manifolds"};
  app.require_subcommand(1);
  std::string config_path;
  std::string points_path;
  int workers = 0;

  auto* embed = app.add_subcommand("embed", "Solve every lattice point; writes points.csv and report.jsonl");
  embed->add_option("config", config_path, "Configuration file")->required();
  embed->add_option("-j,--threads", workers, "Worker threads (default: LATTICE_EMBED_THREADS or all cores)");

  auto* curvature = app.add_subcommand("curvature", "Sectional curvature and its integral over a parameter grid");
  curvature->add_option("config", config_path, "Configuration file")->required();

  auto* energy = app.add_subcommand("energy", "Energy and gradient at probe points");
  energy->add_option("config", config_path, "Configuration file")->required();
  energy->add_option("--points", points_path, "Probe points, one per line")->required();

  auto* validate = app.add_subcommand("validate", "Run the acceptance checks (and check the configured manifold)");
  validate->add_option("config", config_path, "Configuration file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? latembed::kExitSuccess : latembed::kExitConfigError;
  }

  latembed::Command command = latembed::Command::Validate;
  if (embed->parsed()) command = latembed::Command::Embed;
  if (curvature->parsed()) command = latembed::Command::Curvature;
  if (energy->parsed()) command = latembed::Command::Energy;

  latembed::RunConfig config;
  try {
    if (!config_path.empty()) config = load_config(config_path);
  } catch (const latembed::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return latembed::kExitConfigError;
  }

  latembed::CommandOptions options;
  options.points_file = points_path;
  options.workers = workers;
  options.log = &std::cout;
  return latembed::run_command(command, config, options);
}
