#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "latembed/commands.hpp"
#include "latembed/error.hpp"

using namespace latembed;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
public:
  ScratchDir() : path_(fs::temp_directory_path() / ("latembed-cmd-" + std::to_string(::getpid()) + "-" +
                                                     std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream s(line);
  for (std::string cell; std::getline(s, cell, ',');) out.push_back(cell);
  return out;
}

RunConfig slab_config(const fs::path& dir) {
  RunConfig c = parse_config(
      "manifold.kind = plane\nlattice.bounds = -0.2:0.2, -0.2:0.2, -0.1:0.1\nlattice.spacing = 0.1\n");
  c.output.directory = dir.string();
  return c;
}

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(LATTICE_EMBED_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Commands, ParseCommand) {
  EXPECT_EQ(parse_command("embed"), Command::Embed);
  EXPECT_EQ(parse_command("validate"), Command::Validate);
  EXPECT_FALSE(parse_command("plot").has_value());
}

TEST(Commands, ReadPoints) {
  const auto pts = read_points("# probe\n1, 2, 3\n\n4 5 6  # trailing\n", 3);
  ASSERT_EQ(pts.size(), 2u);
  EXPECT_EQ(pts[1][2], 6.0);
  EXPECT_THROW(read_points("1, 2\n", 3), Error);
  EXPECT_THROW(read_points("1, x, 3\n", 3), Error);
}

TEST(Commands, EmbedWritesOneRowPerLatticePoint) {
  ScratchDir dir;
  const RunConfig c = slab_config(dir.path());
  std::ostringstream log;
  CommandOptions opts;
  opts.log = &log;
  ASSERT_EQ(run_command(Command::Embed, c, opts), kExitSuccess) << log.str();

  const auto rows = lines_of(slurp(dir.path() / "points.csv"));
  ASSERT_EQ(rows.size(), 2u + 75u);
  EXPECT_NE(rows[0].find(config_digest(c)), std::string::npos);
  EXPECT_EQ(rows[1], "q1,q2,q3,zeta1,zeta2,zeta3,residual_norm,energy,iterations,converged");
  for (std::size_t i = 2; i < rows.size(); ++i) {
    const auto cells = split_csv(rows[i]);
    ASSERT_EQ(cells.size(), 10u);
    EXPECT_EQ(cells[9], "1");
    EXPECT_LE(std::stod(cells[6]), 1e-6);
    EXPECT_EQ(cells[0], cells[3]);  // tangential coordinates never move
  }

  const auto report = lines_of(slurp(dir.path() / "report.jsonl"));
  ASSERT_EQ(report.size(), 1u + 75u + 1u);
  const auto header = nlohmann::json::parse(report.front());
  EXPECT_EQ(header["config_digest"], config_digest(c));
  const auto summary = nlohmann::json::parse(report.back());
  EXPECT_EQ(summary["type"], "summary");
  EXPECT_EQ(summary["converged"], 75);
  const auto first = nlohmann::json::parse(report[1]);
  EXPECT_EQ(first["status"], "converged");
  EXPECT_TRUE(first["energy_trace"].is_array());
}

TEST(Commands, EmbedIsDeterministic) {
  ScratchDir dir;
  RunConfig c = slab_config(dir.path());
  c.energy.lambda = 0.001;
  CommandOptions opts;
  std::ostringstream log;
  opts.log = &log;
  opts.workers = 1;
  run_command(Command::Embed, c, opts);
  const std::string a = slurp(dir.path() / "points.csv") + slurp(dir.path() / "report.jsonl");
  opts.workers = 3;
  run_command(Command::Embed, c, opts);
  const std::string b = slurp(dir.path() / "points.csv") + slurp(dir.path() / "report.jsonl");
  EXPECT_EQ(a, b);
}

TEST(Commands, CurvatureOfSphereRadiusTwo) {
  ScratchDir dir;
  for (const char* method : {"auto", "numeric"}) {
    RunConfig c = parse_config(std::string("manifold.kind = sphere\nmanifold.r = 2\nmanifold.curvature = ") + method +
                               "\nquadrature.resolution = 16\n");
    c.output.directory = dir.path().string();
    std::ostringstream log;
    ASSERT_EQ(run_command(Command::Curvature, c, {{}, 0, &log}), kExitSuccess) << log.str();
    const auto rows = lines_of(slurp(dir.path() / "curvature.csv"));
    ASSERT_EQ(rows.size(), 2u + 64u);
    EXPECT_EQ(rows[1], "u1,u2,x1,x2,x3,sectional_curvature,curvature_integral");
    for (std::size_t i = 2; i < rows.size(); ++i) {
      const auto cells = split_csv(rows[i]);
      EXPECT_NEAR(std::stod(cells[5]), 0.25, 1e-3) << method;
      EXPECT_NEAR(std::stod(cells[6]), 0.25 * 4.0 * M_PI * M_PI, 1e-3 * 4.0 * M_PI * M_PI) << method;
    }
  }
}

TEST(Commands, EnergyAtProbePoints) {
  ScratchDir dir;
  RunConfig c = parse_config("manifold.kind = plane\nenergy.beta = 2\n");
  c.output.directory = dir.path().string();
  const fs::path pts = dir.path() / "probe.txt";
  std::ofstream(pts) << "0, 0, 0.1\n1 1 -0.05\n";
  std::ostringstream log;
  CommandOptions opts{pts.string(), 0, &log};
  ASSERT_EQ(run_command(Command::Energy, c, opts), kExitSuccess) << log.str();
  const auto rows = lines_of(slurp(dir.path() / "energy.csv"));
  ASSERT_EQ(rows.size(), 4u);
  const auto cells = split_csv(rows[2]);
  EXPECT_NEAR(std::stod(cells[3]), 0.01, 1e-15);  // beta/2 * z^2
  EXPECT_NEAR(std::stod(cells[9]), 0.2, 1e-15);   // dE/dz
}

TEST(Commands, ConfigurationErrorsExitTwo) {
  ScratchDir dir;
  RunConfig c = parse_config("manifold.kind = plane\n");
  c.output.directory = dir.path().string();
  std::ostringstream log;
  EXPECT_EQ(run_command(Command::Energy, c, {{}, 0, &log}), kExitConfigError);
  EXPECT_EQ(run_command(Command::Energy, c, {(dir.path() / "missing.txt").string(), 0, &log}), kExitConfigError);
}

TEST(Commands, ConvergenceFailureExitsOne) {
  ScratchDir dir;
  RunConfig c = slab_config(dir.path());
  c.solver.max_iters = 1;
  std::ostringstream log;
  EXPECT_EQ(run_command(Command::Embed, c, {{}, 0, &log}), kExitFailure);
}

TEST(Cli, ExitCodes) {
  ScratchDir dir;
  const fs::path good = dir.path() / "good.conf";
  std::ofstream(good) << "[manifold]\nkind = plane\n[lattice]\nbounds = -0.2:0.2, -0.2:0.2, -0.1:0.1\nspacing = 0.1\n"
                      << "[output]\ndirectory = " << (dir.path() / "out").string() << "\n";
  const fs::path bad = dir.path() / "bad.conf";
  std::ofstream(bad) << "manifold.kind = plane\nenergy.alpha = -1\n";
  const fs::path unknown = dir.path() / "unknown.conf";
  std::ofstream(unknown) << "manifold.kind = plane\nenergy.zeta = 1\n";
  const fs::path log = dir.path() / "log.txt";

  EXPECT_EQ(run_cli("embed " + good.string(), log), 0) << slurp(log);
  EXPECT_TRUE(fs::exists(dir.path() / "out" / "points.csv"));
  EXPECT_EQ(run_cli("curvature " + good.string(), log), 0) << slurp(log);
  EXPECT_EQ(run_cli("embed " + bad.string(), log), 2);
  EXPECT_NE(slurp(log).find("energy.alpha"), std::string::npos);
  EXPECT_EQ(run_cli("embed " + unknown.string(), log), 2);
  EXPECT_EQ(run_cli("embed " + (dir.path() / "nope.conf").string(), log), 2);
  EXPECT_EQ(run_cli("energy " + good.string(), log), 2);
  EXPECT_EQ(run_cli("frobnicate", log), 2);
  EXPECT_EQ(run_cli("--help", log), 0);
}
