#include "latembed/commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "latembed/curvature_integral.hpp"
#include "latembed/error.hpp"
#include "latembed/validation.hpp"

namespace latembed {

namespace {

using json = nlohmann::json;

bool wants(const RunConfig& config, const std::string& format) {
  for (const auto& f : config.output.formats) {
    if (f == format) return true;
  }
  return false;
}

std::filesystem::path output_path(const RunConfig& config, const std::string& file) {
  std::filesystem::path dir(config.output.directory);
  std::filesystem::create_directories(dir);
  return dir / file;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  return out;
}

std::string axis_columns(const char* prefix, Eigen::Index count) {
  std::string out;
  for (Eigen::Index i = 0; i < count; ++i) out += (i ? "," : "") + std::string(prefix) + std::to_string(i + 1);
  return out;
}

void write_row(std::ostream& out, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? "," : "") << format_number(v[i]);
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::ostream& log_stream(const CommandOptions& options) { return options.log ? *options.log : std::cout; }

int run_embed(const RunConfig& config, const CommandOptions& options) {
  const ManifoldSpec spec = config.manifold.build();
  const EmbedResult result = embed_lattice(config.energy, spec, config.lattice, config.solver, options.workers);
  const StationarityReport stationarity =
      verify_stationarity(config.energy, spec, result.map, 10.0 * config.solver.grad_tol, config.solver);
  const std::string digest = config_digest(config);
  const int n = spec.ambient_dim();

  if (wants(config, "csv")) {
    std::ofstream out = open_output(output_path(config, "points.csv"));
    out << "# lattice-embed points config_digest=" << digest << "\n";
    out << axis_columns("q", n) << "," << axis_columns("zeta", n) << ",residual_norm,energy,iterations,converged\n";
    for (const auto& e : result.map.entries) {
      write_row(out, e.q);
      out << ",";
      write_row(out, e.zeta);
      out << "," << format_number(e.residual_norm) << "," << format_number(e.energy) << "," << e.iterations << ","
          << (e.converged ? 1 : 0) << "\n";
    }
  }

  const SolveReport& rep = result.report;
  if (wants(config, "jsonl")) {
    std::ofstream out = open_output(output_path(config, "report.jsonl"));
    out << json{{"type", "header"},
                {"config_digest", digest},
                {"columns", {"index", "status", "iterations", "final_energy", "final_residual_norm", "converged",
                             "energy_trace", "message"}}}
               .dump()
        << "\n";
    for (std::size_t i = 0; i < rep.points.size(); ++i) {
      const PointReport& p = rep.points[i];
      json trace = json::array();
      for (double v : p.energy_trace) trace.push_back(number_or_null(v));
      out << json{{"type", "point"},
                  {"index", i},
                  {"status", std::string(to_string(p.status))},
                  {"iterations", p.iterations},
                  {"final_energy", number_or_null(p.final_energy)},
                  {"final_residual_norm", number_or_null(p.final_residual_norm)},
                  {"converged", p.converged},
                  {"energy_trace", trace},
                  {"message", p.message}}
                 .dump()
          << "\n";
    }
    out << json{{"type", "summary"},
                {"points", rep.points.size()},
                {"attempted", rep.attempted},
                {"converged", rep.converged},
                {"skipped", rep.skipped},
                {"failed", rep.failed},
                {"fraction_converged", rep.fraction_converged},
                {"max_residual", rep.max_residual},
                {"stationarity_tol", 10.0 * config.solver.grad_tol},
                {"stationarity_pass_fraction", stationarity.pass_fraction}}
               .dump()
        << "\n";
  }

  std::ostream& log = log_stream(options);
  log << "embed: " << rep.points.size() << " points, " << rep.attempted << " attempted, " << rep.converged
      << " converged, " << rep.skipped << " skipped, " << rep.failed << " failed; max residual "
      << format_number(rep.max_residual) << "; stationarity pass fraction "
      << format_number(stationarity.pass_fraction) << "; " << rep.wall_seconds << " s\n";
  return (rep.failed == 0 && rep.converged == rep.attempted) ? kExitSuccess : kExitFailure;
}

int run_curvature(const RunConfig& config, const CommandOptions& options) {
  const ManifoldSpec spec = config.manifold.build();
  const int d = spec.intrinsic_dim();
  const int n = spec.ambient_dim();
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "sectional curvature needs an intrinsic dimension of at least 2");
  const CurvatureOptions curv = config.energy.curvature_options();
  const QuadratureRule rule =
      build_quadrature(d, config.energy.quadrature.resolution, config.energy.quadrature.seed);
  const int g = config.output.grid;

  std::ofstream out = open_output(output_path(config, "curvature.csv"));
  out << "# lattice-embed curvature config_digest=" << config_digest(config) << "\n";
  out << axis_columns("u", d) << "," << axis_columns("x", n) << ",sectional_curvature,curvature_integral\n";

  std::size_t failures = 0;
  std::size_t nodes = 0;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    Vec u(d);
    for (int a = 0; a < d; ++a) u[a] = spec.lower()[a] + spec.extent(a) * (idx[static_cast<std::size_t>(a)] + 0.5) / g;
    double k = std::numeric_limits<double>::quiet_NaN();
    double c = std::numeric_limits<double>::quiet_NaN();
    try {
      k = sectional_curvature(spec, u, Vec::Unit(d, 0), Vec::Unit(d, 1), curv);
      c = curvature_double_integral(spec, u, rule, curv).value;
    } catch (const Error& e) {
      ++failures;
      log_stream(options) << "curvature: u = (" << format_number(u[0]) << ", ...): " << e.what() << "\n";
    }
    ++nodes;
    write_row(out, u);
    out << ",";
    write_row(out, spec.eval(u));
    out << "," << format_number(k) << "," << format_number(c) << "\n";

    int a = d - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == g) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  log_stream(options) << "curvature: " << nodes << " grid nodes, " << failures << " failed\n";
  return failures == 0 ? kExitSuccess : kExitFailure;
}

int run_energy(const RunConfig& config, const CommandOptions& options) {
  if (options.points_file.empty()) throw Error(ErrorCode::MissingRequired, "energy needs --points <file>");
  std::ifstream in(options.points_file);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + options.points_file);
  std::stringstream buf;
  buf << in.rdbuf();

  const ManifoldSpec spec = config.manifold.build();
  const int n = spec.ambient_dim();
  const std::vector<Vec> points = read_points(buf.str(), n);

  std::ofstream out = open_output(output_path(config, "energy.csv"));
  out << "# lattice-embed energy config_digest=" << config_digest(config) << "\n";
  out << axis_columns("q", n) << ",energy,alignment,curvature_integral,regularization," << axis_columns("grad", n)
      << ",grad_norm\n";
  std::size_t failures = 0;
  for (const Vec& q : points) {
    write_row(out, q);
    try {
      const EnergyBreakdown e = energy_breakdown(config.energy, spec, q);
      const Vec g = total_gradient(config.energy, spec, q);
      out << "," << format_number(e.total) << "," << format_number(e.alignment) << "," << format_number(e.curvature)
          << "," << format_number(e.regularization) << ",";
      write_row(out, g);
      out << "," << format_number(g.norm()) << "\n";
    } catch (const Error& e) {
      ++failures;
      const std::string nan = format_number(std::numeric_limits<double>::quiet_NaN());
      for (int i = 0; i < 4 + n + 1; ++i) out << "," << nan;
      out << "\n";
      log_stream(options) << "energy: " << e.what() << "\n";
    }
  }
  log_stream(options) << "energy: " << points.size() << " probe points, " << failures << " failed\n";
  return failures == 0 ? kExitSuccess : kExitFailure;
}

int run_validate(const RunConfig& config, const CommandOptions& options) {
  std::ostream& log = log_stream(options);
  bool ok = true;
  for (const CriterionResult& r : run_acceptance_suite(&log)) ok = ok && r.passed;
  const CriterionResult configured = check_configured_manifold(config);
  log << format_result(configured) << "\n";
  ok = ok && configured.passed;
  log << (ok ? "validate: all checks passed\n" : "validate: FAILED\n");
  return ok ? kExitSuccess : kExitFailure;
}

}  // namespace

std::optional<Command> parse_command(const std::string& name) {
  if (name == "embed") return Command::Embed;
  if (name == "curvature") return Command::Curvature;
  if (name == "energy") return Command::Energy;
  if (name == "validate") return Command::Validate;
  return std::nullopt;
}

std::vector<Vec> read_points(const std::string& text, int dim) {
  std::vector<Vec> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (char& c : line) {
      if (c == ',' || c == ';' || c == '\t') c = ' ';
    }
    std::istringstream row(line);
    std::vector<double> values;
    std::string token;
    while (row >> token) {
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        throw Error(ErrorCode::ParseError, "points line " + std::to_string(line_no) + ": bad number '" + token + "'");
      }
      values.push_back(v);
    }
    if (values.empty()) continue;
    if (static_cast<int>(values.size()) != dim) {
      throw Error(ErrorCode::ParseError, "points line " + std::to_string(line_no) + ": expected " +
                                             std::to_string(dim) + " coordinates, got " +
                                             std::to_string(values.size()));
    }
    out.push_back(Eigen::Map<const Vec>(values.data(), dim));
  }
  return out;
}

int run_command(Command command, const RunConfig& config, const CommandOptions& options) {
  try {
    switch (command) {
      case Command::Embed: return run_embed(config, options);
      case Command::Curvature: return run_curvature(config, options);
      case Command::Energy: return run_energy(config, options);
      case Command::Validate: return run_validate(config, options);
    }
  } catch (const Error& e) {
    log_stream(options) << "error: " << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::UnknownKey:
      case ErrorCode::TypeMismatch:
      case ErrorCode::MissingRequired:
      case ErrorCode::ParseError:
      case ErrorCode::InvalidArgument:
      case ErrorCode::RankDeficient:
        return kExitConfigError;
      default:
        return kExitFailure;
    }
  } catch (const std::filesystem::filesystem_error& e) {
    log_stream(options) << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitFailure;
}

}  // namespace latembed
