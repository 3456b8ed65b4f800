#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "latembed/config.hpp"

namespace latembed {

enum class Command { Embed, Curvature, Energy, Validate };

std::optional<Command> parse_command(const std::string& name);

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfigError = 2;

struct CommandOptions {
  /// Probe points for `energy`: one point per line, numbers separated by
  /// commas or whitespace, `#` comments.
  std::string points_file;
  /// 0 = default worker count.
  int workers = 0;
  std::ostream* log = nullptr;
};

/// Probe-point file parser. Throws ParseError on malformed rows.
std::vector<Vec> read_points(const std::string& text, int dim);

/// Runs one command and writes its files into config.output.directory:
///   embed      points.csv, report.jsonl
///   curvature  curvature.csv
///   energy     energy.csv
///   validate   (console only)
/// Returns 0 on success, 1 on a validation/convergence failure, 2 on a
/// configuration error.
int run_command(Command command, const RunConfig& config, const CommandOptions& options = {});

}  // namespace latembed
