#pragma once

#include <string>
#include <vector>

#include "latembed/energy.hpp"
#include "latembed/geometry.hpp"
#include "latembed/lattice.hpp"
#include "latembed/solver.hpp"

namespace latembed {

struct ManifoldConfig {
  ManifoldKind kind = ManifoldKind::Sphere;
  double radius = 1.0;        // sphere radius or torus tube radius (manifold.r)
  double major_radius = 2.0;  // torus (manifold.R)
  double extent = 10.0;       // plane half-width (manifold.extent)
  std::vector<std::string> chart;  // parametric components (manifold.chart)
  Vec lower;                        // parametric bounds
  Vec upper;
  std::vector<bool> periodic;

  ManifoldSpec build() const;
};

struct OutputConfig {
  std::string directory = "out";
  std::vector<std::string> formats{"csv", "jsonl"};
  /// Grid nodes per parameter axis for the `curvature` command.
  int grid = 8;
};

/// Fully resolved run configuration. Every key has a default except
/// manifold.kind.
struct RunConfig {
  ManifoldConfig manifold;
  LatticeSpec lattice;
  EnergyParams energy;
  SolverConfig solver;
  OutputConfig output;
};

/// Shortest decimal form that reads back as the same double ("nan" for NaN).
std::string format_number(double v);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Parses `key = value` lines. Keys are either fully dotted
/// (`energy.alpha = 2`) or relative to the last `[section]` header; `#`
/// starts a comment. Throws UnknownKey, TypeMismatch, MissingRequired or
/// ParseError with the offending key in the message.
RunConfig parse_config(const std::string& text);

/// Canonical document: fixed section and key order, every key written,
/// doubles at round-trip precision. parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

/// 64-bit FNV-1a of the canonical document, as 16 hex digits.
std::string config_digest(const RunConfig& config);

}  // namespace latembed
