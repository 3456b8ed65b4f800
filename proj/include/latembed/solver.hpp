#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latembed/energy.hpp"
#include "latembed/lattice.hpp"

namespace latembed {

struct SolverConfig {
  double initial_step = 0.1;
  double backtrack_factor = 0.5;
  double armijo_c = 1e-4;
  int max_iters = 500;
  double grad_tol = 1e-6;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class DescentOutcome { Converged, MaxIterations, LineSearchStall };

std::string_view to_string(DescentOutcome outcome);

struct DescentResult {
  Vec q;
  DescentOutcome outcome = DescentOutcome::MaxIterations;
  /// Accepted steps.
  int iterations = 0;
  /// Energy at the start and after every accepted step.
  std::vector<double> energies;
  double gradient_norm = 0.0;

  bool converged() const { return outcome == DescentOutcome::Converged; }
};

/// Steepest descent on total_energy with Armijo backtracking. Stops once
/// |total_gradient| <= grad_tol. A step that cannot be made to satisfy the
/// Armijo condition above 1e-16 ends the run with LineSearchStall.
DescentResult descend_point(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q0,
                            const SolverConfig& config);

struct PointReport {
  int iterations = 0;
  double final_energy = 0.0;
  double final_residual_norm = 0.0;
  bool converged = false;
  PointStatus status = PointStatus::NotConverged;
  std::vector<double> energy_trace;
  std::string message;
};

struct SolveReport {
  std::vector<PointReport> points;
  std::size_t attempted = 0;
  std::size_t converged = 0;
  std::size_t skipped = 0;
  std::size_t failed = 0;
  double fraction_converged = 0.0;
  double max_residual = 0.0;
  double wall_seconds = 0.0;
};

struct EmbedResult {
  EmbeddingMap map;
  SolveReport report;
};

/// Worker count from LATTICE_EMBED_THREADS, else hardware concurrency.
int default_worker_count();

/// Quadrature seed used for lattice point `index`.
std::uint64_t point_seed(const EnergyParams& params, const SolverConfig& config, std::size_t index);

/// Solves every lattice point independently, starting from zeta(q) = q.
/// Points farther than 2 * tube_radius from M are skipped. Output order is the
/// lattice order whatever the worker count; workers <= 0 uses the default.
EmbedResult embed_lattice(const EnergyParams& params, const ManifoldSpec& spec, const LatticeSpec& lattice,
                          const SolverConfig& config, int workers = 0);

struct StationarityReport {
  std::size_t checked = 0;
  std::size_t passed = 0;
  double pass_fraction = 1.0;
  std::optional<std::size_t> worst_index;
  double worst_residual = 0.0;
};

/// Re-evaluates |el_residual(zeta(q))| for every non-skipped entry.
StationarityReport verify_stationarity(const EnergyParams& params, const ManifoldSpec& spec, const EmbeddingMap& map,
                                       double tol, const SolverConfig& config = {});

}  // namespace latembed
