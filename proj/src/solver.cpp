#include "latembed/solver.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>

#include "latembed/error.hpp"

namespace latembed {

std::string_view to_string(DescentOutcome outcome) {
  switch (outcome) {
    case DescentOutcome::Converged: return "converged";
    case DescentOutcome::MaxIterations: return "max_iterations";
    case DescentOutcome::LineSearchStall: return "line_search_stall";
  }
  return "?";
}

void SolverConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
  };
  require(initial_step > 0.0, "solver.step must be > 0");
  require(backtrack_factor > 0.0 && backtrack_factor < 1.0, "solver.backtrack must lie in (0, 1)");
  require(armijo_c > 0.0 && armijo_c < 1.0, "solver.armijo_c must lie in (0, 1)");
  require(max_iters >= 1, "solver.max_iters must be >= 1");
  require(grad_tol > 0.0, "solver.grad_tol must be > 0");
}

DescentResult descend_point(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q0,
                            const SolverConfig& config) {
  constexpr double kMinStep = 1e-16;
  DescentResult result;
  result.q = q0;
  double energy = total_energy(params, spec, result.q);
  result.energies.push_back(energy);

  for (int it = 0;; ++it) {
    const Vec grad = total_gradient(params, spec, result.q);
    const double gnorm2 = grad.squaredNorm();
    result.gradient_norm = std::sqrt(gnorm2);
    if (result.gradient_norm <= config.grad_tol) {
      result.outcome = DescentOutcome::Converged;
      return result;
    }
    if (it == config.max_iters) {
      result.outcome = DescentOutcome::MaxIterations;
      return result;
    }

    double step = config.initial_step;
    for (;;) {
      const Vec trial = result.q - step * grad;
      const double trial_energy = total_energy(params, spec, trial);
      if (trial_energy <= energy - config.armijo_c * step * gnorm2) {
        result.q = trial;
        energy = trial_energy;
        break;
      }
      step *= config.backtrack_factor;
      if (step < kMinStep) {
        result.outcome = DescentOutcome::LineSearchStall;
        return result;
      }
    }
    ++result.iterations;
    result.energies.push_back(energy);
  }
}

int default_worker_count() {
  if (const char* env = std::getenv("LATTICE_EMBED_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::uint64_t point_seed(const EnergyParams& params, const SolverConfig& config, std::size_t index) {
  return params.quadrature.seed ^ config.seed ^ static_cast<std::uint64_t>(index);
}

namespace {

void solve_one(const EnergyParams& base, const ManifoldSpec& spec, const SolverConfig& config, std::size_t index,
               EmbeddingEntry& entry, PointReport& report) {
  EnergyParams params = base;
  params.quadrature.seed = point_seed(base, config, index);
  entry.zeta = entry.q;
  try {
    const ClosestPoint cp = closest_point(spec, entry.q);
    if ((entry.q - cp.point).norm() > 2.0 * params.field.tube_radius) {
      entry.status = PointStatus::Skipped;
      entry.residual_norm = std::numeric_limits<double>::quiet_NaN();
      entry.energy = std::numeric_limits<double>::quiet_NaN();
      entry.message = "outside activation support";
    } else {
      const DescentResult r = descend_point(params, spec, entry.q, config);
      entry.zeta = r.q;
      entry.iterations = r.iterations;
      entry.energy = r.energies.back();
      entry.residual_norm = r.gradient_norm;
      entry.converged = r.converged();
      entry.status = r.converged() ? PointStatus::Converged : PointStatus::NotConverged;
      if (!r.converged()) entry.message = std::string(to_string(r.outcome));
      report.energy_trace = r.energies;
    }
  } catch (const Error& e) {
    entry.status = PointStatus::Failed;
    entry.converged = false;
    entry.residual_norm = std::numeric_limits<double>::quiet_NaN();
    entry.energy = std::numeric_limits<double>::quiet_NaN();
    entry.message = e.what();
  }
  report.iterations = entry.iterations;
  report.final_energy = entry.energy;
  report.final_residual_norm = entry.residual_norm;
  report.converged = entry.converged;
  report.status = entry.status;
  report.message = entry.message;
}

}  // namespace

EmbedResult embed_lattice(const EnergyParams& params, const ManifoldSpec& spec, const LatticeSpec& lattice,
                          const SolverConfig& config, int workers) {
  params.validate();
  config.validate();
  if (lattice.dim() != spec.ambient_dim()) {
    throw Error(ErrorCode::InvalidArgument, "lattice dimension does not match the ambient dimension");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::vector<Vec> points = generate_lattice(lattice);

  EmbedResult out;
  out.map.entries.resize(points.size());
  out.report.points.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) out.map.entries[i].q = points[i];

  if (workers <= 0) workers = default_worker_count();
  workers = std::max(1, std::min<int>(workers, static_cast<int>(points.size())));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      solve_one(params, spec, config, i, out.map.entries[i], out.report.points[i]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  SolveReport& rep = out.report;
  for (const auto& e : out.map.entries) {
    switch (e.status) {
      case PointStatus::Skipped: ++rep.skipped; continue;
      case PointStatus::Failed: ++rep.failed; break;
      case PointStatus::Converged: ++rep.converged; break;
      case PointStatus::NotConverged: break;
    }
    ++rep.attempted;
    if (std::isfinite(e.residual_norm)) rep.max_residual = std::max(rep.max_residual, e.residual_norm);
  }
  rep.fraction_converged = rep.attempted ? double(rep.converged) / double(rep.attempted) : 0.0;
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

StationarityReport verify_stationarity(const EnergyParams& params, const ManifoldSpec& spec, const EmbeddingMap& map,
                                       double tol, const SolverConfig& config) {
  if (map.entries.empty()) throw Error(ErrorCode::InvalidArgument, "embedding map is empty");
  StationarityReport rep;
  for (std::size_t i = 0; i < map.entries.size(); ++i) {
    const auto& e = map.entries[i];
    if (e.status == PointStatus::Skipped) continue;
    ++rep.checked;
    EnergyParams local = params;
    local.quadrature.seed = point_seed(params, config, i);
    double r = std::numeric_limits<double>::infinity();
    try {
      r = el_residual(local, spec, e.zeta).norm();
    } catch (const Error&) {
    }
    if (r <= tol) ++rep.passed;
    if (!rep.worst_index || !(r <= rep.worst_residual)) {
      rep.worst_index = i;
      rep.worst_residual = r;
    }
  }
  rep.pass_fraction = rep.checked ? double(rep.passed) / double(rep.checked) : 1.0;
  return rep;
}

}  // namespace latembed
