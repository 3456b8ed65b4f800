#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latembed/curvature_integral.hpp"
#include "latembed/field.hpp"
#include "latembed/geometry.hpp"

namespace latembed {

struct QuadratureSettings {
  int resolution = 64;
  std::uint64_t seed = 0;
  double eps_parallel = 1e-8;
};

struct FieldSettings {
  double tube_radius = 0.1;
  double fd_step = 1e-4;
  /// Weight of the activation term in the embedding PDE residual.
  double mu = 0.0;
};

/// Free constants of the energy
///   O(q) = (alpha/2)|(q-p)_T|^2 + (beta/2)|(q-p)_N|^2 + gamma C(q) + (lambda/2)|grad A(q)|^2
/// with p the closest point of q on M.
struct EnergyParams {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;
  double lambda = 0.0;
  QuadratureSettings quadrature;
  FieldSettings field;
  /// Step for the ambient finite differences of the curvature integral.
  double fd_step = 1e-4;
  CurvatureMethod curvature_method = CurvatureMethod::Auto;
  /// Christoffel/Riemann step as a fraction of the parameter-box extent.
  double geometry_step_fraction = 1e-4;

  /// Throws InvalidArgument naming the offending field.
  void validate() const;
  CurvatureOptions curvature_options() const;
};

double alignment(const EnergyParams& params, const TangentFrame& frame, const Vec& p, const Vec& q);

/// alpha (q-p)_T + beta (q-p)_N, with p held fixed.
Vec alignment_gradient(const EnergyParams& params, const TangentFrame& frame, const Vec& p, const Vec& q);

struct EnergyBreakdown {
  double alignment = 0.0;
  /// Unweighted curvature integral at the closest point (0 when gamma = 0).
  double curvature = 0.0;
  /// (lambda / 2) |grad A|^2.
  double regularization = 0.0;
  double total = 0.0;
};

EnergyBreakdown energy_breakdown(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);
double total_energy(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);

struct ResidualTerms {
  Vec alignment;
  Vec curvature;       // gamma * grad C
  Vec regularization;  // lambda * Delta_A
  Vec total;
};

ResidualTerms el_residual_terms(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);

/// alpha (q-p)_T + beta (q-p)_N + gamma K(q) + lambda Delta_A(q).
Vec el_residual(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);

/// Gradient of total_energy; the same vector as el_residual, bit for bit.
Vec total_gradient(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);

/// el_residual + mu * grad A: the full embedding PDE with its activation term.
Vec embedding_pde_residual(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q);

/// Component k is -q_k + lambda K.
Vec reduced_residual(const Vec& q, double lambda, double curvature);

struct LambdaSolution {
  Vec per_component;
  bool consistent = false;
  std::optional<double> lambda;
};

/// lambda_k = q_k / K. Throws NoSolution (K = 0, q != 0) or Indeterminate (K = 0, q = 0).
LambdaSolution solve_lambda_reduced(const Vec& q, double curvature);

}  // namespace latembed
