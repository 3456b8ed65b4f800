#include "latembed/energy.hpp"

#include <cmath>

#include "latembed/error.hpp"

namespace latembed {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

struct Projection {
  ClosestPoint cp;
  TangentFrame frame;
};

Projection project(const ManifoldSpec& spec, const Vec& q) {
  if (q.size() != spec.ambient_dim()) {
    throw Error(ErrorCode::InvalidArgument, "point dimension does not match the ambient dimension");
  }
  Projection out{closest_point(spec, q), {}};
  out.frame = tangent_frame(spec, out.cp.param);
  return out;
}

QuadratureRule rule_for(const EnergyParams& params, const ManifoldSpec& spec) {
  return build_quadrature(spec.intrinsic_dim(), params.quadrature.resolution, params.quadrature.seed);
}

}  // namespace

void EnergyParams::validate() const {
  require(alpha > 0.0, "energy.alpha must be > 0");
  require(beta > 0.0, "energy.beta must be > 0");
  require(gamma >= 0.0, "energy.gamma must be >= 0");
  require(lambda >= 0.0, "energy.lambda must be >= 0");
  require(std::isfinite(field.mu), "field.mu must be finite");
  require(fd_step > 0.0, "energy.fd_step must be > 0");
  require(quadrature.resolution >= 4, "quadrature.resolution must be >= 4");
  require(quadrature.eps_parallel >= 0.0, "quadrature.eps_parallel must be >= 0");
  require(field.tube_radius > 0.0, "field.tube_radius must be > 0");
  require(field.fd_step > 0.0 && field.fd_step < field.tube_radius / 10.0,
          "field.fd_step must lie in (0, field.tube_radius / 10)");
  require(geometry_step_fraction > 0.0 && geometry_step_fraction < 0.1,
          "geometry step fraction must lie in (0, 0.1)");
}

CurvatureOptions EnergyParams::curvature_options() const {
  CurvatureOptions options;
  options.method = curvature_method;
  options.step_fraction = geometry_step_fraction;
  options.eps_parallel = quadrature.eps_parallel;
  return options;
}

double alignment(const EnergyParams& params, const TangentFrame& frame, const Vec& p, const Vec& q) {
  const Decomposition parts = decompose(frame, q - p);
  return 0.5 * params.alpha * parts.tangential.squaredNorm() + 0.5 * params.beta * parts.normal.squaredNorm();
}

Vec alignment_gradient(const EnergyParams& params, const TangentFrame& frame, const Vec& p, const Vec& q) {
  const Decomposition parts = decompose(frame, q - p);
  return params.alpha * parts.tangential + params.beta * parts.normal;
}

EnergyBreakdown energy_breakdown(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  const Projection proj = project(spec, q);
  EnergyBreakdown out;
  out.alignment = alignment(params, proj.frame, proj.cp.point, q);
  out.total = out.alignment;
  if (params.gamma != 0.0) {
    const QuadratureRule rule = rule_for(params, spec);
    out.curvature =
        curvature_double_integral(spec, proj.cp.param, rule, params.curvature_options()).value;
    out.total += params.gamma * out.curvature;
  }
  if (params.lambda != 0.0) {
    const ActivationField field(spec, params.field.tube_radius, params.field.fd_step);
    out.regularization = regularization_energy(field, q, params.lambda);
    out.total += out.regularization;
  }
  return out;
}

double total_energy(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  return energy_breakdown(params, spec, q).total;
}

ResidualTerms el_residual_terms(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  const Projection proj = project(spec, q);
  const Eigen::Index n = q.size();
  ResidualTerms out;
  out.alignment = alignment_gradient(params, proj.frame, proj.cp.point, q);
  out.curvature = Vec::Zero(n);
  out.regularization = Vec::Zero(n);
  if (params.gamma != 0.0) {
    const QuadratureRule rule = rule_for(params, spec);
    out.curvature = params.gamma *
                    curvature_integral_gradient(spec, q, rule, params.fd_step, params.curvature_options());
  }
  if (params.lambda != 0.0) {
    const ActivationField field(spec, params.field.tube_radius, params.field.fd_step);
    out.regularization = regularization_gradient(field, q, params.lambda);
  }
  out.total = out.alignment + out.curvature + out.regularization;
  return out;
}

Vec el_residual(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  return el_residual_terms(params, spec, q).total;
}

Vec total_gradient(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  // The Euler-Lagrange residual of O is its gradient; both names share one evaluation path.
  return el_residual(params, spec, q);
}

Vec embedding_pde_residual(const EnergyParams& params, const ManifoldSpec& spec, const Vec& q) {
  Vec r = el_residual(params, spec, q);
  if (params.field.mu != 0.0) {
    const ActivationField field(spec, params.field.tube_radius, params.field.fd_step);
    r += params.field.mu * activation_gradient(field, q);
  }
  return r;
}

Vec reduced_residual(const Vec& q, double lambda, double curvature) {
  return (-q.array() + lambda * curvature).matrix();
}

LambdaSolution solve_lambda_reduced(const Vec& q, double curvature) {
  if (curvature == 0.0) {
    if (q.isZero(0.0)) throw Error(ErrorCode::Indeterminate, "K = 0 and q = 0: every lambda solves");
    throw Error(ErrorCode::NoSolution, "K = 0 with nonzero q: -q_k = 0 cannot hold");
  }
  LambdaSolution out;
  out.per_component = q / curvature;
  out.consistent = true;
  const double first = out.per_component.size() ? out.per_component[0] : 0.0;
  for (Eigen::Index k = 1; k < out.per_component.size(); ++k) {
    const double lk = out.per_component[k];
    if (std::abs(lk - first) > 1e-9 * std::max(std::abs(lk), std::abs(first))) {
      out.consistent = false;
      break;
    }
  }
  if (out.consistent) out.lambda = first;
  return out;
}

}  // namespace latembed
