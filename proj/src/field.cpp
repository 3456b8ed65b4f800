#include "latembed/field.hpp"

#include <cmath>

#include "latembed/error.hpp"

namespace latembed {

ActivationField::ActivationField(const ManifoldSpec& manifold, double tube_radius, double fd_step)
    : manifold_(&manifold), tube_radius_(tube_radius), fd_step_(fd_step) {
  if (!(tube_radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "tube radius must be positive");
  if (!(fd_step > 0.0) || !(fd_step < tube_radius / 10.0)) {
    throw Error(ErrorCode::InvalidArgument, "activation step must lie in (0, tube_radius / 10)");
  }
}

double ActivationField::distance(const Vec& x) const {
  const ClosestPoint cp = closest_point(*manifold_, x);
  return (x - cp.point).norm();
}

double activation_profile(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return 1.0 - t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

double activation_profile_derivative(double s) {
  if (s <= 1.0 || s >= 2.0) return 0.0;
  const double t = s - 1.0;
  return -30.0 * t * t * (t - 1.0) * (t - 1.0);
}

double activation(const ActivationField& field, const Vec& x) {
  return activation_profile(field.distance(x) / field.tube_radius());
}

namespace {

Vec gradient_with_step(const ActivationField& field, const Vec& x, double h) {
  Vec grad(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec up = x, dn = x;
    up[k] += h;
    dn[k] -= h;
    grad[k] = (activation(field, up) - activation(field, dn)) / (2.0 * h);
  }
  return grad;
}

}  // namespace

Vec activation_gradient(const ActivationField& field, const Vec& x) {
  return gradient_with_step(field, x, field.fd_step());
}

double regularization_energy(const ActivationField& field, const Vec& x, double lambda) {
  if (lambda == 0.0) return 0.0;
  return 0.5 * lambda * activation_gradient(field, x).squaredNorm();
}

Vec regularization_gradient(const ActivationField& field, const Vec& x, double lambda) {
  const Eigen::Index n = x.size();
  if (lambda == 0.0) return Vec::Zero(n);
  const double outer = 2.0 * field.fd_step();
  const Vec first = activation_gradient(field, x);
  Vec out(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    Vec up = x, dn = x;
    up[k] += outer;
    dn[k] -= outer;
    // column k of the Hessian, by symmetry equal to d/dx_k of the gradient
    const Vec hess_k = (activation_gradient(field, up) - activation_gradient(field, dn)) / (2.0 * outer);
    out[k] = lambda * first.dot(hess_k);
  }
  return out;
}

}  // namespace latembed
