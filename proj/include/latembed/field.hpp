#pragma once

#include "latembed/geometry.hpp"

namespace latembed {

/// Smooth activation over the tube around M: 1 within distance delta,
/// quintic smoothstep decay over [delta, 2 delta], 0 beyond.
class ActivationField {
public:
  /// Throws InvalidArgument unless delta > 0 and 0 < fd_step < delta / 10.
  ActivationField(const ManifoldSpec& manifold, double tube_radius, double fd_step);

  const ManifoldSpec& manifold() const { return *manifold_; }
  double tube_radius() const { return tube_radius_; }
  double fd_step() const { return fd_step_; }

  /// Unsigned distance to M measured through the closest point.
  double distance(const Vec& x) const;

private:
  const ManifoldSpec* manifold_;
  double tube_radius_;
  double fd_step_;
};

/// Profile as a function of s = dist / delta.
double activation_profile(double s);
/// d/ds of the profile.
double activation_profile_derivative(double s);

double activation(const ActivationField& field, const Vec& x);

/// Central differences with the field's step.
Vec activation_gradient(const ActivationField& field, const Vec& x);

/// (lambda / 2) |grad A|^2 with the finite-difference gradient.
double regularization_energy(const ActivationField& field, const Vec& x, double lambda);

/// lambda * sum_j (dA/dx_j)(d^2 A / dx_k dx_j); second derivatives are
/// central differences (step 2 h) of the first-derivative stencil.
Vec regularization_gradient(const ActivationField& field, const Vec& x, double lambda);

}  // namespace latembed
