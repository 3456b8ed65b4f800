#pragma once

#include <cstdint>
#include <vector>

#include "latembed/geometry.hpp"

namespace latembed {

/// Equal-weight rule on the unit sphere S^{d-1} of a d-dimensional tangent space.
struct QuadratureRule {
  int dim = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  int resolution = 0;
};

/// Surface measure of S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double sphere_measure(int d);

/// d = 2: `resolution` equally spaced angles. d >= 3: `resolution`
/// normalized Gaussian samples drawn from a 64-bit Mersenne twister seeded
/// with `seed` (Box-Muller on raw engine output, so the rule is identical
/// across standard libraries). Throws BadResolution if resolution < 4.
QuadratureRule build_quadrature(int d, int resolution, std::uint64_t seed);

struct CurvatureIntegral {
  double value = 0.0;
  std::size_t retained_pairs = 0;
  std::size_t rejected_pairs = 0;
  /// Pair weight mass after rescaling; equals sphere_measure(d)^2.
  double rescaled_mass = 0.0;
};

/// Sum over node pairs (i, j) of w_i w_j K(u, v_i, w_j), where the nodes are
/// first mapped to metric-orthonormal chart vectors. Pairs whose Gram
/// determinant is <= eps_parallel are dropped and the remaining weight is
/// rescaled to the full squared sphere measure.
/// Throws AllPairsDegenerate if nothing survives.
CurvatureIntegral curvature_double_integral(const ManifoldSpec& spec, const Vec& u, const QuadratureRule& rule,
                                            const CurvatureOptions& options = {});

/// The integral pulled back to an ambient point through its closest point.
double curvature_integral_at(const ManifoldSpec& spec, const Vec& q, const QuadratureRule& rule,
                             const CurvatureOptions& options = {});

/// Central differences of curvature_integral_at along each ambient axis.
Vec curvature_integral_gradient(const ManifoldSpec& spec, const Vec& q, const QuadratureRule& rule, double h_fd,
                                const CurvatureOptions& options = {});

}  // namespace latembed
