#include "latembed/curvature_integral.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "latembed/error.hpp"

namespace latembed {

namespace {

double uniform_open(std::mt19937_64& engine) {
  // 53 random mantissa bits, shifted off zero so log() is finite
  return (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

double sphere_measure(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

QuadratureRule build_quadrature(int d, int resolution, std::uint64_t seed) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "quadrature needs a tangent dimension of at least 2");
  if (resolution < 4) throw Error(ErrorCode::BadResolution, "resolution must be at least 4");

  QuadratureRule rule;
  rule.dim = d;
  rule.seed = seed;
  rule.resolution = resolution;
  rule.nodes.reserve(static_cast<std::size_t>(resolution));
  const double weight = sphere_measure(d) / resolution;
  rule.weights.assign(static_cast<std::size_t>(resolution), weight);

  if (d == 2) {
    for (int k = 0; k < resolution; ++k) {
      const double angle = 2.0 * std::numbers::pi * k / resolution;
      Vec node(2);
      node << std::cos(angle), std::sin(angle);
      rule.nodes.push_back(node);
    }
    return rule;
  }

  std::mt19937_64 engine(seed);
  while (static_cast<int>(rule.nodes.size()) < resolution) {
    Vec node(d);
    for (int i = 0; i < d; i += 2) {
      const double radius = std::sqrt(-2.0 * std::log(uniform_open(engine)));
      const double angle = 2.0 * std::numbers::pi * uniform_open(engine);
      node[i] = radius * std::cos(angle);
      if (i + 1 < d) node[i + 1] = radius * std::sin(angle);
    }
    const double norm = node.norm();
    if (norm < 1e-6) continue;
    rule.nodes.push_back(node / norm);
  }
  return rule;
}

CurvatureIntegral curvature_double_integral(const ManifoldSpec& spec, const Vec& u, const QuadratureRule& rule,
                                            const CurvatureOptions& options) {
  const int d = spec.intrinsic_dim();
  if (d < 2) {
    throw Error(ErrorCode::AllPairsDegenerate, "a one-dimensional tangent space has no independent pairs");
  }
  if (rule.dim != d) {
    throw Error(ErrorCode::InvalidArgument, "quadrature dimension " + std::to_string(rule.dim) +
                                                " does not match the manifold dimension " + std::to_string(d));
  }
  if (!spec.contains(u)) throw Error(ErrorCode::OutOfDomain, "parameter outside the chart box");

  // Nodes are orthonormal coordinates of T_pM; pushing them through
  // E = L^{-T} (g = L L^T) gives chart vectors with <E a, E b>_g = a . b,
  // so the metric Gram determinant of a pair equals the Euclidean one.
  const bool analytic = uses_analytic_curvature(spec, options);
  double constant_k = 0.0;
  std::optional<RiemannTensor> tensor;
  Mat to_chart;
  if (analytic) {
    constant_k = spec.gaussian_curvature(u);
  } else {
    tensor.emplace(riemann_tensor(spec, u, options.step_fraction));
    Eigen::LLT<Mat> llt(tensor->metric());
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::RankDeficient, "metric is not positive definite at the base point");
    }
    to_chart = llt.matrixU().solve(Mat::Identity(d, d));
  }

  std::vector<Vec> chart_nodes;
  if (!analytic) {
    chart_nodes.reserve(rule.nodes.size());
    for (const Vec& node : rule.nodes) chart_nodes.push_back(to_chart * node);
  }

  const std::size_t count = rule.nodes.size();
  Mat node_matrix(d, static_cast<Eigen::Index>(count));
  for (std::size_t i = 0; i < count; ++i) node_matrix.col(static_cast<Eigen::Index>(i)) = rule.nodes[i];
  const Mat dots = node_matrix.transpose() * node_matrix;

  CurvatureIntegral out;
  double weighted = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = 0; j < count; ++j) {
      const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
      const double gram = dots(a, a) * dots(b, b) - dots(a, b) * dots(a, b);
      if (!(gram > options.eps_parallel)) {
        ++out.rejected_pairs;
        continue;
      }
      const double pair_weight = rule.weights[i] * rule.weights[j];
      const double k = analytic ? constant_k
                                : sectional_curvature(*tensor, chart_nodes[i], chart_nodes[j], 0.0);
      weighted += pair_weight * k;
      mass += pair_weight;
      ++out.retained_pairs;
    }
  }
  if (out.retained_pairs == 0) {
    throw Error(ErrorCode::AllPairsDegenerate, "every quadrature pair was rejected as parallel");
  }
  const double full = sphere_measure(d) * sphere_measure(d);
  const double scale = full / mass;
  out.value = weighted * scale;
  out.rescaled_mass = mass * scale;
  return out;
}

double curvature_integral_at(const ManifoldSpec& spec, const Vec& q, const QuadratureRule& rule,
                             const CurvatureOptions& options) {
  const ClosestPoint cp = closest_point(spec, q);
  return curvature_double_integral(spec, cp.param, rule, options).value;
}

Vec curvature_integral_gradient(const ManifoldSpec& spec, const Vec& q, const QuadratureRule& rule, double h_fd,
                                const CurvatureOptions& options) {
  if (!(h_fd > 0.0)) throw Error(ErrorCode::InvalidArgument, "finite-difference step must be positive");
  const int n = spec.ambient_dim();
  if (q.size() != n) throw Error(ErrorCode::InvalidArgument, "query point has the wrong dimension");
  Vec grad(n);
  for (int k = 0; k < n; ++k) {
    Vec up = q, dn = q;
    up[k] += h_fd;
    dn[k] -= h_fd;
    grad[k] = (curvature_integral_at(spec, up, rule, options) - curvature_integral_at(spec, dn, rule, options)) /
              (2.0 * h_fd);
  }
  return grad;
}

}  // namespace latembed
