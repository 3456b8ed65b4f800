#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "latembed/expression.hpp"

namespace latembed {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ManifoldKind { Plane, Sphere, Torus, Parametric };

std::string_view to_string(ManifoldKind kind);

/// A d-dimensional manifold in R^n given by a single chart over a
/// rectangular parameter box. Periodic axes accept any coordinate and are
/// wrapped into [lower, upper) before evaluation.
///
/// Built-in charts:
///   plane          (u1, u2, 0) over [-extent, extent]^2
///   sphere(r)      (theta, phi), theta = colatitude in [0, pi], phi in [0, 2 pi) periodic
///   torus(R, r)    ((R + r cos v) cos u, (R + r cos v) sin u, r sin v), both axes periodic
///
/// Instances are immutable and safe to share between threads.
class ManifoldSpec {
public:
  static ManifoldSpec plane(double extent = 10.0);
  static ManifoldSpec sphere(double radius);
  static ManifoldSpec torus(double major_radius, double minor_radius);
  /// Chart given by one expression per ambient coordinate, in the variables
  /// u1..ud where d = lower.size(). Throws RankDeficient if the Jacobian
  /// loses rank anywhere on a coarse interior grid.
  static ManifoldSpec parametric(const std::vector<std::string>& components, const Vec& lower,
                                 const Vec& upper, std::vector<bool> periodic = {});

  ManifoldKind kind() const { return kind_; }
  int ambient_dim() const { return ambient_dim_; }
  int intrinsic_dim() const { return intrinsic_dim_; }
  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  bool periodic(int axis) const { return periodic_[static_cast<std::size_t>(axis)]; }
  double extent(int axis) const { return upper_[axis] - lower_[axis]; }
  bool analytic_curvature_available() const { return kind_ != ManifoldKind::Parametric; }

  double radius() const { return radius_; }              // sphere radius, torus tube radius
  double major_radius() const { return major_radius_; }  // torus only
  double plane_extent() const { return upper_[0]; }      // plane only
  const std::vector<Expression>& components() const { return components_; }

  /// True when u lies in the box; periodic axes are unrestricted.
  bool contains(const Vec& u) const;
  Vec wrap(const Vec& u) const;

  /// Chart value without the domain check (periodic axes wrapped).
  Vec eval(const Vec& u) const;
  /// n x d chart Jacobian (exact: analytic for built-ins, forward-mode for expressions).
  Mat jacobian(const Vec& u) const;
  /// First fundamental form J^T J.
  Mat metric(const Vec& u) const;
  /// Closed-form Gaussian curvature of a built-in surface at u.
  double gaussian_curvature(const Vec& u) const;

private:
  ManifoldSpec() = default;
  void check_rank_on_grid() const;

  ManifoldKind kind_ = ManifoldKind::Plane;
  int ambient_dim_ = 3;
  int intrinsic_dim_ = 2;
  Vec lower_;
  Vec upper_;
  std::vector<bool> periodic_;
  double radius_ = 0.0;
  double major_radius_ = 0.0;
  std::vector<Expression> components_;
};

/// Ambient point of the chart at u. Throws OutOfDomain outside the box.
Vec chart_eval(const ManifoldSpec& spec, const Vec& u);

/// Orthonormal bases of T_pM (columns of `tangent`, n x d) and N_pM
/// (columns of `normal`, n x (n-d)).
struct TangentFrame {
  Vec base_point;
  Mat tangent;
  Mat normal;
};

/// Frame from an explicit set of tangent columns: ordered Gram-Schmidt on the
/// columns, normal completion from the residuals of e_1..e_n.
/// Throws RankDeficient if the columns are (numerically) dependent.
TangentFrame frame_from_columns(const Vec& base_point, const Mat& columns);

/// Frame of the chart at u. At chart singularities of the sphere (the poles)
/// the frame falls back to the radial normal.
TangentFrame tangent_frame(const ManifoldSpec& spec, const Vec& u);

struct Decomposition {
  Vec tangential;
  Vec normal;
};

Decomposition decompose(const TangentFrame& frame, const Vec& vec);

struct ClosestPoint {
  Vec point;
  Vec param;
  /// q was equidistant from several candidates; param is the smallest
  /// lexicographic one.
  bool degenerate = false;
  int iterations = 0;
};

/// Local closest point from u_init. Built-ins use closed forms (u_init only
/// needs to be valid); parametric charts use damped Gauss-Newton.
ClosestPoint closest_point(const ManifoldSpec& spec, const Vec& q, const Vec& u_init);
/// Same, seeded from the best node of a coarse parameter grid.
ClosestPoint closest_point(const ManifoldSpec& spec, const Vec& q);

enum class CurvatureMethod { Auto, FiniteDifference, Analytic };

std::string_view to_string(CurvatureMethod method);

struct CurvatureOptions {
  CurvatureMethod method = CurvatureMethod::Auto;
  /// Finite-difference step as a fraction of each axis extent.
  double step_fraction = 1e-4;
  /// Lower bound on the metric Gram determinant of a tangent pair.
  double eps_parallel = 1e-8;
};

/// Coordinate Riemann tensor R^l_{ijk} at a parameter point, assembled from
/// central differences of the metric (Christoffel symbols) and of the
/// Christoffel symbols. Antisymmetry in (i, j) is exact.
class RiemannTensor {
public:
  RiemannTensor(int dim, Mat metric, std::vector<double> components)
      : dim_(dim), metric_(std::move(metric)), data_(std::move(components)) {}

  int dim() const { return dim_; }
  const Mat& metric() const { return metric_; }
  double operator()(int l, int i, int j, int k) const {
    return data_[static_cast<std::size_t>(((l * dim_ + i) * dim_ + j) * dim_ + k)];
  }

  /// R(v, w) w in chart coordinates.
  Vec apply(const Vec& v, const Vec& w) const;

private:
  int dim_;
  Mat metric_;
  std::vector<double> data_;
};

/// Throws StencilOutOfDomain when the two-level stencil leaves the box.
RiemannTensor riemann_tensor(const ManifoldSpec& spec, const Vec& u, double step_fraction = 1e-4);

Vec riemann_apply(const ManifoldSpec& spec, const Vec& u, const Vec& v, const Vec& w,
                  double step_fraction = 1e-4);

/// Metric Gram determinant <v,v><w,w> - <v,w>^2.
double gram_determinant(const Mat& metric, const Vec& v, const Vec& w);

/// Sectional curvature of span{v, w} from a precomputed tensor. The
/// numerator is averaged over the (v,w) and (w,v) orderings so the result is
/// exactly symmetric. Throws DegeneratePlane if the Gram determinant is too small.
double sectional_curvature(const RiemannTensor& tensor, const Vec& v, const Vec& w, double eps_parallel);

double sectional_curvature(const ManifoldSpec& spec, const Vec& u, const Vec& v, const Vec& w,
                           const CurvatureOptions& options = {});

/// Whether `options` resolves to the closed-form path for this manifold.
bool uses_analytic_curvature(const ManifoldSpec& spec, const CurvatureOptions& options);

}  // namespace latembed
