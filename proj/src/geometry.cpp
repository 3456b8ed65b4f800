#include "latembed/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "latembed/error.hpp"

namespace latembed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_axis(double x, double lo, double hi) {
  if (x >= lo && x < hi) return x;
  const double span = hi - lo;
  double y = std::fmod(x - lo, span);
  if (y < 0.0) y += span;
  // fmod can round up to span itself
  if (y >= span) y = 0.0;
  return lo + y;
}

std::vector<double> to_std(const Vec& u) { return {u.data(), u.data() + u.size()}; }

void require_dim(const Vec& v, int dim, const char* what) {
  if (v.size() != dim) {
    throw Error(ErrorCode::InvalidArgument, std::string(what) + " has dimension " +
                                                std::to_string(v.size()) + ", expected " +
                                                std::to_string(dim));
  }
}

}  // namespace

std::string_view to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Plane: return "plane";
    case ManifoldKind::Sphere: return "sphere";
    case ManifoldKind::Torus: return "torus";
    case ManifoldKind::Parametric: return "parametric";
  }
  return "?";
}

std::string_view to_string(CurvatureMethod method) {
  switch (method) {
    case CurvatureMethod::Auto: return "auto";
    case CurvatureMethod::FiniteDifference: return "numeric";
    case CurvatureMethod::Analytic: return "analytic";
  }
  return "?";
}

ManifoldSpec ManifoldSpec::plane(double extent) {
  if (!(extent > 0.0)) throw Error(ErrorCode::InvalidArgument, "plane extent must be positive");
  ManifoldSpec s;
  s.kind_ = ManifoldKind::Plane;
  s.ambient_dim_ = 3;
  s.intrinsic_dim_ = 2;
  s.lower_ = Vec::Constant(2, -extent);
  s.upper_ = Vec::Constant(2, extent);
  s.periodic_ = {false, false};
  return s;
}

ManifoldSpec ManifoldSpec::sphere(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "sphere radius must be positive");
  ManifoldSpec s;
  s.kind_ = ManifoldKind::Sphere;
  s.lower_ = Vec::Zero(2);
  s.upper_ = Vec(2);
  s.upper_ << std::numbers::pi, kTwoPi;
  s.periodic_ = {false, true};
  s.radius_ = radius;
  return s;
}

ManifoldSpec ManifoldSpec::torus(double major_radius, double minor_radius) {
  if (!(minor_radius > 0.0) || !(major_radius > minor_radius)) {
    throw Error(ErrorCode::InvalidArgument, "torus needs R > r > 0");
  }
  ManifoldSpec s;
  s.kind_ = ManifoldKind::Torus;
  s.lower_ = Vec::Zero(2);
  s.upper_ = Vec::Constant(2, kTwoPi);
  s.periodic_ = {true, true};
  s.radius_ = minor_radius;
  s.major_radius_ = major_radius;
  return s;
}

ManifoldSpec ManifoldSpec::parametric(const std::vector<std::string>& components, const Vec& lower,
                                      const Vec& upper, std::vector<bool> periodic) {
  const int d = static_cast<int>(lower.size());
  const int n = static_cast<int>(components.size());
  if (d < 1 || upper.size() != d) {
    throw Error(ErrorCode::InvalidArgument, "parameter bounds must be non-empty and of equal length");
  }
  if (n < d) {
    throw Error(ErrorCode::InvalidArgument, "intrinsic dimension " + std::to_string(d) +
                                                " exceeds ambient dimension " + std::to_string(n));
  }
  for (int i = 0; i < d; ++i) {
    if (!(lower[i] < upper[i])) {
      throw Error(ErrorCode::InvalidArgument, "parameter axis " + std::to_string(i + 1) +
                                                  " needs lower < upper");
    }
  }
  if (periodic.empty()) periodic.assign(static_cast<std::size_t>(d), false);
  if (static_cast<int>(periodic.size()) != d) {
    throw Error(ErrorCode::InvalidArgument, "periodic flags must match the parameter dimension");
  }

  ManifoldSpec s;
  s.kind_ = ManifoldKind::Parametric;
  s.ambient_dim_ = n;
  s.intrinsic_dim_ = d;
  s.lower_ = lower;
  s.upper_ = upper;
  s.periodic_ = std::move(periodic);
  s.components_.reserve(components.size());
  for (const auto& c : components) s.components_.push_back(Expression::parse(c, d));
  s.check_rank_on_grid();
  return s;
}

void ManifoldSpec::check_rank_on_grid() const {
  // interior nodes of a 5^d grid (capped for large d)
  const int d = intrinsic_dim_;
  const int per_axis = d <= 3 ? 5 : 3;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  for (;;) {
    Vec u(d);
    for (int a = 0; a < d; ++a) {
      u[a] = lower_[a] + extent(a) * (idx[static_cast<std::size_t>(a)] + 1.0) / (per_axis + 1.0);
    }
    try {
      frame_from_columns(eval(u), jacobian(u));
    } catch (const Error&) {
      std::string where;
      for (int a = 0; a < d; ++a) where += (a ? ", " : "") + std::to_string(u[a]);
      throw Error(ErrorCode::RankDeficient, "chart Jacobian loses rank at u = (" + where + ")");
    }
    int a = d - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
}

bool ManifoldSpec::contains(const Vec& u) const {
  if (u.size() != intrinsic_dim_) return false;
  for (int i = 0; i < intrinsic_dim_; ++i) {
    if (!std::isfinite(u[i])) return false;
    if (periodic(i)) continue;
    if (u[i] < lower_[i] || u[i] > upper_[i]) return false;
  }
  return true;
}

Vec ManifoldSpec::wrap(const Vec& u) const {
  Vec w = u;
  for (int i = 0; i < intrinsic_dim_; ++i) {
    if (periodic(i)) w[i] = wrap_axis(u[i], lower_[i], upper_[i]);
  }
  return w;
}

Vec ManifoldSpec::eval(const Vec& u_in) const {
  require_dim(u_in, intrinsic_dim_, "parameter");
  const Vec u = wrap(u_in);
  Vec x(ambient_dim_);
  switch (kind_) {
    case ManifoldKind::Plane:
      x << u[0], u[1], 0.0;
      break;
    case ManifoldKind::Sphere: {
      const double st = std::sin(u[0]);
      x << radius_ * st * std::cos(u[1]), radius_ * st * std::sin(u[1]), radius_ * std::cos(u[0]);
      break;
    }
    case ManifoldKind::Torus: {
      const double ring = major_radius_ + radius_ * std::cos(u[1]);
      x << ring * std::cos(u[0]), ring * std::sin(u[0]), radius_ * std::sin(u[1]);
      break;
    }
    case ManifoldKind::Parametric: {
      const auto uv = to_std(u);
      for (int i = 0; i < ambient_dim_; ++i) x[i] = components_[static_cast<std::size_t>(i)].eval(uv);
      break;
    }
  }
  return x;
}

Mat ManifoldSpec::jacobian(const Vec& u_in) const {
  require_dim(u_in, intrinsic_dim_, "parameter");
  const Vec u = wrap(u_in);
  Mat jac(ambient_dim_, intrinsic_dim_);
  switch (kind_) {
    case ManifoldKind::Plane:
      jac << 1.0, 0.0, 0.0, 1.0, 0.0, 0.0;
      break;
    case ManifoldKind::Sphere: {
      const double st = std::sin(u[0]), ct = std::cos(u[0]);
      const double sp = std::sin(u[1]), cp = std::cos(u[1]);
      jac << radius_ * ct * cp, -radius_ * st * sp,
             radius_ * ct * sp,  radius_ * st * cp,
             -radius_ * st,      0.0;
      break;
    }
    case ManifoldKind::Torus: {
      const double su = std::sin(u[0]), cu = std::cos(u[0]);
      const double sv = std::sin(u[1]), cv = std::cos(u[1]);
      const double ring = major_radius_ + radius_ * cv;
      jac << -ring * su, -radius_ * sv * cu,
              ring * cu, -radius_ * sv * su,
              0.0,        radius_ * cv;
      break;
    }
    case ManifoldKind::Parametric: {
      const auto uv = to_std(u);
      for (int i = 0; i < ambient_dim_; ++i) {
        const Dual r = components_[static_cast<std::size_t>(i)].eval_dual(uv);
        for (int j = 0; j < intrinsic_dim_; ++j) jac(i, j) = r.grad[static_cast<std::size_t>(j)];
      }
      break;
    }
  }
  return jac;
}

Mat ManifoldSpec::metric(const Vec& u) const {
  const Mat jac = jacobian(u);
  return jac.transpose() * jac;
}

double ManifoldSpec::gaussian_curvature(const Vec& u_in) const {
  require_dim(u_in, intrinsic_dim_, "parameter");
  const Vec u = wrap(u_in);
  switch (kind_) {
    case ManifoldKind::Plane: return 0.0;
    case ManifoldKind::Sphere: return 1.0 / (radius_ * radius_);
    case ManifoldKind::Torus: {
      const double cv = std::cos(u[1]);
      return cv / (radius_ * (major_radius_ + radius_ * cv));
    }
    case ManifoldKind::Parametric: break;
  }
  throw Error(ErrorCode::InvalidArgument, "no closed-form curvature for parametric charts");
}

Vec chart_eval(const ManifoldSpec& spec, const Vec& u) {
  if (!spec.contains(u)) throw Error(ErrorCode::OutOfDomain, "parameter outside the chart box");
  return spec.eval(u);
}

TangentFrame frame_from_columns(const Vec& base_point, const Mat& columns) {
  const int n = static_cast<int>(columns.rows());
  const int d = static_cast<int>(columns.cols());
  double scale = 0.0;
  for (int j = 0; j < d; ++j) scale = std::max(scale, columns.col(j).norm());
  const double rank_tol = 1e-12 * std::max(1.0, scale);

  Mat basis(n, n);
  int count = 0;
  // Modified Gram-Schmidt, two passes so orthogonality holds to round-off.
  auto orthogonalize = [&](Vec v) {
    for (int pass = 0; pass < 2; ++pass) {
      for (int b = 0; b < count; ++b) v -= basis.col(b).dot(v) * basis.col(b);
    }
    return v;
  };

  for (int j = 0; j < d; ++j) {
    Vec r = orthogonalize(columns.col(j));
    const double norm = r.norm();
    if (!(norm > rank_tol)) {
      throw Error(ErrorCode::RankDeficient,
                  "tangent column " + std::to_string(j + 1) + " is dependent on the previous ones");
    }
    basis.col(count++) = r / norm;
  }
  for (int e = 0; e < n && count < n; ++e) {
    Vec r = orthogonalize(Vec::Unit(n, e));
    const double norm = r.norm();
    if (norm < 1e-8) continue;
    basis.col(count++) = r / norm;
  }

  TangentFrame frame;
  frame.base_point = base_point;
  frame.tangent = basis.leftCols(d);
  frame.normal = basis.rightCols(n - d);
  return frame;
}

TangentFrame tangent_frame(const ManifoldSpec& spec, const Vec& u) {
  const Vec p = spec.eval(u);
  try {
    return frame_from_columns(p, spec.jacobian(u));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::RankDeficient || spec.kind() != ManifoldKind::Sphere) throw;
  }
  // Pole of the spherical chart: the surface is smooth there, only the
  // parametrization degenerates. Complete the radial normal instead.
  const Vec normal = p / p.norm();
  TangentFrame radial = frame_from_columns(p, normal);
  TangentFrame frame;
  frame.base_point = p;
  frame.tangent = radial.normal;
  frame.normal = radial.tangent;
  return frame;
}

Decomposition decompose(const TangentFrame& frame, const Vec& vec) {
  Decomposition out;
  out.tangential = frame.tangent * (frame.tangent.transpose() * vec);
  out.normal = frame.normal * (frame.normal.transpose() * vec);
  return out;
}

namespace {

constexpr double kTieTolerance = 1e-12;

ClosestPoint closest_on_plane(const ManifoldSpec& spec, const Vec& q) {
  Vec u(2);
  u << q[0], q[1];
  if (!spec.contains(u)) {
    throw Error(ErrorCode::OutOfDomain, "projection falls outside the plane patch");
  }
  ClosestPoint cp;
  cp.param = u;
  cp.point = spec.eval(u);
  return cp;
}

ClosestPoint closest_on_sphere(const ManifoldSpec& spec, const Vec& q) {
  ClosestPoint cp;
  const double norm = q.norm();
  Vec u(2);
  if (norm <= kTieTolerance) {
    cp.degenerate = true;
    u << 0.0, 0.0;
    cp.param = u;
    cp.point = spec.eval(u);
    return cp;
  }
  const double theta = std::acos(std::clamp(q[2] / norm, -1.0, 1.0));
  const double phi = std::atan2(q[1], q[0]);
  u << theta, phi;
  cp.param = spec.wrap(u);
  cp.point = (spec.radius() / norm) * q;
  return cp;
}

ClosestPoint closest_on_torus(const ManifoldSpec& spec, const Vec& q) {
  ClosestPoint cp;
  const double rho = std::hypot(q[0], q[1]);
  double around = 0.0;
  if (rho <= kTieTolerance) {
    cp.degenerate = true;
  } else {
    around = std::atan2(q[1], q[0]);
  }
  const double dx = rho - spec.major_radius();
  double tube = 0.0;
  if (std::hypot(dx, q[2]) <= kTieTolerance) {
    cp.degenerate = true;
  } else {
    tube = std::atan2(q[2], dx);
  }
  Vec u(2);
  u << around, tube;
  cp.param = spec.wrap(u);
  cp.point = spec.eval(cp.param);
  return cp;
}

Vec clamp_to_box(const ManifoldSpec& spec, Vec u) {
  for (int i = 0; i < spec.intrinsic_dim(); ++i) {
    if (!spec.periodic(i)) u[i] = std::clamp(u[i], spec.lower()[i], spec.upper()[i]);
  }
  return spec.wrap(u);
}

ClosestPoint gauss_newton(const ManifoldSpec& spec, const Vec& q, const Vec& u_init) {
  constexpr int kMaxIters = 100;
  constexpr double kStepTol = 1e-12;

  Vec u = spec.wrap(u_init);
  Vec x = spec.eval(u);
  double f = 0.5 * (x - q).squaredNorm();
  const int d = spec.intrinsic_dim();

  for (int it = 1; it <= kMaxIters; ++it) {
    const Mat jac = spec.jacobian(u);
    const Vec grad = jac.transpose() * (x - q);
    Mat normal_eq = jac.transpose() * jac;
    normal_eq.diagonal().array() += 1e-14 * std::max(1.0, normal_eq.diagonal().maxCoeff());
    const Vec step = -normal_eq.ldlt().solve(grad);

    double t = 1.0;
    bool accepted = false;
    Vec u_next;
    while (t * step.norm() >= kStepTol) {
      u_next = clamp_to_box(spec, u + t * step);
      const Vec x_next = spec.eval(u_next);
      const double f_next = 0.5 * (x_next - q).squaredNorm();
      if (f_next < f) {
        accepted = true;
        x = x_next;
        f = f_next;
        break;
      }
      t *= 0.5;
    }

    if (!accepted) {
      // no decrease is resolvable above the step tolerance: converged
      ClosestPoint cp;
      cp.param = u;
      cp.point = x;
      cp.iterations = it;
      return cp;
    }
    Vec moved = u_next - u;
    for (int i = 0; i < d; ++i) {
      // a wrap across the seam is not a long step
      if (spec.periodic(i)) moved[i] = std::remainder(moved[i], spec.extent(i));
    }
    u = u_next;
    if (moved.norm() < kStepTol) {
      ClosestPoint cp;
      cp.param = u;
      cp.point = x;
      cp.iterations = it;
      return cp;
    }
  }
  throw Error(ErrorCode::NoConvergence, "Gauss-Newton projection did not converge in 100 iterations");
}

}  // namespace

ClosestPoint closest_point(const ManifoldSpec& spec, const Vec& q, const Vec& u_init) {
  require_dim(q, spec.ambient_dim(), "query point");
  if (!q.allFinite()) throw Error(ErrorCode::InvalidArgument, "query point is not finite");
  if (!spec.contains(u_init)) throw Error(ErrorCode::OutOfDomain, "initial parameter outside the chart box");
  switch (spec.kind()) {
    case ManifoldKind::Plane: return closest_on_plane(spec, q);
    case ManifoldKind::Sphere: return closest_on_sphere(spec, q);
    case ManifoldKind::Torus: return closest_on_torus(spec, q);
    case ManifoldKind::Parametric: break;
  }
  return gauss_newton(spec, q, u_init);
}

ClosestPoint closest_point(const ManifoldSpec& spec, const Vec& q) {
  const int d = spec.intrinsic_dim();
  if (spec.kind() != ManifoldKind::Parametric) {
    return closest_point(spec, q, spec.lower());
  }
  require_dim(q, spec.ambient_dim(), "query point");
  const int per_axis = std::max(4, static_cast<int>(std::floor(std::pow(4096.0, 1.0 / d))));
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  Vec best_u = spec.lower();
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    Vec u(d);
    for (int a = 0; a < d; ++a) {
      const double frac = spec.periodic(a) ? idx[static_cast<std::size_t>(a)] / double(per_axis)
                                           : idx[static_cast<std::size_t>(a)] / double(per_axis - 1);
      u[a] = spec.lower()[a] + frac * spec.extent(a);
    }
    const double dist = (spec.eval(u) - q).squaredNorm();
    if (dist < best) {
      best = dist;
      best_u = u;
    }
    int a = d - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return closest_point(spec, q, best_u);
}

// --- curvature -------------------------------------------------------------

namespace {

// Christoffel symbols of the second kind, Gamma[(k*d + i)*d + j].
std::vector<double> christoffel(const ManifoldSpec& spec, const Vec& u, const Vec& h) {
  const int d = spec.intrinsic_dim();
  const Mat g = spec.metric(u);
  const Mat g_inv = g.inverse();

  // dg[m](j, l) = d g_jl / d u^m
  std::vector<Mat> dg(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    Vec up = u, dn = u;
    up[m] += h[m];
    dn[m] -= h[m];
    dg[static_cast<std::size_t>(m)] = (spec.metric(up) - spec.metric(dn)) / (2.0 * h[m]);
  }

  std::vector<double> gamma(static_cast<std::size_t>(d * d * d), 0.0);
  for (int k = 0; k < d; ++k) {
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int l = 0; l < d; ++l) {
          s += g_inv(k, l) * (dg[static_cast<std::size_t>(i)](j, l) + dg[static_cast<std::size_t>(j)](i, l) -
                              dg[static_cast<std::size_t>(l)](i, j));
        }
        gamma[static_cast<std::size_t>((k * d + i) * d + j)] = 0.5 * s;
      }
    }
  }
  return gamma;
}

}  // namespace

Vec RiemannTensor::apply(const Vec& v, const Vec& w) const {
  Vec out = Vec::Zero(dim_);
  for (int l = 0; l < dim_; ++l) {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        for (int k = 0; k < dim_; ++k) s += (*this)(l, i, j, k) * v[i] * w[j] * w[k];
      }
    }
    out[l] = s;
  }
  return out;
}

RiemannTensor riemann_tensor(const ManifoldSpec& spec, const Vec& u, double step_fraction) {
  const int d = spec.intrinsic_dim();
  require_dim(u, d, "parameter");
  if (!spec.contains(u)) throw Error(ErrorCode::OutOfDomain, "parameter outside the chart box");
  Vec h(d);
  for (int a = 0; a < d; ++a) {
    h[a] = step_fraction * spec.extent(a);
    if (spec.periodic(a)) continue;
    if (u[a] - 2.0 * h[a] < spec.lower()[a] || u[a] + 2.0 * h[a] > spec.upper()[a]) {
      throw Error(ErrorCode::StencilOutOfDomain,
                  "parameter axis " + std::to_string(a + 1) + " is within the stencil width of the boundary");
    }
  }

  const auto at = [d](int k, int i, int j) { return static_cast<std::size_t>((k * d + i) * d + j); };
  const std::vector<double> gamma = christoffel(spec, u, h);
  // dgamma[m] = d Gamma / d u^m
  std::vector<std::vector<double>> dgamma(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    Vec up = u, dn = u;
    up[m] += h[m];
    dn[m] -= h[m];
    const auto gp = christoffel(spec, up, h);
    const auto gm = christoffel(spec, dn, h);
    auto& out = dgamma[static_cast<std::size_t>(m)];
    out.resize(gp.size());
    for (std::size_t t = 0; t < gp.size(); ++t) out[t] = (gp[t] - gm[t]) / (2.0 * h[m]);
  }

  std::vector<double> r(static_cast<std::size_t>(d * d * d * d), 0.0);
  const auto ridx = [d](int l, int i, int j, int k) { return static_cast<std::size_t>(((l * d + i) * d + j) * d + k); };
  for (int l = 0; l < d; ++l) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        for (int k = 0; k < d; ++k) {
          double s = dgamma[static_cast<std::size_t>(i)][at(l, j, k)] - dgamma[static_cast<std::size_t>(j)][at(l, i, k)];
          for (int m = 0; m < d; ++m) {
            s += gamma[at(l, i, m)] * gamma[at(m, j, k)] - gamma[at(l, j, m)] * gamma[at(m, i, k)];
          }
          r[ridx(l, i, j, k)] = s;
          r[ridx(l, j, i, k)] = -s;
        }
      }
    }
  }
  return RiemannTensor(d, spec.metric(u), std::move(r));
}

Vec riemann_apply(const ManifoldSpec& spec, const Vec& u, const Vec& v, const Vec& w, double step_fraction) {
  require_dim(v, spec.intrinsic_dim(), "tangent vector v");
  require_dim(w, spec.intrinsic_dim(), "tangent vector w");
  return riemann_tensor(spec, u, step_fraction).apply(v, w);
}

double gram_determinant(const Mat& metric, const Vec& v, const Vec& w) {
  const double vv = v.dot(metric * v);
  const double ww = w.dot(metric * w);
  const double vw = 0.5 * (v.dot(metric * w) + w.dot(metric * v));
  return vv * ww - vw * vw;
}

double sectional_curvature(const RiemannTensor& tensor, const Vec& v, const Vec& w, double eps_parallel) {
  const Mat& g = tensor.metric();
  const double gram = gram_determinant(g, v, w);
  if (!(gram > eps_parallel)) {
    throw Error(ErrorCode::DegeneratePlane, "tangent vectors are (numerically) parallel");
  }
  const double forward = tensor.apply(v, w).dot(g * v);
  const double backward = tensor.apply(w, v).dot(g * w);
  return 0.5 * (forward + backward) / gram;
}

bool uses_analytic_curvature(const ManifoldSpec& spec, const CurvatureOptions& options) {
  switch (options.method) {
    case CurvatureMethod::FiniteDifference: return false;
    case CurvatureMethod::Analytic:
      if (!spec.analytic_curvature_available()) {
        throw Error(ErrorCode::InvalidArgument, "analytic curvature requested for a parametric chart");
      }
      return true;
    case CurvatureMethod::Auto: return spec.analytic_curvature_available();
  }
  return false;
}

double sectional_curvature(const ManifoldSpec& spec, const Vec& u, const Vec& v, const Vec& w,
                           const CurvatureOptions& options) {
  const int d = spec.intrinsic_dim();
  require_dim(v, d, "tangent vector v");
  require_dim(w, d, "tangent vector w");
  if (uses_analytic_curvature(spec, options)) {
    if (!spec.contains(u)) throw Error(ErrorCode::OutOfDomain, "parameter outside the chart box");
    if (!(gram_determinant(spec.metric(u), v, w) > options.eps_parallel)) {
      throw Error(ErrorCode::DegeneratePlane, "tangent vectors are (numerically) parallel");
    }
    // every built-in is a surface, so each tangent plane carries the Gaussian curvature
    return spec.gaussian_curvature(u);
  }
  return sectional_curvature(riemann_tensor(spec, u, options.step_fraction), v, w, options.eps_parallel);
}

}  // namespace latembed
