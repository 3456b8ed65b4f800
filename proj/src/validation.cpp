#include "latembed/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "latembed/commands.hpp"
#include "latembed/curvature_integral.hpp"
#include "latembed/error.hpp"
#include "latembed/field.hpp"

namespace latembed {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

Vec random_vec(Rng& rng, int n, double lo, double hi) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

Vec random_unit(Rng& rng, int n) {
  std::normal_distribution<double> normal;
  Vec v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() < 1e-3);
  return v.normalized();
}

std::string fmt(const char* pattern, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

CriterionResult make(int id, const std::string& name, bool passed, std::string detail) {
  return CriterionResult{id, name, passed, std::move(detail)};
}

/// Random chart-tangent pair with a comfortably nondegenerate Gram determinant.
std::pair<Vec, Vec> random_tangent_pair(Rng& rng, const Mat& metric) {
  for (;;) {
    Vec v = random_vec(rng, 2, -1.0, 1.0);
    Vec w = random_vec(rng, 2, -1.0, 1.0);
    const double scale = (v.transpose() * metric * v).value() * (w.transpose() * metric * w).value();
    if (scale > 0.0 && gram_determinant(metric, v, w) > 1e-2 * scale) return {v, w};
  }
}

// Points within `reach` of each built-in, with their closest parameters
// kept away from chart singularities.
Vec sphere_point(Rng& rng, double radius, double reach) {
  Vec u(2);
  u << uniform(rng, 0.3, kPi - 0.3), uniform(rng, 0.0, 2.0 * kPi);
  const ManifoldSpec s = ManifoldSpec::sphere(radius);
  const Vec p = s.eval(u);
  return p * (1.0 + uniform(rng, -reach, reach) / radius);
}

Vec plane_point(Rng& rng, double extent, double reach) {
  Vec q(3);
  q << uniform(rng, -extent, extent), uniform(rng, -extent, extent), uniform(rng, -reach, reach);
  return q;
}

Vec torus_point(Rng& rng, double big_r, double small_r, double reach) {
  const ManifoldSpec t = ManifoldSpec::torus(big_r, small_r);
  Vec u(2);
  u << uniform(rng, 0.0, 2.0 * kPi), uniform(rng, 0.0, 2.0 * kPi);
  const TangentFrame frame = tangent_frame(t, u);
  return frame.base_point + uniform(rng, -reach, reach) * frame.normal.col(0);
}

Vec central_difference(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    g[k] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

// The plane-slab lattice shared by the stationarity and injectivity
// checks: 5 x 5 x 3 nodes filling the tube of the plane.
LatticeSpec slab_lattice() {
  LatticeSpec lattice;
  lattice.lower = Vec(3);
  lattice.upper = Vec(3);
  lattice.lower << -0.2, -0.2, -0.1;
  lattice.upper << 0.2, 0.2, 0.1;
  lattice.spacing = 0.1;
  return lattice;
}

const EmbedResult& slab_embedding() {
  static const EmbedResult result = [] {
    const ManifoldSpec plane = ManifoldSpec::plane();
    return embed_lattice(EnergyParams{}, plane, slab_lattice(), SolverConfig{});
  }();
  return result;
}

CriterionResult constant_curvature() {
  const char* name = "constant-curvature oracle";
  Rng rng(101);
  double worst_fd = 0.0;
  double worst_analytic = 0.0;
  bool ok = true;
  for (double r : {0.5, 1.0, 2.0}) {
    const ManifoldSpec sphere = ManifoldSpec::sphere(r);
    const double expected = 1.0 / (r * r);
    for (int trial = 0; trial < 100; ++trial) {
      Vec u(2);
      u << uniform(rng, 0.25, kPi - 0.25), uniform(rng, 0.0, 2.0 * kPi);
      const auto [v, w] = random_tangent_pair(rng, sphere.metric(u));
      const double fd = sectional_curvature(sphere, u, v, w, {CurvatureMethod::FiniteDifference});
      const double an = sectional_curvature(sphere, u, v, w, {CurvatureMethod::Analytic});
      worst_fd = std::max(worst_fd, std::abs(fd - expected));
      worst_analytic = std::max(worst_analytic, std::abs(an - expected));
    }
  }
  ok = worst_fd <= 1e-3 && worst_analytic <= 1e-6;

  const ManifoldSpec plane = ManifoldSpec::plane();
  double worst_plane = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec u = random_vec(rng, 2, -9.0, 9.0);
    const auto [v, w] = random_tangent_pair(rng, plane.metric(u));
    worst_plane = std::max(worst_plane,
                           std::abs(sectional_curvature(plane, u, v, w, {CurvatureMethod::FiniteDifference})));
    worst_plane = std::max(worst_plane, std::abs(sectional_curvature(plane, u, v, w, {CurvatureMethod::Analytic})));
  }
  ok = ok && worst_plane <= 1e-8;
  return make(1, name, ok,
              fmt("sphere max err fd %.3g, analytic %.3g", worst_fd, worst_analytic) +
                  fmt("; plane max |K| %.3g", worst_plane));
}

CriterionResult torus_curvature() {
  const double big_r = 2.0, small_r = 0.5;
  const ManifoldSpec torus = ManifoldSpec::torus(big_r, small_r);
  Rng rng(202);
  double worst = 0.0;
  for (double v : {0.0, kPi / 2.0, kPi}) {
    const double expected = std::cos(v) / (small_r * (big_r + small_r * std::cos(v)));
    for (int trial = 0; trial < 10; ++trial) {
      Vec u(2);
      u << uniform(rng, 0.0, 2.0 * kPi), v;
      const auto [a, b] = random_tangent_pair(rng, torus.metric(u));
      const double k = sectional_curvature(torus, u, a, b, {CurvatureMethod::FiniteDifference});
      worst = std::max(worst, std::abs(k - expected));
    }
  }
  return make(2, "torus curvature oracle", worst <= 1e-3, fmt("max err %.3g (fd path, v in {0, pi/2, pi})", worst));
}

CriterionResult curvature_integral_oracle() {
  Vec u(2);
  u << 1.1, 0.7;
  const double four_pi_sq = 4.0 * kPi * kPi;
  const QuadratureRule rule64 = build_quadrature(2, 64, 0);
  const QuadratureRule rule256 = build_quadrature(2, 256, 0);

  const double c1 = curvature_double_integral(ManifoldSpec::sphere(1.0), u, rule64).value;
  const double c2 = curvature_double_integral(ManifoldSpec::sphere(2.0), u, rule64).value;
  const double rel1 = std::abs(c1 - four_pi_sq) / four_pi_sq;
  const double rel2 = std::abs(c2 - 9.8696) / 9.8696;

  Vec up(2);
  up << 0.3, -2.0;
  const double cp = std::abs(curvature_double_integral(ManifoldSpec::plane(), up, rule64).value);

  const double err64 = std::abs(c1 - four_pi_sq);
  const double err256 = std::abs(curvature_double_integral(ManifoldSpec::sphere(1.0), u, rule256).value - four_pi_sq);

  const bool ok = rel1 <= 0.01 && rel2 <= 0.01 && cp <= 1e-8 && err256 <= err64;
  return make(3, "curvature integral", ok,
              fmt("r=1 rel err %.3g, r=2 rel err %.3g", rel1, rel2) + fmt("; plane |C| %.3g", cp) +
                  fmt("; r=1 err at 64 / 256 nodes: %.3g / %.3g", err64, err256));
}

CriterionResult gradient_consistency() {
  EnergyParams params;
  params.alpha = 1.5;
  params.beta = 2.5;
  params.gamma = 0.5;
  params.lambda = 0.01;
  const double delta = params.field.tube_radius;
  Rng rng(404);

  struct Case {
    std::string label;
    ManifoldSpec spec;
    std::function<Vec()> sample;
  };
  const std::vector<Case> cases{
      {"sphere", ManifoldSpec::sphere(1.0), [&] { return sphere_point(rng, 1.0, 1.8 * delta); }},
      {"plane", ManifoldSpec::plane(), [&] { return plane_point(rng, 5.0, 1.8 * delta); }},
      {"torus", ManifoldSpec::torus(2.0, 0.5), [&] { return torus_point(rng, 2.0, 0.5, 1.8 * delta); }},
  };

  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    double worst_ratio = 0.0;
    int failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const Vec q = c.sample();
      const Vec g = total_gradient(params, c.spec, q);
      const Vec fd = central_difference([&](const Vec& x) { return total_energy(params, c.spec, x); }, q, 1e-5);
      const double tol = std::max(1e-4, 1e-3 * fd.norm());
      const double err = (g - fd).cwiseAbs().maxCoeff();
      worst_ratio = std::max(worst_ratio, err / tol);
      if (err > tol) ++failures;
    }
    ok = ok && failures == 0;
    detail += (detail.empty() ? "" : "; ") + c.label + fmt(" worst err/tol %.3g", worst_ratio);
  }
  return make(4, "gradient consistency", ok, detail);
}

CriterionResult projection_equivalence() {
  EnergyParams params;
  params.gamma = 0.0;
  params.lambda = 0.0;
  SolverConfig solver;
  solver.grad_tol = 1e-7;
  Rng rng(505);

  struct Case {
    std::string label;
    ManifoldSpec spec;
    std::function<Vec()> sample;
  };
  const std::vector<Case> cases{
      {"sphere", ManifoldSpec::sphere(1.0), [&] { return sphere_point(rng, 1.0, 0.5); }},
      {"plane", ManifoldSpec::plane(), [&] { return plane_point(rng, 8.0, 1.0); }},
      {"torus", ManifoldSpec::torus(2.0, 0.5), [&] { return torus_point(rng, 2.0, 0.5, 0.3); }},
  };

  bool ok = true;
  std::string detail;
  for (const Case& c : cases) {
    double worst = 0.0;
    int not_converged = 0;
    int increasing = 0;
    for (int trial = 0; trial < 50; ++trial) {
      const Vec q0 = c.sample();
      const Vec target = closest_point(c.spec, q0).point;
      const DescentResult r = descend_point(params, c.spec, q0, solver);
      if (!r.converged()) ++not_converged;
      worst = std::max(worst, (r.q - target).norm());
      for (std::size_t k = 1; k < r.energies.size(); ++k) {
        if (r.energies[k] > r.energies[k - 1]) {
          ++increasing;
          break;
        }
      }
    }
    ok = ok && worst <= 1e-6 && not_converged == 0 && increasing == 0;
    detail += (detail.empty() ? "" : "; ") + c.label + fmt(" max dist %.3g", worst) +
              fmt(", %g unconverged, %g increasing traces", not_converged, increasing);
  }
  return make(5, "projection equivalence", ok, detail);
}

CriterionResult stationarity() {
  const EmbedResult& result = slab_embedding();
  const ManifoldSpec plane = ManifoldSpec::plane();
  const StationarityReport rep = verify_stationarity(EnergyParams{}, plane, result.map, 1e-5);
  const bool ok = rep.checked > 0 && rep.pass_fraction >= 0.99;
  return make(6, "stationarity", ok,
              std::to_string(rep.passed) + "/" + std::to_string(rep.checked) + " attempted points with |r| <= 1e-5" +
                  fmt(", worst |r| %.3g", rep.worst_residual));
}

CriterionResult injectivity() {
  const EmbedResult& result = slab_embedding();
  const LatticeSpec lattice = slab_lattice();
  const double tol = default_injectivity_tolerance(lattice);
  const InjectivityReport rep = check_injective_invert(result.map, tol);
  std::size_t roundtrips = 0;
  if (rep.injective) {
    for (const auto& e : result.map.entries) {
      const auto back = rep.inverse.lookup(e.zeta);
      if (back && *back == e.q) ++roundtrips;
    }
  }
  const bool ok = rep.injective && roundtrips == result.map.entries.size();
  return make(7, "injectivity and inversion", ok,
              fmt("min image distance %.3g vs tol %.3g", rep.min_pair_distance, tol) + ", " +
                  std::to_string(roundtrips) + "/" + std::to_string(result.map.entries.size()) + " roundtrips");
}

CriterionResult linear_map_checks() {
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const EnergyParams params;
  Rng rng(808);
  std::vector<Vec> samples;
  for (int k = 0; k < 12; ++k) samples.push_back(sphere_point(rng, 1.0, 0.05));

  const Mat identity = Mat::Identity(3, 3);
  const double at_identity = alignment_of_linear_map(identity, samples, sphere, params);
  double min_perturbed = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 20; ++trial) {
    Mat e = Mat::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) e(i, j) = std::normal_distribution<double>()(rng);
    e /= e.norm();
    for (double t : {0.1, -0.1, 0.01, -0.01}) {
      min_perturbed = std::min(min_perturbed, alignment_of_linear_map(identity + t * e, samples, sphere, params));
    }
  }

  double worst_derivative = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Vec q = random_vec(rng, 3, -2.0, 2.0);
    const Mat j0 = Mat::NullaryExpr(3, 3, [&]() { return uniform(rng, -1.0, 1.0); });
    const int i = static_cast<int>(rng() % 3);
    const int j = static_cast<int>(rng() % 3);
    const double h = 1e-3;
    Mat jp = j0, jm = j0;
    jp(i, j) += h;
    jm(i, j) -= h;
    const double fd = ((q - jp * q)[i] - (q - jm * q)[i]) / (2.0 * h);
    worst_derivative = std::max(worst_derivative, std::abs(fd - residual_jacobian_derivative(q, i, j)));
  }

  const bool ok = at_identity == 0.0 && min_perturbed > 0.0 && worst_derivative <= 1e-10;
  return make(8, "linear-map energy and residual derivative", ok,
              fmt("A(I) = %.3g, min A(I+tE) = %.3g", at_identity, min_perturbed) +
                  fmt(", derivative max err %.3g", worst_derivative));
}

CriterionResult reduced_pde() {
  Rng rng(909);
  double worst = 0.0;
  int inconsistent_equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const Vec q = Vec::Constant(n, uniform(rng, -3.0, 3.0));
    double k = uniform(rng, 0.1, 2.0);
    if (rng() & 1) k = -k;
    const LambdaSolution s = solve_lambda_reduced(q, k);
    if (!s.consistent || !s.lambda) {
      ++inconsistent_equal;
      continue;
    }
    worst = std::max(worst, reduced_residual(q, *s.lambda, k).norm());
  }
  int detected = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    Vec q = random_vec(rng, n, -3.0, 3.0);
    q[1] = q[0] + (rng() & 1 ? 1.0 : -1.0) * uniform(rng, 0.1, 1.0);
    const double k = uniform(rng, 0.1, 2.0);
    if (!solve_lambda_reduced(q, k).consistent) ++detected;
  }
  const bool ok = inconsistent_equal == 0 && worst <= 1e-12 && detected == 100;
  return make(9, "reduced equation", ok,
              fmt("equal q: max residual %.3g", worst) + ", " + std::to_string(inconsistent_equal) +
                  " rejected; unequal q: " + std::to_string(detected) + "/100 reported inconsistent");
}

CriterionResult interpolation() {
  LatticeSpec lattice;
  lattice.lower = Vec::Constant(3, -1.0);
  lattice.upper = Vec::Constant(3, 1.0);
  lattice.spacing = 0.5;
  Mat a(3, 3);
  a << 1.2, -0.3, 0.5, 0.1, 0.9, -0.7, 0.4, 0.2, 1.1;
  Vec b(3);
  b << 0.25, -0.5, 0.125;

  EmbeddingMap map;
  for (const Vec& q : generate_lattice(lattice)) {
    EmbeddingEntry e;
    e.q = q;
    e.zeta = a * q + b;
    e.converged = true;
    e.status = PointStatus::Converged;
    map.entries.push_back(std::move(e));
  }

  Rng rng(1010);
  const double h = lattice.spacing / 8.0;
  double worst_value = 0.0;
  double worst_jacobian = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Vec x = random_vec(rng, 3, -1.0 + 2.0 * h, 1.0 - 2.0 * h);
    worst_value = std::max(worst_value, (extend_map(map, lattice, x) - (a * x + b)).cwiseAbs().maxCoeff());
    worst_jacobian =
        std::max(worst_jacobian, (jacobian_of_extension(map, lattice, x, h) - a).cwiseAbs().maxCoeff());
  }
  for (const auto& e : map.entries) {
    worst_value = std::max(worst_value, (extend_map(map, lattice, e.q) - e.zeta).cwiseAbs().maxCoeff());
  }
  const bool ok = worst_value <= 1e-12 && worst_jacobian <= 1e-8;
  return make(10, "interpolation and Jacobian", ok,
              fmt("affine max err %.3g, Jacobian max err %.3g", worst_value, worst_jacobian));
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CriterionResult determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("lattice-embed-determinism-" + std::to_string(::getpid()));
  RunConfig config;
  config.manifold.kind = ManifoldKind::Torus;
  config.manifold.major_radius = 2.0;
  config.manifold.radius = 0.5;
  config.lattice.lower = Vec(3);
  config.lattice.upper = Vec(3);
  config.lattice.lower << -2.6, -2.6, -0.6;
  config.lattice.upper << 2.6, 2.6, 0.6;
  config.lattice.spacing = 0.4;
  config.energy.gamma = 0.05;
  config.energy.quadrature.resolution = 16;
  config.output.directory = dir.string();

  std::ostringstream sink;
  auto run = [&](int workers) {
    CommandOptions options;
    options.workers = workers;
    options.log = &sink;
    const int code = run_command(Command::Embed, config, options);
    return std::make_pair(code, slurp(dir / "points.csv") + "\n--\n" + slurp(dir / "report.jsonl"));
  };
  const auto first = run(1);
  const auto second = run(1);
  const auto parallel = run(4);
  std::error_code ec;
  fs::remove_all(dir, ec);

  const bool nonempty = first.second.size() > 8;
  const bool ok = nonempty && first.second == second.second && first.second == parallel.second;
  return make(11, "determinism", ok,
              std::string(first.second == second.second ? "repeat identical" : "repeat DIFFERS") + ", " +
                  (first.second == parallel.second ? "serial/parallel identical" : "serial/parallel DIFFER") +
                  ", " + std::to_string(first.second.size()) + " bytes, embed exit " + std::to_string(first.first));
}

CriterionResult activation_field() {
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const double delta = 0.1;
  const ActivationField field(sphere, delta, 1e-4);
  Rng rng(1212);

  double plateau_err = 0.0;
  double outside = 0.0;
  double mid_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec dir = random_unit(rng, 3);
    plateau_err = std::max(plateau_err, std::abs(activation(field, dir) - 1.0));
    outside = std::max(outside, std::abs(activation(field, dir * (1.0 + uniform(rng, 2.0, 5.0) * delta))));
    outside = std::max(outside, std::abs(activation(field, dir * (1.0 - uniform(rng, 2.0, 5.0) * delta))));
    mid_err = std::max(mid_err, std::abs(activation(field, dir * (1.0 + 1.5 * delta)) - 0.5));
  }

  const double lambda = 1.0;
  double worst_rel = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Vec dir = random_unit(rng, 3);
    const double s = uniform(rng, 1.1, 1.9);
    const Vec x = dir * (1.0 + (rng() & 1 ? s : -s) * delta);
    const Vec g = regularization_gradient(field, x, lambda);
    const Vec fd =
        central_difference([&](const Vec& y) { return regularization_energy(field, y, lambda); }, x, 1e-5);
    worst_rel = std::max(worst_rel, (g - fd).norm() / fd.norm());
  }
  const bool ok = plateau_err <= 1e-12 && outside <= 1e-12 && mid_err <= 1e-12 && worst_rel <= 1e-3;
  return make(12, "activation field", ok,
              fmt("plateau err %.3g, beyond 2 delta %.3g", plateau_err, outside) +
                  fmt(", s=1.5 err %.3g, regularization gradient rel err %.3g", mid_err, worst_rel));
}

}  // namespace

const std::vector<AcceptanceCriterion>& acceptance_criteria() {
  static const std::vector<AcceptanceCriterion> criteria{
      {1, "constant-curvature oracle", constant_curvature},
      {2, "torus curvature oracle", torus_curvature},
      {3, "curvature integral", curvature_integral_oracle},
      {4, "gradient consistency", gradient_consistency},
      {5, "projection equivalence", projection_equivalence},
      {6, "stationarity", stationarity},
      {7, "injectivity and inversion", injectivity},
      {8, "linear-map energy and residual derivative", linear_map_checks},
      {9, "reduced equation", reduced_pde},
      {10, "interpolation and Jacobian", interpolation},
      {11, "determinism", determinism},
      {12, "activation field", activation_field},
  };
  return criteria;
}

std::string format_result(const CriterionResult& result) {
  std::string line = result.passed ? "[PASS] " : "[FAIL] ";
  if (result.id > 0) line += std::to_string(result.id) + " ";
  line += result.name;
  if (!result.detail.empty()) line += ": " + result.detail;
  return line;
}

std::vector<CriterionResult> run_acceptance_suite(std::ostream* log) {
  std::vector<CriterionResult> results;
  for (const AcceptanceCriterion& c : acceptance_criteria()) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = make(c.id, c.name, false, std::string("threw ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (log) *log << format_result(r) << fmt(" (%.2f s)", secs) << "\n" << std::flush;
    results.push_back(std::move(r));
  }
  return results;
}

CriterionResult check_configured_manifold(const RunConfig& config) {
  const char* name = "configured manifold";
  try {
    const ManifoldSpec spec = config.manifold.build();
    const int d = spec.intrinsic_dim();
    const int n = spec.ambient_dim();
    const int per_axis = 4;
    const CurvatureOptions curv = config.energy.curvature_options();
    double frame_err = 0.0;
    double curvature_gap = 0.0;
    std::size_t nodes = 0;
    std::size_t skipped = 0;
    std::vector<int> idx(static_cast<std::size_t>(d), 0);
    for (;;) {
      Vec u(d);
      for (int a = 0; a < d; ++a) {
        u[a] = spec.lower()[a] + spec.extent(a) * (idx[static_cast<std::size_t>(a)] + 0.5) / per_axis;
      }
      const TangentFrame f = tangent_frame(spec, u);
      Mat basis(n, n);
      basis << f.tangent, f.normal;
      frame_err = std::max(frame_err, (basis.transpose() * basis - Mat::Identity(n, n)).cwiseAbs().maxCoeff());
      if (d >= 2) {
        try {
          const double k = sectional_curvature(spec, u, Vec::Unit(d, 0), Vec::Unit(d, 1), curv);
          if (!std::isfinite(k)) throw Error(ErrorCode::Degenerate, "non-finite curvature");
          if (spec.analytic_curvature_available()) {
            const double fd =
                sectional_curvature(spec, u, Vec::Unit(d, 0), Vec::Unit(d, 1), {CurvatureMethod::FiniteDifference});
            curvature_gap = std::max(curvature_gap, std::abs(fd - spec.gaussian_curvature(u)));
          }
        } catch (const Error& e) {
          if (e.code() != ErrorCode::StencilOutOfDomain && e.code() != ErrorCode::DegeneratePlane) throw;
          ++skipped;
        }
      }
      ++nodes;
      int a = d - 1;
      while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a--)] = 0;
      if (a < 0) break;
    }
    const bool ok = frame_err <= 1e-10 && curvature_gap <= 1e-3;
    return make(0, name, ok,
                std::string(to_string(spec.kind())) + ", " + std::to_string(nodes) + " nodes" +
                    fmt(", frame orthonormality err %.3g, fd vs closed-form curvature %.3g", frame_err,
                        curvature_gap) +
                    (skipped ? ", " + std::to_string(skipped) + " curvature samples skipped" : ""));
  } catch (const std::exception& e) {
    return make(0, name, false, std::string("threw ") + e.what());
  }
}

}  // namespace latembed
