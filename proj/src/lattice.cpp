#include "latembed/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latembed/error.hpp"

namespace latembed {

std::string_view to_string(PointStatus status) {
  switch (status) {
    case PointStatus::Converged: return "converged";
    case PointStatus::NotConverged: return "not_converged";
    case PointStatus::Skipped: return "skipped";
    case PointStatus::Failed: return "failed";
  }
  return "?";
}

std::vector<int> LatticeSpec::counts() const {
  if (lower.size() == 0 || upper.size() != lower.size()) {
    throw Error(ErrorCode::InvalidArgument, "lattice bounds must be non-empty and of equal length");
  }
  if (!(spacing > 0.0)) throw Error(ErrorCode::InvalidArgument, "lattice spacing must be positive");
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(lower.size()));
  for (Eigen::Index a = 0; a < lower.size(); ++a) {
    if (lower[a] > upper[a]) {
      throw Error(ErrorCode::EmptyLattice, "lattice axis " + std::to_string(a + 1) + " has lower > upper");
    }
    // the relative slack keeps e.g. (2 - 0) / 0.1 from flooring to 19
    out.push_back(static_cast<int>(std::floor((upper[a] - lower[a]) / spacing * (1.0 + 1e-12))) + 1);
  }
  return out;
}

std::size_t LatticeSpec::size() const {
  std::size_t total = 1;
  for (int c : counts()) total *= static_cast<std::size_t>(c);
  return total;
}

std::vector<Vec> generate_lattice(const LatticeSpec& spec) {
  const std::vector<int> counts = spec.counts();
  const int n = spec.dim();
  std::vector<Vec> points;
  points.reserve(spec.size());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec p(n);
    for (int a = 0; a < n; ++a) p[a] = spec.node(a, idx[static_cast<std::size_t>(a)]);
    points.push_back(std::move(p));
    int a = n - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == counts[static_cast<std::size_t>(a)]) {
      idx[static_cast<std::size_t>(a--)] = 0;
    }
    if (a < 0) break;
  }
  return points;
}

Vec extend_map(const EmbeddingMap& map, const LatticeSpec& lattice, const Vec& x) {
  const std::vector<int> counts = lattice.counts();
  const int n = lattice.dim();
  if (x.size() != n) throw Error(ErrorCode::InvalidArgument, "point dimension does not match the lattice");
  if (map.entries.size() != lattice.size()) {
    throw Error(ErrorCode::InvalidArgument, "embedding map does not cover the lattice");
  }

  std::vector<int> cell(static_cast<std::size_t>(n));
  std::vector<double> frac(static_cast<std::size_t>(n));
  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  std::size_t s = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] = s;
    s *= static_cast<std::size_t>(counts[static_cast<std::size_t>(a)]);
  }

  for (int a = 0; a < n; ++a) {
    const int c = counts[static_cast<std::size_t>(a)];
    const double first = lattice.node(a, 0);
    const double last = lattice.node(a, c - 1);
    const double slack = 1e-12 * lattice.spacing;
    if (!(x[a] >= first - slack && x[a] <= last + slack)) {
      throw Error(ErrorCode::OutOfHull, "point lies outside the lattice bounding box on axis " +
                                            std::to_string(a + 1));
    }
    if (c == 1) {
      cell[static_cast<std::size_t>(a)] = 0;
      frac[static_cast<std::size_t>(a)] = 0.0;
      continue;
    }
    int i = static_cast<int>(std::floor((x[a] - first) / lattice.spacing));
    i = std::clamp(i, 0, c - 2);
    const double lo = lattice.node(a, i);
    const double hi = lattice.node(a, i + 1);
    cell[static_cast<std::size_t>(a)] = i;
    frac[static_cast<std::size_t>(a)] = std::clamp((x[a] - lo) / (hi - lo), 0.0, 1.0);
  }

  Vec out = Vec::Zero(map.entries.front().zeta.size());
  for (unsigned corner = 0; corner < (1u << n); ++corner) {
    double weight = 1.0;
    std::size_t index = 0;
    bool valid = true;
    for (int a = 0; a < n; ++a) {
      const bool upper = (corner >> a) & 1u;
      if (upper && counts[static_cast<std::size_t>(a)] == 1) {
        valid = false;
        break;
      }
      const double t = frac[static_cast<std::size_t>(a)];
      weight *= upper ? t : 1.0 - t;
      index += static_cast<std::size_t>(cell[static_cast<std::size_t>(a)] + (upper ? 1 : 0)) *
               stride[static_cast<std::size_t>(a)];
    }
    if (!valid || weight == 0.0) continue;
    out += weight * map.entries[index].zeta;
  }
  return out;
}

Mat jacobian_of_extension(const EmbeddingMap& map, const LatticeSpec& lattice, const Vec& x, double h) {
  if (!(h > 0.0) || !(h < lattice.spacing / 4.0)) {
    throw Error(ErrorCode::InvalidArgument, "Jacobian step must lie in (0, spacing / 4)");
  }
  const int n = lattice.dim();
  Mat jac(map.entries.empty() ? 0 : map.entries.front().zeta.size(), n);
  for (int k = 0; k < n; ++k) {
    Vec up = x, dn = x;
    up[k] += h;
    dn[k] -= h;
    jac.col(k) = (extend_map(map, lattice, up) - extend_map(map, lattice, dn)) / (2.0 * h);
  }
  return jac;
}

void InverseTable::insert(const Vec& image, const Vec& preimage) {
  table_[std::vector<double>(image.data(), image.data() + image.size())] = preimage;
}

std::optional<Vec> InverseTable::lookup(const Vec& image) const {
  const auto it = table_.find(std::vector<double>(image.data(), image.data() + image.size()));
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

InjectivityReport check_injective_invert(const EmbeddingMap& map, double tol) {
  if (map.entries.empty()) throw Error(ErrorCode::InvalidArgument, "embedding map is empty");
  InjectivityReport report;
  report.min_pair_distance = std::numeric_limits<double>::infinity();
  const auto& e = map.entries;
  for (std::size_t i = 0; i < e.size(); ++i) {
    for (std::size_t j = i + 1; j < e.size(); ++j) {
      const double dist = (e[i].zeta - e[j].zeta).norm();
      if (dist < report.min_pair_distance) {
        report.min_pair_distance = dist;
        if (!(dist > tol)) report.colliding_pair = std::make_pair(i, j);
      }
    }
  }
  report.injective = !report.colliding_pair.has_value();
  if (report.injective) {
    for (const auto& entry : e) report.inverse.insert(entry.zeta, entry.q);
  }
  return report;
}

double default_injectivity_tolerance(const LatticeSpec& lattice) { return 1e-9 * lattice.spacing; }

double residual_jacobian_derivative(const Vec& q, int i, int j) {
  if (i < 0 || j < 0 || i >= q.size() || j >= q.size()) {
    throw Error(ErrorCode::InvalidArgument, "Jacobian entry index out of range");
  }
  return -q[j];
}

double alignment_of_linear_map(const Mat& jacobian, const std::vector<Vec>& samples, const ManifoldSpec& spec,
                               const EnergyParams& params) {
  if (samples.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  double total = 0.0;
  for (const Vec& q : samples) {
    const ClosestPoint cp = closest_point(spec, q);
    const TangentFrame frame = tangent_frame(spec, cp.param);
    const Decomposition parts = decompose(frame, q - jacobian * q);
    total += 0.5 * params.alpha * parts.tangential.squaredNorm() + 0.5 * params.beta * parts.normal.squaredNorm();
  }
  return total;
}

}  // namespace latembed
