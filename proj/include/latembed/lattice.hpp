#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latembed/energy.hpp"
#include "latembed/geometry.hpp"

namespace latembed {

/// Axis-aligned grid lower + k * spacing on every axis.
struct LatticeSpec {
  Vec lower;
  Vec upper;
  double spacing = 1.0;

  int dim() const { return static_cast<int>(lower.size()); }
  /// Points per axis; throws EmptyLattice if some lower > upper.
  std::vector<int> counts() const;
  std::size_t size() const;
  /// Coordinate of node k on `axis`.
  double node(int axis, int k) const { return lower[axis] + k * spacing; }
};

/// Lexicographic order (first axis slowest).
std::vector<Vec> generate_lattice(const LatticeSpec& spec);

enum class PointStatus { Converged, NotConverged, Skipped, Failed };

std::string_view to_string(PointStatus status);

struct EmbeddingEntry {
  Vec q;
  Vec zeta;
  double residual_norm = 0.0;
  double energy = 0.0;
  int iterations = 0;
  bool converged = false;
  PointStatus status = PointStatus::NotConverged;
  std::string message;
};

/// zeta restricted to the lattice, one entry per lattice point in lattice order.
struct EmbeddingMap {
  std::vector<EmbeddingEntry> entries;
};

/// Multilinear interpolation of zeta over the enclosing lattice cell.
/// Exact at nodes and for affine maps. Throws OutOfHull outside the grid box.
Vec extend_map(const EmbeddingMap& map, const LatticeSpec& lattice, const Vec& x);

/// Central-difference Jacobian of extend_map; requires h < spacing / 4.
Mat jacobian_of_extension(const EmbeddingMap& map, const LatticeSpec& lattice, const Vec& x, double h);

/// Finite inverse zeta(q) -> q over the images of an injective map.
class InverseTable {
public:
  void insert(const Vec& image, const Vec& preimage);
  /// Exact lookup of an image point.
  std::optional<Vec> lookup(const Vec& image) const;
  std::size_t size() const { return table_.size(); }

private:
  std::map<std::vector<double>, Vec> table_;
};

struct InjectivityReport {
  bool injective = false;
  double min_pair_distance = 0.0;
  /// Set when injective.
  InverseTable inverse;
  /// Indices of a pair closer than tol, set when not injective.
  std::optional<std::pair<std::size_t, std::size_t>> colliding_pair;
};

InjectivityReport check_injective_invert(const EmbeddingMap& map, double tol);

/// Default collision tolerance 1e-9 * spacing.
double default_injectivity_tolerance(const LatticeSpec& lattice);

/// d/dJ_ij of (q - J q)_i, which is -q_j for every J.
double residual_jacobian_derivative(const Vec& q, int i, int j);

/// Sum over samples of (alpha/2)|(q - Jq)_T|^2 + (beta/2)|(q - Jq)_N|^2,
/// frames taken at the closest point of each sample.
double alignment_of_linear_map(const Mat& jacobian, const std::vector<Vec>& samples, const ManifoldSpec& spec,
                               const EnergyParams& params);

}  // namespace latembed
