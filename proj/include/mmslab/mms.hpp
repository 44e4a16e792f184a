#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmslab/errors.hpp"

namespace mmslab {

inline constexpr double kTieTol = 1e-9;      // ball membership comparisons
inline constexpr double kMetricTol = 1e-9;   // triangle/symmetry validation

/// Storage geometry of a finite metric measure space. Dense keeps the full
/// n x n table; the other variants derive distances from per-point data so
/// large model spaces stay O(n) in memory and row scans vectorize.
enum class Geometry {
  Dense,       // explicit table
  DyadicCube,  // d(i,j) = scale * (mask_i XOR mask_j)
  CircleCube,  // d(i,j) = arc(node_i,node_j) + scale * (mask_i XOR mask_j)
  Line,        // d(i,j) = |coord_i - coord_j|
  Heisenberg,  // d(i,j) = scale * koranyi(p_i^{-1} * p_j)
};

struct Ball {
  enum class Kind { Open, Closed };
  int center = 0;
  double radius = 0.0;
  Kind kind = Kind::Closed;
};

/// A finite pointed-able metric measure space: distances, nonnegative
/// weights, optional labels. Immutable after construction; all operations
/// are pure.
class FiniteMMS {
public:
  FiniteMMS() = default;

  static FiniteMMS dense(int n, std::vector<double> dist, std::vector<double> weight);
  static FiniteMMS dyadic_cube(std::vector<std::uint32_t> masks, double scale,
                               std::vector<double> weight);
  static FiniteMMS circle_cube(std::vector<std::int32_t> nodes, int circle_n, double arc_step,
                               std::vector<std::uint32_t> masks, double mask_scale,
                               std::vector<double> weight);
  static FiniteMMS line(std::vector<double> coords, std::vector<double> weight);
  static FiniteMMS heisenberg(std::vector<double> x, std::vector<double> y,
                              std::vector<double> t, std::vector<double> weight);

  int n() const { return n_; }
  Geometry geometry() const { return geom_; }
  double d(int i, int j) const;

  /// Writes the distance row d(i, .) into out (size n). The hot path for
  /// every scan in the library; kernel-dispatched per geometry.
  void fill_row(int i, double* out) const;

  const std::vector<double>& weights() const { return weight_; }
  double weight(int i) const { return weight_[i]; }
  double total_mass() const;

  const std::optional<std::vector<std::string>>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> l);

  /// Distances multiplied by lambda, weights unchanged.
  FiniteMMS scaled(double lambda) const;
  /// Same space with every weight multiplied by c >= 0.
  FiniteMMS reweighted(double c) const;
  /// Same geometry with replaced weights.
  FiniteMMS with_weights(std::vector<double> weight) const;
  /// Induced subspace. Throws EmptySubset.
  FiniteMMS restricted(std::span<const int> subset) const;
  /// Force materialization of the dense table (size-guarded).
  FiniteMMS densified(int max_n = 4096) const;

  /// Full metric-axiom check for small n, seeded sampling beyond.
  /// Returns a violation description, or nullopt when clean.
  std::optional<std::string> check_metric(double tol = kMetricTol,
                                          std::uint64_t seed = 0) const;

  // Geometry parameters (valid per variant; used by model-aware probes).
  double dyadic_scale() const { return scale_; }
  const std::vector<std::uint32_t>& masks() const { return mask_; }
  const std::vector<double>& line_coords() const { return coord_; }

private:
  int n_ = 0;
  Geometry geom_ = Geometry::Dense;
  std::vector<double> weight_;
  std::optional<std::vector<std::string>> labels_;

  std::vector<double> dist_;           // Dense
  std::vector<std::uint32_t> mask_;    // DyadicCube, CircleCube
  double scale_ = 1.0;                 // mask scale; global scale for Heisenberg
  std::vector<std::int32_t> node_;     // CircleCube
  int circle_n_ = 0;                   // CircleCube
  double arc_step_ = 0.0;              // CircleCube
  std::vector<double> coord_;          // Line
  std::vector<double> hx_, hy_, ht_;   // Heisenberg

  void init_common(std::vector<double>&& weight);
};

struct PointedMMS {
  FiniteMMS space;
  int base = 0;
};

/// Pairing between two spaces used to build common ambient spaces.
struct Correspondence {
  std::vector<std::pair<int, int>> pairs;  // (index in X, index in Y)
  double slack = 0.0;                      // epsilon >= 0
};

struct GlueResult {
  FiniteMMS space;             // dense, n_X + n_Y points
  std::vector<int> map_x;      // X index -> glued index
  std::vector<int> map_y;      // Y index -> glued index
};

// ---- operations -----------------------------------------------------------

std::vector<int> ball_points(const FiniteMMS& space, const Ball& b);
double ball_measure(const FiniteMMS& space, const Ball& b);

/// T_r operator: dist/r, weights normalized by the open-ball mass at the
/// base. Throws ZeroMass when that mass vanishes.
PointedMMS rescale(const PointedMMS& p, double r);

/// Common ambient space: within-side distances preserved exactly, cross
/// distances d(u,v) = min over matched (p,q) of d_X(u,p) + slack + d_Y(q,v).
/// Throws InvalidCorrespondence when no ambient metric realizes the
/// correspondence (the closure would collapse a side distance).
GlueResult glue(const PointedMMS& X, const PointedMMS& Y, const Correspondence& corr);

FiniteMMS restrict_space(const FiniteMMS& space, std::span<const int> subset);

/// Per-radius density estimates mu(C(x,r)) / (2r) using closed balls.
std::vector<std::pair<double, double>> density_profile(const PointedMMS& p,
                                                       std::span<const double> radii);

/// Weighted metric net at resolution eta: greedy net points absorb the mass
/// of their cells. Base is always kept. Returns indices into the original
/// space alongside the coarse space.
struct CoarsenResult {
  PointedMMS space;
  std::vector<int> representative;  // coarse index -> original index
};
CoarsenResult coarsen(const PointedMMS& p, double eta);

/// max_i d(base, i), one row scan.
double max_dist_from(const FiniteMMS& space, int i);

}  // namespace mmslab
