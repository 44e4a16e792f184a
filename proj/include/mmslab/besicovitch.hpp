#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmslab/mms.hpp"

namespace mmslab {

/// A verified pair: every x in B(a, d) and y in B(b, d) has d(x,y) >= d,
/// where d = d(a,b) and the balls are open. margin = min d(x,y) - d; a pair
/// iff margin >= -1e-9 (the minimum always includes (a,b) itself, so the
/// margin of a genuine pair is exactly 0).
struct PairCertificate {
  int a = 0, b = 0;
  double d = 0.0;
  double margin = 0.0;
};

/// Exact margin by minimizing over the two open balls.
double is_besicovitch_pair(const FiniteMMS& X, int a, int b);

/// All certified pairs with min_d < d(a,b) <= max_d, sorted by (d, a, b).
/// Candidates with a witness point strictly inside both balls are pruned
/// before the full margin scan.
std::vector<PairCertificate> find_pairs(const FiniteMMS& X, double max_d, double min_d = 0.0);

/// Smallest certified pair distance above min_d, or nullopt.
std::optional<PairCertificate> min_pair_distance(const FiniteMMS& X, double min_d = 0.0);

/// Nearest-opposite-side map on B(a,d) u B(b,d) (the discrete closure of the
/// open balls). Ties broken by lowest index and flagged.
struct NeighborMap {
  std::vector<int> domain;  // points of both sides
  std::vector<int> image;   // iota(domain[k])
  bool had_ties = false;
};
NeighborMap neighbor_map(const FiniteMMS& X, const PairCertificate& pair);

/// The six structural properties of a pair in a uniform space:
///   0: B(a,2d) = B(a,d) u B(b,d)            (set identity)
///   1: B(x,d) = B(a,d) for all x in B(a,d)  (set identity)
///   2: d(x, iota(x)) = d
///   3: d(x,z) = d + d(iota(x), z) across sides
///   4: iota(iota(x)) = x
///   5: iota is an isometry
/// Set identities report the weight of the symmetric difference; numeric
/// checks report the maximum deviation. Boundary quantization in discrete
/// spaces may leave dust on the set identities; pass a mass tolerance to
/// accept it (model-space pairs on S pass strictly at 1e-9).
struct PairPropertyReport {
  struct Item {
    bool pass = false;
    double discrepancy = 0.0;
    std::string witness;
  };
  std::array<Item, 6> items;
  bool all_pass() const {
    for (const auto& it : items)
      if (!it.pass) return false;
    return true;
  }
};
PairPropertyReport verify_pair_properties(const FiniteMMS& X, const PairCertificate& pair,
                                          double set_mass_tol = 0.0);

/// A point b' with d(a,b') = 2 d(a,b) forming a pair with a; lowest index
/// wins; nullopt when the truncation boundary is reached.
std::optional<PairCertificate> double_pair(const FiniteMMS& X, const PairCertificate& pair);

/// Product structure from an iterated pair: coordinates (base ball index,
/// k-bit string) with the metric d(p,q) = d(pbar,qbar) + d * sum 2^j|s-t|.
struct ProductCoordinates {
  std::vector<int> domain;             // points of B(a, 2^k d)
  std::vector<int> base_coord;         // folded representative in B(a, d)
  std::vector<std::uint32_t> bits;     // k-bit coordinate string
  std::vector<int> chain;              // b_0 .. b_{k-1}
  double defect = 0.0;                 // max |d - product formula|
};
ProductCoordinates product_coordinates(const FiniteMMS& X, const PairCertificate& pair,
                                       int levels);

/// Connected components of the graph joining points at distance < eps.
/// Returns per-point component labels (0-based, in discovery order).
std::vector<int> epsilon_components(const FiniteMMS& X, double eps);
int component_count(const FiniteMMS& X, double eps);
bool is_connected_at(const FiniteMMS& X, double eps);

enum class UniformClass { RLike, TLike, SLike, Unknown };

struct ClassificationResult {
  UniformClass verdict = UniformClass::Unknown;
  double delta = 0.0;  // TLike scale
  struct Evidence {
    std::optional<double> delta_min;                 // min pair distance above floor
    std::vector<std::pair<double, int>> epsilon_connectivity;  // (eps, components)
    int pair_count = 0;
    double uniformity_defect = 0.0;
    std::string notes;
  } evidence;
};

/// Finite-scale trichotomy: connected with no pairs above the floor -> RLike;
/// positive minimal pair distance with connected sub-delta balls -> TLike;
/// pairs at >= 3 dyadic scales -> SLike; anything else Unknown. Spaces
/// failing the uniformity gate are Unknown immediately.
ClassificationResult classify_uniform(const FiniteMMS& X, double floor_scale, double tol);

/// floor_scale default: 4x the smallest positive distance.
double default_classification_floor(const FiniteMMS& X);

}  // namespace mmslab
