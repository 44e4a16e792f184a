#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mmslab/mms.hpp"

namespace mmslab {

struct UniformityReport {
  double max_defect = 0.0;
  int worst_center = -1;
  double worst_radius = 0.0;
  int centers_checked = 0;
};

/// max over sampled centers x and r in radii of |mu(C(x,r)) - r|.
/// center_sample = 0 checks every point.
UniformityReport uniformity_defect(const FiniteMMS& X, std::span<const double> radii,
                                   int center_sample = 0, std::uint64_t seed = 0);
/// Same with an explicit center list (e.g. bulk centers of a truncation).
UniformityReport uniformity_defect(const FiniteMMS& X, std::span<const double> radii,
                                   std::span<const int> centers);

struct CoverResult {
  int count = 0;          // best known cover size
  bool exact = false;     // true when count is provably minimal
  int greedy_ub = 0;
  int separated_lb = 0;
  std::vector<int> centers;
};

/// Minimum number of closed r'-balls (centers among points of X) covering
/// the target point set. Exact via branch and bound with greedy/separated
/// bounds; falls back to the bounds when the node budget is exhausted.
CoverResult covering_number(const FiniteMMS& X, std::span<const int> target, double r_prime,
                            long node_budget = 200000);
CoverResult covering_number(const FiniteMMS& X, const Ball& b, double r_prime,
                            long node_budget = 200000);

struct DoublingReport {
  int constant = 0;
  Ball worst{};
  bool all_exact = true;
};

/// max covering number at half radius over the given sample balls.
DoublingReport doubling_constant(const FiniteMMS& X, std::span<const Ball> sample_balls);

/// Greedy cover by sets of diameter <= delta; returns the sum of realized
/// diameters, an upper estimate of H at that scale.
double hausdorff_upper(const FiniteMMS& X, double delta);

/// Lower estimate of H for dyadic-cube spaces via the 1-Lipschitz injective
/// coordinate-sum map. Throws WrongSpaceKind on other geometries.
double lip_projection_lower(const FiniteMMS& X);
double lip_projection_lower(const FiniteMMS& X, std::span<const int> subset);

struct SeparationEntry {
  double scale = 0.0;
  int cluster_count = 0;
  double max_cluster_diameter = 0.0;
  double min_cluster_separation = 0.0;
};

struct SeparationProfile {
  std::vector<SeparationEntry> entries;
  bool unrectifiable_evidence = false;  // sep/diam >= 1/4 at >= 4 consecutive scales
};

/// Single-linkage clustering at each scale (edges d < scale).
SeparationProfile separation_profile(const FiniteMMS& X, std::span<const double> scales);

struct StressResult {
  double p = 2.0;
  int dim = 2;
  double best_stress = 0.0;          // max relative distance error
  std::vector<double> config;        // best coords, point-major
  int restarts = 0;
};

/// Multistart coordinate-descent search for a low-distortion l_p embedding;
/// deterministic under the seed. p may be infinity.
StressResult lp_embed_stress(const FiniteMMS& X, double p, int dim, int restarts,
                             std::uint64_t seed);

struct HeisenbergIdentityReport {
  double max_rel_err = 0.0;
  int samples = 0;
};

/// Verifies the dilation difference identity on random points and dyadic
/// exponents: ||dl(a)^{-1} * dm(a)|| = |m - l| * ||(x, y, (m+l)/(m-l) t)||.
HeisenbergIdentityReport heisenberg_identity_check(int samples, std::uint64_t seed);

struct HeisenbergGrowthReport {
  double constant = 0.0;     // max ratio over the sample
  int samples = 0;
  int exp_lo = 1, exp_hi = 6;
};

/// C = max ||dl(a)^{-1} dm(a)|| / (|m - l| ||a||) over sampled a in the unit
/// Koranyi ball and distinct dyadic exponents in [exp_lo, exp_hi].
HeisenbergGrowthReport heisenberg_growth_constant(int samples, std::uint64_t seed,
                                                  int exp_lo = 1, int exp_hi = 6);

}  // namespace mmslab
