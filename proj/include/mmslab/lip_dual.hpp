#pragma once

#include <span>
#include <vector>

#include "mmslab/mms.hpp"

namespace mmslab {

/// Instance of the bounded-Lipschitz dual on a finite ambient space:
/// maximize sum_i g_i * signed_mass_i over functions g with
///   |g_i - g_j| <= L * d(i,j)            for all i < j
///   |g_i|       <= min(1, L*(r - d(base,i))+)   (support in B(base, r)
///                                          against a virtual exterior)
struct LipschitzDualProblem {
  const FiniteMMS* space = nullptr;  // ambient Z (not owned)
  int base = 0;                      // z
  double L = 1.0;
  double r = 1.0;
  std::vector<double> signed_mass;   // mu_i - nu_i
};

struct LPResult {
  enum class Status { Optimal, InfeasibleGuard };
  double value = 0.0;
  std::vector<double> witness;  // optimal g, full length n
  Status status = Status::Optimal;
};

/// Exact optimum via the min-cost transshipment dual, solved with
/// successive shortest paths; deterministic. The witness is recovered from
/// the final node potentials and re-verified against all constraints.
LPResult f_lr(const LipschitzDualProblem& problem);

/// Independent oracle for instances with at most 4 points: enumerates all
/// vertices of the constraint polytope. Throws SizeGuard beyond 4 points.
double f_lr_oracle(const LipschitzDualProblem& problem);

/// F_x threshold: bisection over eps in (0, 1/2) of the predicate
/// [ f_lr with L = r = 1/eps on mu - nu ] < eps, which is monotone.
/// Returns the threshold midpoint (abs. tolerance < 1e-6), or 1/2 when the
/// predicate fails throughout.
double f_x(const FiniteMMS& Z, int base, std::span<const double> mu,
           std::span<const double> nu);

/// Number of bisection steps used by f_x.
inline constexpr int kFxBisectionIters = 40;

}  // namespace mmslab
