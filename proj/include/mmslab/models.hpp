#pragma once

#include <cstdint>

#include "mmslab/mms.hpp"
#include "mmslab/rng.hpp"

namespace mmslab {

/// Dyadic binary-sequence space truncated to indices m..n.
struct STruncationSpec {
  int m = 0;  // lowest dyadic index, typically negative
  int n = 0;  // highest index
};

/// Circle-times-binary-levels space; circle is R/2Z discretized.
struct TTruncationSpec {
  int circle_points = 0;  // even, positive
  int m = 0;              // lowest binary index, >= 0
  int n_levels = 0;       // number of binary levels
};

struct HeisenbergPoint {
  double x = 0.0, y = 0.0, t = 0.0;
};

/// 2^{n-m+1} binary strings on indices m..n with d(s,t) = sum 2^i |s_i-t_i|,
/// weight 2^m each, base at the all-zeros string.
PointedMMS make_S(const STruncationSpec& spec);

/// Points (circle node, binary string), circle metric = arc distance on
/// R/2Z, flips at index i cost 2^i, weight (2/circle_points)*(1/2) each.
PointedMMS make_T(const TTruncationSpec& spec);

/// Grid -extent..extent with step h, weight h/2 each, base at 0.
PointedMMS make_R_grid(double h, double extent);

/// Circle of given circumference, arc metric, total mass circumference/2.
PointedMMS make_circle(int circle_points, double circumference);

/// n+1 points with d(s0,si) = 2^i and d(si,sj) = d(si,s0) + d(s0,sj).
PointedMMS make_star_Sn(int n);

/// {s0} plus n midpoints: d(s0,mi) = 2, d(mi,mj) = 4, unit weights.
FiniteMMS make_spider_midpoints(int n);

HeisenbergPoint heisenberg_mul(const HeisenbergPoint& a, const HeisenbergPoint& b);
HeisenbergPoint heisenberg_inv(const HeisenbergPoint& a);
HeisenbergPoint heisenberg_dilate(const HeisenbergPoint& a, double lambda);
double koranyi_norm(const HeisenbergPoint& a);

/// k points rejection-sampled in the Koranyi ball of the given radius,
/// distance d(a,b) = ||a^{-1} * b||, unit weights, base at the identity.
PointedMMS make_heisenberg_sample(int k, double radius, std::uint64_t seed);

/// (X, lambda d): distances multiplied, weights unchanged.
FiniteMMS scale_space(const FiniteMMS& X, double lambda);

}  // namespace mmslab
