#include "mmslab/models.hpp"

#include <cmath>
#include <string>

namespace mmslab {

namespace {

double pow2(int e) { return std::ldexp(1.0, e); }

std::string bit_label(std::uint32_t mask, int bits) {
  std::string s(bits, '0');
  for (int b = 0; b < bits; ++b)
    if (mask & (1u << b)) s[b] = '1';  // position 0 = lowest index
  return s;
}

}  // namespace

PointedMMS make_S(const STruncationSpec& spec) {
  if (spec.m > spec.n) throw Error(ErrorKind::Schema, "make_S: m must not exceed n");
  const int bits = spec.n - spec.m + 1;
  if (bits > 21) throw Error(ErrorKind::SizeGuard, "make_S: n - m exceeds 20");
  const std::uint32_t count = 1u << bits;
  const double scale = pow2(spec.m);
  std::vector<std::uint32_t> masks(count);
  for (std::uint32_t i = 0; i < count; ++i) masks[i] = i;
  std::vector<double> weights(count, scale);
  FiniteMMS s = FiniteMMS::dyadic_cube(std::move(masks), scale, std::move(weights));
  if (count <= 4096) {
    std::vector<std::string> labels(count);
    for (std::uint32_t i = 0; i < count; ++i) labels[i] = bit_label(i, bits);
    s.set_labels(std::move(labels));
  }
  return PointedMMS{std::move(s), 0};
}

PointedMMS make_T(const TTruncationSpec& spec) {
  if (spec.circle_points <= 0 || spec.circle_points % 2 != 0)
    throw Error(ErrorKind::Schema, "make_T: circle_points must be even and positive");
  if (spec.m < 0 || spec.n_levels <= 0)
    throw Error(ErrorKind::Schema, "make_T: need m >= 0 and n_levels >= 1");
  if (spec.n_levels > 20 ||
      static_cast<long long>(spec.circle_points) * (1LL << spec.n_levels) > (1LL << 20))
    throw Error(ErrorKind::SizeGuard, "make_T: circle_points * 2^n_levels exceeds 2^20");
  const int C = spec.circle_points;
  const std::uint32_t strings = 1u << spec.n_levels;
  const int n = C * static_cast<int>(strings);
  std::vector<std::int32_t> nodes(n);
  std::vector<std::uint32_t> masks(n);
  for (std::uint32_t s = 0; s < strings; ++s)
    for (int c = 0; c < C; ++c) {
      nodes[s * C + c] = c;
      masks[s * C + c] = s;
    }
  const double arc_step = 2.0 / C;        // circle is R/2Z
  const double mask_scale = pow2(spec.m);  // flip at index m+k costs 2^{m+k}
  std::vector<double> weights(n, 1.0 / C);
  FiniteMMS t = FiniteMMS::circle_cube(std::move(nodes), C, arc_step, std::move(masks),
                                       mask_scale, std::move(weights));
  return PointedMMS{std::move(t), 0};
}

PointedMMS make_R_grid(double h, double extent) {
  if (!(h > 0.0) || !(extent > 0.0))
    throw Error(ErrorKind::Schema, "make_R_grid: h and extent must be positive");
  const long long half = static_cast<long long>(std::floor(extent / h + kTieTol));
  if (half > (1LL << 20)) throw Error(ErrorKind::SizeGuard, "make_R_grid: extent/h exceeds 2^20");
  const int n = static_cast<int>(2 * half + 1);
  std::vector<double> coords(n);
  for (int i = 0; i < n; ++i) coords[i] = (i - half) * h;
  std::vector<double> weights(n, h / 2.0);
  FiniteMMS g = FiniteMMS::line(std::move(coords), std::move(weights));
  return PointedMMS{std::move(g), static_cast<int>(half)};
}

PointedMMS make_circle(int circle_points, double circumference) {
  if (circle_points <= 0 || circle_points % 2 != 0)
    throw Error(ErrorKind::Schema, "make_circle: circle_points must be even and positive");
  if (!(circumference > 0.0)) throw Error(ErrorKind::Schema, "make_circle: bad circumference");
  if (circle_points > (1 << 20)) throw Error(ErrorKind::SizeGuard, "make_circle: too many points");
  std::vector<std::int32_t> nodes(circle_points);
  std::vector<std::uint32_t> masks(circle_points, 0);
  for (int i = 0; i < circle_points; ++i) nodes[i] = i;
  std::vector<double> weights(circle_points, circumference / (2.0 * circle_points));
  FiniteMMS c = FiniteMMS::circle_cube(std::move(nodes), circle_points,
                                       circumference / circle_points, std::move(masks), 0.0,
                                       std::move(weights));
  return PointedMMS{std::move(c), 0};
}

PointedMMS make_star_Sn(int n) {
  if (n <= 0 || n > 30) throw Error(ErrorKind::SizeGuard, "make_star_Sn: need 1 <= n <= 30");
  const int count = n + 1;
  std::vector<double> table(static_cast<std::size_t>(count) * count, 0.0);
  auto at = [&](int i, int j) -> double& { return table[static_cast<std::size_t>(i) * count + j]; };
  for (int i = 1; i <= n; ++i) {
    at(0, i) = at(i, 0) = pow2(i);
    for (int j = 1; j <= n; ++j)
      if (i != j) at(i, j) = pow2(i) + pow2(j);
  }
  std::vector<double> weights(count, 1.0);
  FiniteMMS s = FiniteMMS::dense(count, std::move(table), std::move(weights));
  std::vector<std::string> labels(count);
  for (int i = 0; i < count; ++i) labels[i] = "s" + std::to_string(i);
  s.set_labels(std::move(labels));
  return PointedMMS{std::move(s), 0};
}

FiniteMMS make_spider_midpoints(int n) {
  if (n <= 0 || n > 30) throw Error(ErrorKind::SizeGuard, "make_spider_midpoints: need 1 <= n <= 30");
  const int count = n + 1;
  std::vector<double> table(static_cast<std::size_t>(count) * count, 0.0);
  auto at = [&](int i, int j) -> double& { return table[static_cast<std::size_t>(i) * count + j]; };
  for (int i = 1; i <= n; ++i) {
    at(0, i) = at(i, 0) = 2.0;
    for (int j = 1; j <= n; ++j)
      if (i != j) at(i, j) = 4.0;
  }
  std::vector<double> weights(count, 1.0);
  FiniteMMS s = FiniteMMS::dense(count, std::move(table), std::move(weights));
  std::vector<std::string> labels(count);
  labels[0] = "s0";
  for (int i = 1; i <= n; ++i) labels[i] = "m" + std::to_string(i);
  s.set_labels(std::move(labels));
  return s;
}

HeisenbergPoint heisenberg_mul(const HeisenbergPoint& a, const HeisenbergPoint& b) {
  return {a.x + b.x, a.y + b.y, a.t + b.t + 2.0 * (a.x * b.y - b.x * a.y)};
}

HeisenbergPoint heisenberg_inv(const HeisenbergPoint& a) { return {-a.x, -a.y, -a.t}; }

HeisenbergPoint heisenberg_dilate(const HeisenbergPoint& a, double lambda) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Schema, "heisenberg_dilate: lambda must be positive");
  return {lambda * a.x, lambda * a.y, lambda * lambda * a.t};
}

double koranyi_norm(const HeisenbergPoint& a) {
  double q = a.x * a.x + a.y * a.y;
  return std::pow(q * q + a.t * a.t, 0.25);
}

PointedMMS make_heisenberg_sample(int k, double radius, std::uint64_t seed) {
  if (k <= 0 || k > 5000) throw Error(ErrorKind::SizeGuard, "make_heisenberg_sample: need 1 <= k <= 5000");
  if (!(radius > 0.0)) throw Error(ErrorKind::Schema, "make_heisenberg_sample: bad radius");
  std::vector<double> xs, ys, ts;
  xs.reserve(k);
  ys.reserve(k);
  ts.reserve(k);
  // base at the identity
  xs.push_back(0.0);
  ys.push_back(0.0);
  ts.push_back(0.0);
  Rng rng(seed);
  const double r2 = radius * radius;
  while (static_cast<int>(xs.size()) < k) {
    double x = rng.uniform(-radius, radius);
    double y = rng.uniform(-radius, radius);
    double t = rng.uniform(-r2, r2);
    if (koranyi_norm({x, y, t}) <= radius) {
      xs.push_back(x);
      ys.push_back(y);
      ts.push_back(t);
    }
  }
  std::vector<double> weights(k, 1.0);
  FiniteMMS h = FiniteMMS::heisenberg(std::move(xs), std::move(ys), std::move(ts),
                                      std::move(weights));
  return PointedMMS{std::move(h), 0};
}

FiniteMMS scale_space(const FiniteMMS& X, double lambda) { return X.scaled(lambda); }

}  // namespace mmslab
