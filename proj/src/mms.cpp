#include "mmslab/mms.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "mmslab/kernels.hpp"
#include "mmslab/rng.hpp"

namespace mmslab {

namespace {

double koranyi_gauge(double x, double y, double t) {
  double q = x * x + y * y;
  return std::pow(q * q + t * t, 0.25);
}

}  // namespace

void FiniteMMS::init_common(std::vector<double>&& weight) {
  weight_ = std::move(weight);
  n_ = static_cast<int>(weight_.size());
  if (n_ <= 0) throw Error(ErrorKind::EmptySubset, "space must have at least one point");
  double total = 0.0;
  for (double w : weight_) {
    if (!(w >= 0.0)) throw Error(ErrorKind::Schema, "weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorKind::Schema, "total mass must be positive");
}

FiniteMMS FiniteMMS::dense(int n, std::vector<double> dist, std::vector<double> weight) {
  FiniteMMS s;
  s.geom_ = Geometry::Dense;
  if (static_cast<int>(weight.size()) != n || static_cast<int>(dist.size()) != n * n)
    throw Error(ErrorKind::Schema, "dense space: dimension mismatch");
  s.init_common(std::move(weight));
  s.dist_ = std::move(dist);
  return s;
}

FiniteMMS FiniteMMS::dyadic_cube(std::vector<std::uint32_t> masks, double scale,
                                 std::vector<double> weight) {
  FiniteMMS s;
  s.geom_ = Geometry::DyadicCube;
  if (masks.size() != weight.size()) throw Error(ErrorKind::Schema, "dyadic cube: size mismatch");
  s.init_common(std::move(weight));
  s.mask_ = std::move(masks);
  s.scale_ = scale;
  return s;
}

FiniteMMS FiniteMMS::circle_cube(std::vector<std::int32_t> nodes, int circle_n, double arc_step,
                                 std::vector<std::uint32_t> masks, double mask_scale,
                                 std::vector<double> weight) {
  FiniteMMS s;
  s.geom_ = Geometry::CircleCube;
  if (nodes.size() != weight.size() || masks.size() != weight.size())
    throw Error(ErrorKind::Schema, "circle cube: size mismatch");
  s.init_common(std::move(weight));
  s.node_ = std::move(nodes);
  s.mask_ = std::move(masks);
  s.circle_n_ = circle_n;
  s.arc_step_ = arc_step;
  s.scale_ = mask_scale;
  return s;
}

FiniteMMS FiniteMMS::line(std::vector<double> coords, std::vector<double> weight) {
  FiniteMMS s;
  s.geom_ = Geometry::Line;
  if (coords.size() != weight.size()) throw Error(ErrorKind::Schema, "line: size mismatch");
  s.init_common(std::move(weight));
  s.coord_ = std::move(coords);
  return s;
}

FiniteMMS FiniteMMS::heisenberg(std::vector<double> x, std::vector<double> y,
                                std::vector<double> t, std::vector<double> weight) {
  FiniteMMS s;
  s.geom_ = Geometry::Heisenberg;
  if (x.size() != weight.size() || y.size() != weight.size() || t.size() != weight.size())
    throw Error(ErrorKind::Schema, "heisenberg: size mismatch");
  s.init_common(std::move(weight));
  s.hx_ = std::move(x);
  s.hy_ = std::move(y);
  s.ht_ = std::move(t);
  return s;
}

double FiniteMMS::d(int i, int j) const {
  switch (geom_) {
    case Geometry::Dense:
      return dist_[static_cast<std::size_t>(i) * n_ + j];
    case Geometry::DyadicCube:
      return scale_ * static_cast<double>(mask_[i] ^ mask_[j]);
    case Geometry::CircleCube: {
      int delta = std::abs(node_[i] - node_[j]);
      delta = std::min(delta, circle_n_ - delta);
      return arc_step_ * delta + scale_ * static_cast<double>(mask_[i] ^ mask_[j]);
    }
    case Geometry::Line:
      return std::fabs(coord_[i] - coord_[j]);
    case Geometry::Heisenberg: {
      // left-invariant: d(a,b) = ||a^{-1} * b||
      double dx = hx_[j] - hx_[i];
      double dy = hy_[j] - hy_[i];
      double dt = ht_[j] - ht_[i] + 2.0 * (hx_[j] * hy_[i] - hx_[i] * hy_[j]);
      return scale_ * koranyi_gauge(dx, dy, dt);
    }
  }
  return 0.0;
}

void FiniteMMS::fill_row(int i, double* out) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  switch (geom_) {
    case Geometry::Dense:
      std::memcpy(out, dist_.data() + n * static_cast<std::size_t>(i), n * sizeof(double));
      return;
    case Geometry::DyadicCube:
      kernels::fill_xor_scaled(out, mask_.data(), n, mask_[i], scale_);
      return;
    case Geometry::CircleCube: {
      const int ci = node_[i];
      const std::uint32_t mi = mask_[i];
      for (std::size_t j = 0; j < n; ++j) {
        int delta = std::abs(ci - node_[j]);
        delta = std::min(delta, circle_n_ - delta);
        out[j] = arc_step_ * delta + scale_ * static_cast<double>(mi ^ mask_[j]);
      }
      return;
    }
    case Geometry::Line:
      kernels::fill_absdiff(out, coord_.data(), n, coord_[i]);
      return;
    case Geometry::Heisenberg: {
      for (std::size_t j = 0; j < n; ++j) out[j] = d(i, static_cast<int>(j));
      return;
    }
  }
}

double FiniteMMS::total_mass() const {
  double t = 0.0;
  for (double w : weight_) t += w;
  return t;
}

void FiniteMMS::set_labels(std::vector<std::string> l) {
  if (static_cast<int>(l.size()) != n_) throw Error(ErrorKind::Schema, "labels: size mismatch");
  labels_ = std::move(l);
}

FiniteMMS FiniteMMS::scaled(double lambda) const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Schema, "scale factor must be positive");
  FiniteMMS s = *this;
  switch (geom_) {
    case Geometry::Dense:
      for (double& v : s.dist_) v *= lambda;
      break;
    case Geometry::DyadicCube:
      s.scale_ *= lambda;
      break;
    case Geometry::CircleCube:
      s.scale_ *= lambda;
      s.arc_step_ *= lambda;
      break;
    case Geometry::Line:
      for (double& v : s.coord_) v *= lambda;
      break;
    case Geometry::Heisenberg:
      s.scale_ *= lambda;
      break;
  }
  return s;
}

FiniteMMS FiniteMMS::reweighted(double c) const {
  if (!(c >= 0.0)) throw Error(ErrorKind::Schema, "weight factor must be nonnegative");
  FiniteMMS s = *this;
  for (double& w : s.weight_) w *= c;
  return s;
}

FiniteMMS FiniteMMS::with_weights(std::vector<double> weight) const {
  if (static_cast<int>(weight.size()) != n_)
    throw Error(ErrorKind::Schema, "with_weights: size mismatch");
  FiniteMMS s = *this;
  s.weight_.clear();
  s.init_common(std::move(weight));
  return s;
}

FiniteMMS FiniteMMS::restricted(std::span<const int> subset) const {
  if (subset.empty()) throw Error(ErrorKind::EmptySubset, "restrict: empty subset");
  for (int i : subset)
    if (i < 0 || i >= n_) throw Error(ErrorKind::Schema, "restrict: index out of range");
  FiniteMMS s;
  s.geom_ = geom_;
  s.scale_ = scale_;
  s.circle_n_ = circle_n_;
  s.arc_step_ = arc_step_;
  std::vector<double> w;
  w.reserve(subset.size());
  for (int i : subset) w.push_back(weight_[i]);
  auto pick = [&subset](const auto& src, auto& dst) {
    if (src.empty()) return;
    dst.reserve(subset.size());
    for (int i : subset) dst.push_back(src[i]);
  };
  switch (geom_) {
    case Geometry::Dense: {
      const std::size_t m = subset.size();
      s.dist_.resize(m * m);
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
          s.dist_[a * m + b] = dist_[static_cast<std::size_t>(subset[a]) * n_ + subset[b]];
      break;
    }
    case Geometry::DyadicCube:
      pick(mask_, s.mask_);
      break;
    case Geometry::CircleCube:
      pick(mask_, s.mask_);
      pick(node_, s.node_);
      break;
    case Geometry::Line:
      pick(coord_, s.coord_);
      break;
    case Geometry::Heisenberg:
      pick(hx_, s.hx_);
      pick(hy_, s.hy_);
      pick(ht_, s.ht_);
      break;
  }
  if (labels_) {
    std::vector<std::string> l;
    l.reserve(subset.size());
    for (int i : subset) l.push_back((*labels_)[i]);
    s.labels_ = std::move(l);
  }
  s.init_common(std::move(w));
  return s;
}

FiniteMMS FiniteMMS::densified(int max_n) const {
  if (geom_ == Geometry::Dense) return *this;
  if (n_ > max_n)
    throw Error(ErrorKind::SizeGuard,
                "densify: " + std::to_string(n_) + " points exceeds guard " + std::to_string(max_n));
  std::vector<double> table(static_cast<std::size_t>(n_) * n_);
  for (int i = 0; i < n_; ++i) fill_row(i, table.data() + static_cast<std::size_t>(i) * n_);
  FiniteMMS s = dense(n_, std::move(table), weight_);
  if (labels_) s.labels_ = labels_;
  return s;
}

std::optional<std::string> FiniteMMS::check_metric(double tol, std::uint64_t seed) const {
  // Symmetry and zero diagonal are structural for the implicit variants;
  // verify them on the dense table only.
  if (geom_ == Geometry::Dense) {
    for (int i = 0; i < n_; ++i) {
      if (std::fabs(d(i, i)) > tol) return "nonzero diagonal at " + std::to_string(i);
      for (int j = i + 1; j < n_; ++j)
        if (std::fabs(d(i, j) - d(j, i)) > tol)
          return "asymmetry at (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
    for (std::size_t k = 0; k < dist_.size(); ++k)
      if (!(dist_[k] >= 0.0)) return "negative distance";
  }
  std::vector<double> row_i(n_), row_j(n_);
  auto violates = [&](int i, int j) -> bool {
    // d(i,k) <= d(i,j) + d(j,k) for all k, via two row scans
    fill_row(i, row_i.data());
    fill_row(j, row_j.data());
    double dij = row_i[j];
    for (int k = 0; k < n_; ++k)
      if (row_i[k] > dij + row_j[k] + tol) return true;
    return false;
  };
  if (n_ <= 256) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j)
        if (i != j && violates(i, j))
          return "triangle violation via (" + std::to_string(i) + "," + std::to_string(j) + ")";
  } else {
    Rng rng(seed ^ 0x5eedULL);
    for (int it = 0; it < 512; ++it) {
      int i = static_cast<int>(rng.below(n_));
      int j = static_cast<int>(rng.below(n_));
      if (i != j && violates(i, j))
        return "triangle violation via (" + std::to_string(i) + "," + std::to_string(j) + ")";
    }
  }
  return std::nullopt;
}

// ---- operations -----------------------------------------------------------

std::vector<int> ball_points(const FiniteMMS& space, const Ball& b) {
  if (b.center < 0 || b.center >= space.n())
    throw Error(ErrorKind::Schema, "ball: invalid center");
  if (!(b.radius >= 0.0)) throw Error(ErrorKind::Schema, "ball: negative radius");
  std::vector<double> row(space.n());
  space.fill_row(b.center, row.data());
  std::vector<int> pts;
  if (b.kind == Ball::Kind::Open) {
    const double thr = b.radius - kTieTol;
    for (int i = 0; i < space.n(); ++i)
      if (row[i] < thr) pts.push_back(i);
  } else {
    const double thr = b.radius + kTieTol;
    for (int i = 0; i < space.n(); ++i)
      if (row[i] <= thr) pts.push_back(i);
  }
  return pts;
}

double ball_measure(const FiniteMMS& space, const Ball& b) {
  if (b.center < 0 || b.center >= space.n())
    throw Error(ErrorKind::Schema, "ball: invalid center");
  std::vector<double> row(space.n());
  space.fill_row(b.center, row.data());
  if (b.kind == Ball::Kind::Open)
    return kernels::sum_where_lt(row.data(), space.weights().data(), row.size(),
                                 b.radius - kTieTol);
  return kernels::sum_where_le(row.data(), space.weights().data(), row.size(),
                               b.radius + kTieTol);
}

PointedMMS rescale(const PointedMMS& p, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::Schema, "rescale: r must be positive");
  double mass = ball_measure(p.space, Ball{p.base, r, Ball::Kind::Open});
  if (!(mass > 0.0)) throw Error(ErrorKind::ZeroMass, "rescale: open ball at base has zero mass");
  FiniteMMS s = p.space.scaled(1.0 / r).reweighted(1.0 / mass);
  return PointedMMS{std::move(s), p.base};
}

GlueResult glue(const PointedMMS& X, const PointedMMS& Y, const Correspondence& corr) {
  const int nx = X.space.n(), ny = Y.space.n();
  if (corr.pairs.empty()) throw Error(ErrorKind::InvalidCorrespondence, "empty correspondence");
  if (!(corr.slack >= 0.0)) throw Error(ErrorKind::InvalidCorrespondence, "negative slack");
  bool has_base = false;
  for (auto [p, q] : corr.pairs) {
    if (p < 0 || p >= nx || q < 0 || q >= ny)
      throw Error(ErrorKind::InvalidCorrespondence, "correspondence index out of range");
    if (p == X.base && q == Y.base) has_base = true;
  }
  if (!has_base)
    throw Error(ErrorKind::InvalidCorrespondence, "correspondence must relate base to base");

  const std::size_t snx = static_cast<std::size_t>(nx), sny = static_cast<std::size_t>(ny);
  std::vector<double> cross(snx * sny, std::numeric_limits<double>::infinity());
  std::vector<double> colx(snx), rowy(sny);
  for (auto [p, q] : corr.pairs) {
    X.space.fill_row(p, colx.data());
    Y.space.fill_row(q, rowy.data());
    for (std::size_t u = 0; u < snx; ++u)
      kernels::axpy_min(cross.data() + u * sny, rowy.data(), sny, colx[u] + corr.slack);
  }

  // A cross table of this form fails to extend to a metric exactly when two
  // same-side points get collapsed below their original distance; check both
  // sides and reject, otherwise the assembled table is a metric.
  std::vector<double> crossT(sny * snx);
  for (std::size_t u = 0; u < snx; ++u)
    for (std::size_t v = 0; v < sny; ++v) crossT[v * snx + u] = cross[u * sny + v];
  std::vector<double> rowx(snx);
  for (int u = 0; u < nx; ++u) {
    X.space.fill_row(u, rowx.data());
    for (int u2 = u + 1; u2 < nx; ++u2) {
      double through = kernels::min_plus(cross.data() + static_cast<std::size_t>(u) * sny,
                                         cross.data() + static_cast<std::size_t>(u2) * sny, sny);
      if (through < rowx[u2] - kMetricTol)
        throw Error(ErrorKind::InvalidCorrespondence,
                    "metric closure collapses X side at (" + std::to_string(u) + "," +
                        std::to_string(u2) + ")");
    }
  }
  std::vector<double> rowyv(sny);
  for (int v = 0; v < ny; ++v) {
    Y.space.fill_row(v, rowyv.data());
    for (int v2 = v + 1; v2 < ny; ++v2) {
      double through = kernels::min_plus(crossT.data() + static_cast<std::size_t>(v) * snx,
                                         crossT.data() + static_cast<std::size_t>(v2) * snx, snx);
      if (through < rowyv[v2] - kMetricTol)
        throw Error(ErrorKind::InvalidCorrespondence,
                    "metric closure collapses Y side at (" + std::to_string(v) + "," +
                        std::to_string(v2) + ")");
    }
  }

  const int n = nx + ny;
  std::vector<double> table(static_cast<std::size_t>(n) * n);
  for (int u = 0; u < nx; ++u) {
    X.space.fill_row(u, rowx.data());
    double* out = table.data() + static_cast<std::size_t>(u) * n;
    std::memcpy(out, rowx.data(), snx * sizeof(double));
    std::memcpy(out + nx, cross.data() + static_cast<std::size_t>(u) * sny,
                sny * sizeof(double));
  }
  for (int v = 0; v < ny; ++v) {
    Y.space.fill_row(v, rowyv.data());
    double* out = table.data() + static_cast<std::size_t>(nx + v) * n;
    std::memcpy(out, crossT.data() + static_cast<std::size_t>(v) * snx, snx * sizeof(double));
    std::memcpy(out + nx, rowyv.data(), sny * sizeof(double));
  }

  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  for (int u = 0; u < nx; ++u) w[u] = X.space.weight(u);
  for (int v = 0; v < ny; ++v) w[nx + v] = Y.space.weight(v);

  GlueResult g;
  g.space = FiniteMMS::dense(n, std::move(table), std::move(w));
  g.map_x.resize(nx);
  g.map_y.resize(ny);
  for (int u = 0; u < nx; ++u) g.map_x[u] = u;
  for (int v = 0; v < ny; ++v) g.map_y[v] = nx + v;
  return g;
}

FiniteMMS restrict_space(const FiniteMMS& space, std::span<const int> subset) {
  return space.restricted(subset);
}

std::vector<std::pair<double, double>> density_profile(const PointedMMS& p,
                                                       std::span<const double> radii) {
  std::vector<std::pair<double, double>> out;
  out.reserve(radii.size());
  std::vector<double> row(p.space.n());
  p.space.fill_row(p.base, row.data());
  for (double r : radii) {
    if (!(r > 0.0)) throw Error(ErrorKind::Schema, "density_profile: radii must be positive");
    double mass = kernels::sum_where_le(row.data(), p.space.weights().data(), row.size(),
                                        r + kTieTol);
    out.emplace_back(r, mass / (2.0 * r));
  }
  return out;
}

CoarsenResult coarsen(const PointedMMS& p, double eta) {
  if (!(eta >= 0.0)) throw Error(ErrorKind::Schema, "coarsen: eta must be nonnegative");
  const int n = p.space.n();
  std::vector<int> reps;
  std::vector<int> owner(n, -1);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  std::vector<double> row(n);
  // Greedy net: base first, then repeatedly the farthest uncovered point.
  int next = p.base;
  while (next >= 0) {
    int rep_idx = static_cast<int>(reps.size());
    reps.push_back(next);
    p.space.fill_row(next, row.data());
    for (int i = 0; i < n; ++i) {
      if (row[i] < best[i]) {
        best[i] = row[i];
        owner[i] = rep_idx;
      }
    }
    next = -1;
    double far = eta;
    for (int i = 0; i < n; ++i) {
      if (best[i] > far) {
        far = best[i];
        next = i;
      }
    }
  }
  std::vector<double> w(reps.size(), 0.0);
  for (int i = 0; i < n; ++i) w[owner[i]] += p.space.weight(i);
  CoarsenResult res;
  res.representative = reps;
  res.space.space = p.space.restricted(reps).with_weights(std::move(w));
  res.space.base = 0;  // base was inserted first
  return res;
}

double max_dist_from(const FiniteMMS& space, int i) {
  std::vector<double> row(space.n());
  space.fill_row(i, row.data());
  double m = 0.0;
  for (double v : row) m = std::max(m, v);
  return m;
}

}  // namespace mmslab
