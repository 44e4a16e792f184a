#include "mmslab/besicovitch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "mmslab/geoprobe.hpp"
#include "mmslab/kernels.hpp"
#include "mmslab/rng.hpp"

namespace mmslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPairTol = 1e-9;

// min cross distance between two point sets; kernel path for dyadic cubes
double min_cross_distance(const FiniteMMS& X, const std::vector<int>& A,
                          const std::vector<int>& B) {
  if (A.empty() || B.empty()) return kInf;
  if (X.geometry() == Geometry::DyadicCube) {
    const auto& masks = X.masks();
    std::vector<std::uint32_t> packed(B.size());
    for (std::size_t k = 0; k < B.size(); ++k) packed[k] = masks[B[k]];
    std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
    for (int x : A) best = std::min(best, kernels::min_xor(packed.data(), packed.size(), masks[x]));
    return X.dyadic_scale() * static_cast<double>(best);
  }
  double best = kInf;
  for (int x : A)
    for (int y : B) best = std::min(best, X.d(x, y));
  return best;
}

double min_positive_distance(const FiniteMMS& X) {
  const int n = X.n();
  std::vector<int> rows;
  if (n <= 8192) {
    rows.resize(n);
    std::iota(rows.begin(), rows.end(), 0);
  } else {
    Rng rng(0xf100f);
    for (int k = 0; k < 1024; ++k) rows.push_back(static_cast<int>(rng.below(n)));
  }
  std::vector<double> row(n);
  double best = kInf;
  for (int i : rows) {
    X.fill_row(i, row.data());
    for (int j = 0; j < n; ++j)
      if (row[j] > kTieTol && row[j] < best) best = row[j];
  }
  return best;
}

}  // namespace

double is_besicovitch_pair(const FiniteMMS& X, int a, int b) {
  if (a == b) throw Error(ErrorKind::Schema, "is_besicovitch_pair: a and b must differ");
  double d = X.d(a, b);
  if (!(d > 0.0)) throw Error(ErrorKind::Schema, "is_besicovitch_pair: coincident points");
  auto A = ball_points(X, Ball{a, d, Ball::Kind::Open});
  auto B = ball_points(X, Ball{b, d, Ball::Kind::Open});
  return min_cross_distance(X, A, B) - d;
}

std::vector<PairCertificate> find_pairs(const FiniteMMS& X, double max_d, double min_d) {
  const int n = X.n();
  std::vector<PairCertificate> out;
  std::vector<double> row(n);
  std::vector<int> pool;          // indices within max_d of a, sorted by distance
  std::vector<int> candidates;    // pair partners in (min_d, max_d]
  for (int a = 0; a < n; ++a) {
    X.fill_row(a, row.data());
    pool.clear();
    candidates.clear();
    for (int j = 0; j < n; ++j) {
      if (j != a && row[j] < max_d + kTieTol) pool.push_back(j);
      if (j > a && row[j] > min_d + kTieTol && row[j] <= max_d + kTieTol) candidates.push_back(j);
    }
    if (candidates.empty()) continue;
    std::sort(pool.begin(), pool.end(),
              [&](int u, int v) { return row[u] != row[v] ? row[u] < row[v] : u < v; });
    for (int b : candidates) {
      const double d = row[b];
      // witness prune: any z strictly inside both balls kills the pair
      bool pruned = false;
      std::vector<int> ball_a;
      ball_a.push_back(a);
      for (int z : pool) {
        if (row[z] >= d - kTieTol) break;
        if (X.d(b, z) < d - kTieTol) {
          pruned = true;
          break;
        }
        ball_a.push_back(z);
      }
      if (pruned) continue;
      auto ball_b = ball_points(X, Ball{b, d, Ball::Kind::Open});
      double margin = min_cross_distance(X, ball_a, ball_b) - d;
      if (margin >= -kPairTol) out.push_back(PairCertificate{a, b, d, margin});
    }
  }
  std::sort(out.begin(), out.end(), [](const PairCertificate& x, const PairCertificate& y) {
    if (x.d != y.d) return x.d < y.d;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  return out;
}

std::optional<PairCertificate> min_pair_distance(const FiniteMMS& X, double min_d) {
  double dmin = min_positive_distance(X);
  if (!std::isfinite(dmin)) return std::nullopt;
  double diam_ub = 2.0 * max_dist_from(X, 0) + kTieTol;
  double lo = std::max(min_d, 0.0);
  double hi = std::max(2.0 * dmin, 2.0 * lo);
  while (lo < diam_ub) {
    auto batch = find_pairs(X, hi, lo);
    if (!batch.empty()) return batch.front();
    lo = hi;
    hi *= 2.0;
  }
  return std::nullopt;
}

NeighborMap neighbor_map(const FiniteMMS& X, const PairCertificate& pair) {
  auto A = ball_points(X, Ball{pair.a, pair.d, Ball::Kind::Open});
  auto B = ball_points(X, Ball{pair.b, pair.d, Ball::Kind::Open});
  if (A.empty() || B.empty())
    throw Error(ErrorKind::EmptySide, "neighbor_map: a side of the pair is empty");
  NeighborMap nm;
  auto map_side = [&](const std::vector<int>& from, const std::vector<int>& to) {
    std::vector<double> row(X.n());
    for (int x : from) {
      X.fill_row(x, row.data());
      int best = to.front();
      for (int y : to) {
        if (row[y] < row[best] - kTieTol)
          best = y;
        else if (std::fabs(row[y] - row[best]) <= kTieTol && y < best) {
          if (y != best) nm.had_ties = true;
          best = y;
        }
      }
      nm.domain.push_back(x);
      nm.image.push_back(best);
    }
  };
  map_side(A, B);
  map_side(B, A);
  return nm;
}

PairPropertyReport verify_pair_properties(const FiniteMMS& X, const PairCertificate& pair,
                                          double set_mass_tol) {
  PairPropertyReport rep;
  const double d = pair.d;
  auto A = ball_points(X, Ball{pair.a, d, Ball::Kind::Open});
  auto B = ball_points(X, Ball{pair.b, d, Ball::Kind::Open});
  auto AB2 = ball_points(X, Ball{pair.a, 2.0 * d, Ball::Kind::Open});

  auto set_mass_diff = [&](const std::vector<int>& lhs, const std::vector<int>& rhs,
                           std::string* witness) {
    std::vector<char> in_rhs(X.n(), 0), in_lhs(X.n(), 0);
    for (int i : rhs) in_rhs[i] = 1;
    for (int i : lhs) in_lhs[i] = 1;
    double mass = 0.0;
    for (int i : lhs)
      if (!in_rhs[i]) {
        mass += X.weight(i);
        if (witness && witness->empty()) *witness = "extra point " + std::to_string(i);
      }
    for (int i : rhs)
      if (!in_lhs[i]) {
        mass += X.weight(i);
        if (witness && witness->empty()) *witness = "missing point " + std::to_string(i);
      }
    return mass;
  };

  // (0) B(a,2d) = B(a,d) u B(b,d)
  {
    std::vector<int> uni = A;
    uni.insert(uni.end(), B.begin(), B.end());
    std::sort(uni.begin(), uni.end());
    uni.erase(std::unique(uni.begin(), uni.end()), uni.end());
    auto& it = rep.items[0];
    it.discrepancy = set_mass_diff(AB2, uni, &it.witness);
    it.pass = it.discrepancy <= set_mass_tol + kPairTol;
  }

  // (1) B(x,d) = B(a,d) for x in B(a,d); both sides checked
  {
    auto& it = rep.items[1];
    it.discrepancy = 0.0;
    auto check_side = [&](const std::vector<int>& side, int /*anchor*/) {
      std::vector<int> sample = side;
      if (sample.size() > 256) {
        Rng rng(17);
        std::vector<int> sub;
        for (int k = 0; k < 256; ++k) sub.push_back(sample[rng.below(sample.size())]);
        sample = std::move(sub);
      }
      for (int x : sample) {
        auto Bx = ball_points(X, Ball{x, d, Ball::Kind::Open});
        std::string w;
        double m = set_mass_diff(Bx, side, &w);
        if (m > it.discrepancy) {
          it.discrepancy = m;
          it.witness = "x=" + std::to_string(x) + ": " + w;
        }
      }
    };
    check_side(A, pair.a);
    check_side(B, pair.b);
    it.pass = it.discrepancy <= set_mass_tol + kPairTol;
  }

  NeighborMap nm = neighbor_map(X, pair);
  std::vector<int> iota(X.n(), -1);
  for (std::size_t k = 0; k < nm.domain.size(); ++k) iota[nm.domain[k]] = nm.image[k];

  // (2) d(x, iota(x)) = d
  {
    auto& it = rep.items[2];
    for (std::size_t k = 0; k < nm.domain.size(); ++k) {
      double dev = std::fabs(X.d(nm.domain[k], nm.image[k]) - d);
      if (dev > it.discrepancy) {
        it.discrepancy = dev;
        it.witness = "x=" + std::to_string(nm.domain[k]);
      }
    }
    it.pass = it.discrepancy <= kPairTol;
  }

  // (3) d(x,z) = d + d(iota(x), z) for x in A, z in B
  {
    auto& it = rep.items[3];
    std::vector<double> row(X.n()), row2(X.n());
    for (int x : A) {
      X.fill_row(x, row.data());
      X.fill_row(iota[x], row2.data());
      for (int z : B) {
        double dev = std::fabs(row[z] - (d + row2[z]));
        if (dev > it.discrepancy) {
          it.discrepancy = dev;
          it.witness = "x=" + std::to_string(x) + " z=" + std::to_string(z);
        }
      }
    }
    it.pass = it.discrepancy <= kPairTol;
  }

  // (4) involution
  {
    auto& it = rep.items[4];
    int bad = 0;
    for (std::size_t k = 0; k < nm.domain.size(); ++k) {
      int x = nm.domain[k];
      if (iota[iota[x]] != x) {
        ++bad;
        if (it.witness.empty()) it.witness = "x=" + std::to_string(x);
      }
    }
    it.discrepancy = bad;
    it.pass = bad == 0;
  }

  // (5) iota is an isometry on the whole domain
  {
    auto& it = rep.items[5];
    std::vector<double> row(X.n()), rowi(X.n());
    for (std::size_t k = 0; k < nm.domain.size(); ++k) {
      int u = nm.domain[k];
      X.fill_row(u, row.data());
      X.fill_row(iota[u], rowi.data());
      for (std::size_t l = k + 1; l < nm.domain.size(); ++l) {
        int v = nm.domain[l];
        double dev = std::fabs(rowi[iota[v]] - row[v]);
        if (dev > it.discrepancy) {
          it.discrepancy = dev;
          it.witness = "(" + std::to_string(u) + "," + std::to_string(v) + ")";
        }
      }
    }
    it.pass = it.discrepancy <= kPairTol;
  }

  return rep;
}

std::optional<PairCertificate> double_pair(const FiniteMMS& X, const PairCertificate& pair) {
  const double target = 2.0 * pair.d;
  std::vector<double> row(X.n());
  X.fill_row(pair.a, row.data());
  for (int z = 0; z < X.n(); ++z) {
    if (z == pair.a || std::fabs(row[z] - target) > kPairTol) continue;
    double margin = is_besicovitch_pair(X, pair.a, z);
    if (margin >= -kPairTol) return PairCertificate{pair.a, z, row[z], margin};
  }
  return std::nullopt;
}

ProductCoordinates product_coordinates(const FiniteMMS& X, const PairCertificate& pair,
                                       int levels) {
  if (levels < 1 || levels > 20)
    throw Error(ErrorKind::Schema, "product_coordinates: levels out of range");
  ProductCoordinates pc;
  // chain of doubled pairs: b_j at distance 2^j d
  std::vector<PairCertificate> chain{pair};
  for (int j = 1; j < levels; ++j) {
    auto next = double_pair(X, chain.back());
    if (!next)
      throw Error(ErrorKind::DoublingExhausted,
                  "product_coordinates: no pair at distance " +
                      std::to_string(std::ldexp(pair.d, j)));
    chain.push_back(*next);
  }
  for (auto& c : chain) pc.chain.push_back(c.b);

  const double d = pair.d;
  const double top = std::ldexp(d, levels);
  pc.domain = ball_points(X, Ball{pair.a, top, Ball::Kind::Open});

  // per-level side balls
  std::vector<std::vector<int>> side_a(levels), side_b(levels);
  for (int j = 0; j < levels; ++j) {
    double dj = std::ldexp(d, j);
    side_a[j] = ball_points(X, Ball{pair.a, dj, Ball::Kind::Open});
    side_b[j] = ball_points(X, Ball{chain[j].b, dj, Ball::Kind::Open});
  }

  std::vector<double> row(X.n());
  pc.base_coord.resize(pc.domain.size());
  pc.bits.assign(pc.domain.size(), 0);
  for (std::size_t k = 0; k < pc.domain.size(); ++k) {
    int cur = pc.domain[k];
    std::uint32_t bits = 0;
    for (int j = levels - 1; j >= 0; --j) {
      double dj = std::ldexp(d, j);
      if (X.d(cur, chain[j].b) < dj - kTieTol) {
        bits |= 1u << j;
        // fold through the neighbor map: nearest point on the a-side
        X.fill_row(cur, row.data());
        int best = side_a[j].front();
        for (int q : side_a[j])
          if (row[q] < row[best] - kTieTol || (std::fabs(row[q] - row[best]) <= kTieTol && q < best))
            best = q;
        cur = best;
      }
    }
    pc.base_coord[k] = cur;
    pc.bits[k] = bits;
  }

  // defect of the product metric formula
  const std::size_t m = pc.domain.size();
  std::vector<std::size_t> sample_idx(m);
  std::iota(sample_idx.begin(), sample_idx.end(), 0);
  if (m > 2048) {
    Rng rng(23);
    sample_idx.resize(2048);
    for (auto& s : sample_idx) s = rng.below(m);
  }
  for (std::size_t ii : sample_idx) {
    X.fill_row(pc.domain[ii], row.data());
    for (std::size_t jj = 0; jj < m; ++jj) {
      double formula = X.d(pc.base_coord[ii], pc.base_coord[jj]) +
                       d * static_cast<double>(pc.bits[ii] ^ pc.bits[jj]);
      pc.defect = std::max(pc.defect, std::fabs(row[pc.domain[jj]] - formula));
    }
  }
  return pc;
}

std::vector<int> epsilon_components(const FiniteMMS& X, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::Schema, "epsilon_components: eps must be positive");
  const int n = X.n();
  std::vector<int> label(n, -1);
  std::vector<double> row(n);
  std::vector<int> stack;
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      X.fill_row(u, row.data());
      for (int v = 0; v < n; ++v)
        if (label[v] < 0 && row[v] < eps - kTieTol) {
          label[v] = next;
          stack.push_back(v);
        }
    }
    ++next;
  }
  return label;
}

int component_count(const FiniteMMS& X, double eps) {
  auto label = epsilon_components(X, eps);
  return 1 + *std::max_element(label.begin(), label.end());
}

bool is_connected_at(const FiniteMMS& X, double eps) {
  const int n = X.n();
  std::vector<char> seen(n, 0);
  std::vector<double> row(n);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    X.fill_row(u, row.data());
    for (int v = 0; v < n; ++v)
      if (!seen[v] && row[v] < eps - kTieTol) {
        seen[v] = 1;
        ++visited;
        stack.push_back(v);
      }
  }
  return visited == n;
}

double default_classification_floor(const FiniteMMS& X) {
  double dmin = min_positive_distance(X);
  if (!std::isfinite(dmin)) return 0.0;
  return 4.0 * dmin;
}

ClassificationResult classify_uniform(const FiniteMMS& X, double floor_scale, double tol) {
  if (!(floor_scale > 0.0)) throw Error(ErrorKind::Schema, "classify_uniform: floor must be positive");
  ClassificationResult res;

  // uniformity gate on bulk balls: centers near the metric middle with small
  // radii, measured in the full space, so truncation boundaries do not count
  // as evidence against uniformity
  double diam_ub = 2.0 * max_dist_from(X, 0);
  {
    // approximate center: the sampled point with the smallest eccentricity
    Rng rng(0xc1a55);
    int center0 = 0;
    double best_ecc = kInf;
    for (int k = 0; k < 16; ++k) {
      int c = static_cast<int>(rng.below(X.n()));
      double ecc = max_dist_from(X, c);
      if (ecc < best_ecc) {
        best_ecc = ecc;
        center0 = c;
      }
    }
    std::vector<double> radii;
    for (double r = floor_scale; r <= best_ecc / 4.0 + kTieTol; r *= 2.0) radii.push_back(r);
    if (radii.empty()) radii.push_back(floor_scale);
    auto bulk = ball_points(X, Ball{center0, best_ecc / 2.0, Ball::Kind::Closed});
    std::vector<int> centers;
    if (bulk.size() <= 256) {
      centers = bulk;
    } else {
      for (int k = 0; k < 256; ++k) centers.push_back(bulk[rng.below(bulk.size())]);
    }
    auto rep = uniformity_defect(X, radii, centers);
    res.evidence.uniformity_defect = rep.max_defect;
    if (rep.max_defect > tol) {
      res.verdict = UniformClass::Unknown;
      res.evidence.notes = "uniformity gate failed: defect " + std::to_string(rep.max_defect) +
                           " > tol " + std::to_string(tol);
      return res;
    }
  }

  // connectivity table for the report
  for (double eps = floor_scale; eps <= diam_ub + kTieTol && res.evidence.epsilon_connectivity.size() < 8;
       eps *= 4.0)
    res.evidence.epsilon_connectivity.emplace_back(eps, component_count(X, eps));

  // (i) connected and pair-free above the floor -> RLike
  if (is_connected_at(X, floor_scale)) {
    auto pairs = find_pairs(X, diam_ub, floor_scale);
    res.evidence.pair_count = static_cast<int>(pairs.size());
    if (pairs.empty()) {
      res.verdict = UniformClass::RLike;
      return res;
    }
  }

  // (ii) positive minimal pair distance with connected sub-delta balls -> TLike
  auto mp = min_pair_distance(X, floor_scale);
  if (mp) {
    res.evidence.delta_min = mp->d;
    bool balls_connected = true;
    Rng rng(0xba11);
    for (int k = 0; k < 24 && balls_connected; ++k) {
      int c = static_cast<int>(rng.below(X.n()));
      auto pts = ball_points(X, Ball{c, 0.97 * mp->d, Ball::Kind::Open});
      if (pts.size() <= 1) continue;
      balls_connected = is_connected_at(X.restricted(pts), floor_scale);
    }
    if (balls_connected) {
      res.verdict = UniformClass::TLike;
      res.delta = mp->d;
      return res;
    }
  }

  // (iii) pairs at >= 3 distinct dyadic scales -> SLike
  {
    auto pairs = find_pairs(X, std::min(diam_ub, floor_scale * 128.0), floor_scale);
    res.evidence.pair_count = static_cast<int>(pairs.size());
    std::vector<int> scales;
    for (const auto& p : pairs) {
      int e = static_cast<int>(std::lround(std::log2(p.d)));
      if (std::find(scales.begin(), scales.end(), e) == scales.end()) scales.push_back(e);
    }
    if (scales.size() >= 3) {
      res.verdict = UniformClass::SLike;
      return res;
    }
  }

  res.verdict = UniformClass::Unknown;
  res.evidence.notes = "no branch of the trichotomy matched";
  return res;
}

}  // namespace mmslab
