#include "mmslab/geoprobe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "mmslab/kernels.hpp"
#include "mmslab/models.hpp"
#include "mmslab/rng.hpp"

namespace mmslab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

UniformityReport uniformity_defect(const FiniteMMS& X, std::span<const double> radii,
                                   std::span<const int> centers) {
  for (double r : radii)
    if (!(r > 0.0)) throw Error(ErrorKind::Schema, "uniformity_defect: radii must be positive");
  UniformityReport rep;
  rep.centers_checked = static_cast<int>(centers.size());
  const int n = X.n();
  std::vector<double> row(n);
  for (int c : centers) {
    X.fill_row(c, row.data());
    for (double r : radii) {
      double m = kernels::sum_where_le(row.data(), X.weights().data(), row.size(), r + kTieTol);
      double defect = std::fabs(m - r);
      if (defect > rep.max_defect) {
        rep.max_defect = defect;
        rep.worst_center = c;
        rep.worst_radius = r;
      }
    }
  }
  return rep;
}

UniformityReport uniformity_defect(const FiniteMMS& X, std::span<const double> radii,
                                   int center_sample, std::uint64_t seed) {
  std::vector<int> centers;
  const int n = X.n();
  if (center_sample <= 0 || center_sample >= n) {
    centers.resize(n);
    std::iota(centers.begin(), centers.end(), 0);
  } else {
    Rng rng(seed);
    std::set<int> seen;
    while (static_cast<int>(seen.size()) < center_sample)
      seen.insert(static_cast<int>(rng.below(n)));
    centers.assign(seen.begin(), seen.end());
  }
  return uniformity_defect(X, radii, centers);
}

namespace {

// Branch and bound over deduplicated, undominated candidate coverage sets.
struct CoverSearch {
  std::vector<std::vector<std::uint64_t>> sets;  // bitsets over target points
  std::vector<int> set_center;
  int n_target = 0;
  int words = 0;
  long budget = 0;
  int best = 0;
  std::vector<int> best_pick, pick;

  bool all_covered(const std::vector<std::uint64_t>& cov) const {
    for (int w = 0; w < words; ++w) {
      std::uint64_t full = ~0ULL;
      if (w == words - 1 && n_target % 64) full = (1ULL << (n_target % 64)) - 1;
      if ((cov[w] & full) != full) return false;
    }
    return true;
  }

  int first_uncovered_with_fewest(const std::vector<std::uint64_t>& cov,
                                  const std::vector<int>& count_cache) const {
    int best_t = -1, best_c = std::numeric_limits<int>::max();
    for (int t = 0; t < n_target; ++t) {
      if (cov[t / 64] & (1ULL << (t % 64))) continue;
      if (count_cache[t] < best_c) {
        best_c = count_cache[t];
        best_t = t;
      }
    }
    return best_t;
  }

  void dfs(std::vector<std::uint64_t>& cov, int depth,
           const std::vector<std::vector<int>>& covering_sets,
           const std::vector<int>& count_cache) {
    if (budget-- <= 0) return;
    if (all_covered(cov)) {
      if (depth < best) {
        best = depth;
        best_pick = pick;
      }
      return;
    }
    if (depth + 1 >= best) return;
    int t = first_uncovered_with_fewest(cov, count_cache);
    if (t < 0) return;
    for (int s : covering_sets[t]) {
      std::vector<std::uint64_t> next = cov;
      for (int w = 0; w < words; ++w) next[w] |= sets[s][w];
      pick.push_back(set_center[s]);
      dfs(next, depth + 1, covering_sets, count_cache);
      pick.pop_back();
      if (budget <= 0) return;
    }
  }
};

}  // namespace

CoverResult covering_number(const FiniteMMS& X, std::span<const int> target, double r_prime,
                            long node_budget) {
  if (!(r_prime > 0.0)) throw Error(ErrorKind::Schema, "covering_number: r' must be positive");
  if (target.empty()) return CoverResult{0, true, 0, 0, {}};
  const int n = X.n();
  const int nt = static_cast<int>(target.size());
  const int words = (nt + 63) / 64;

  // candidate coverage bitsets
  std::vector<std::vector<std::uint64_t>> raw_sets;
  std::vector<int> raw_center;
  std::vector<double> row(n);
  for (int c = 0; c < n; ++c) {
    X.fill_row(c, row.data());
    std::vector<std::uint64_t> bs(words, 0);
    bool any = false;
    for (int t = 0; t < nt; ++t) {
      if (row[target[t]] <= r_prime + kTieTol) {
        bs[t / 64] |= 1ULL << (t % 64);
        any = true;
      }
    }
    if (any) {
      raw_sets.push_back(std::move(bs));
      raw_center.push_back(c);
    }
  }
  // dedupe + drop dominated sets
  CoverSearch cs;
  cs.n_target = nt;
  cs.words = words;
  for (std::size_t i = 0; i < raw_sets.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < raw_sets.size() && !dominated; ++j) {
      if (i == j) continue;
      bool subset = true, equal = true;
      for (int w = 0; w < words; ++w) {
        if (raw_sets[i][w] & ~raw_sets[j][w]) subset = false;
        if (raw_sets[i][w] != raw_sets[j][w]) equal = false;
      }
      if (subset && !equal) dominated = true;
      if (equal && j < i) dominated = true;  // keep first representative
    }
    if (!dominated) {
      cs.sets.push_back(raw_sets[i]);
      cs.set_center.push_back(raw_center[i]);
    }
  }
  const int ns = static_cast<int>(cs.sets.size());
  if (ns == 0)
    throw Error(ErrorKind::Internal, "covering_number: no candidate covers the target");

  // greedy upper bound
  std::vector<std::uint64_t> cov(words, 0);
  std::vector<int> greedy_centers;
  while (!cs.all_covered(cov)) {
    int best_s = -1, best_gain = -1;
    for (int s = 0; s < ns; ++s) {
      int gain = 0;
      for (int w = 0; w < words; ++w)
        gain += __builtin_popcountll(cs.sets[s][w] & ~cov[w]);
      if (gain > best_gain) {
        best_gain = gain;
        best_s = s;
      }
    }
    if (best_gain <= 0) break;
    for (int w = 0; w < words; ++w) cov[w] |= cs.sets[best_s][w];
    greedy_centers.push_back(cs.set_center[best_s]);
  }
  if (!cs.all_covered(cov))
    throw Error(ErrorKind::Internal, "covering_number: greedy failed to cover");

  // separated-set lower bound: points pairwise > 2r' apart need distinct balls
  std::vector<int> sep;
  for (int t = 0; t < nt; ++t) {
    bool ok = true;
    for (int s : sep)
      if (X.d(target[t], target[s]) <= 2.0 * r_prime + 2.0 * kTieTol) {
        ok = false;
        break;
      }
    if (ok) sep.push_back(t);
  }

  CoverResult res;
  res.greedy_ub = static_cast<int>(greedy_centers.size());
  res.separated_lb = static_cast<int>(sep.size());
  if (res.greedy_ub == res.separated_lb) {
    res.count = res.greedy_ub;
    res.exact = true;
    res.centers = greedy_centers;
    return res;
  }

  // branch and bound
  // per-target candidate lists, ordered by decreasing coverage
  std::vector<std::vector<int>> covering_sets(nt);
  std::vector<int> count_cache(nt, 0);
  std::vector<std::pair<int, int>> order(ns);
  for (int s = 0; s < ns; ++s) {
    int pop = 0;
    for (int w = 0; w < words; ++w) pop += __builtin_popcountll(cs.sets[s][w]);
    order[s] = {-pop, s};
  }
  std::sort(order.begin(), order.end());
  for (auto [negpop, s] : order)
    for (int t = 0; t < nt; ++t)
      if (cs.sets[s][t / 64] & (1ULL << (t % 64))) {
        covering_sets[t].push_back(s);
        ++count_cache[t];
      }

  cs.budget = node_budget;
  cs.best = res.greedy_ub;
  cs.best_pick = greedy_centers;
  std::vector<std::uint64_t> empty(words, 0);
  cs.dfs(empty, 0, covering_sets, count_cache);

  res.count = cs.best;
  res.centers = cs.best_pick;
  res.exact = cs.budget > 0 || cs.best == res.separated_lb;
  return res;
}

CoverResult covering_number(const FiniteMMS& X, const Ball& b, double r_prime,
                            long node_budget) {
  auto pts = ball_points(X, b);
  return covering_number(X, pts, r_prime, node_budget);
}

DoublingReport doubling_constant(const FiniteMMS& X, std::span<const Ball> sample_balls) {
  DoublingReport rep;
  for (const Ball& b : sample_balls) {
    auto res = covering_number(X, b, b.radius / 2.0);
    rep.all_exact = rep.all_exact && res.exact;
    if (res.count > rep.constant) {
      rep.constant = res.count;
      rep.worst = b;
    }
  }
  return rep;
}

double hausdorff_upper(const FiniteMMS& X, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::Schema, "hausdorff_upper: delta must be positive");
  const int n = X.n();
  std::vector<bool> covered(n, false);
  std::vector<double> row(n);
  double total = 0.0;
  int covered_count = 0;
  while (covered_count < n) {
    // center covering the most uncovered points within delta/2
    int best_c = -1, best_gain = -1;
    for (int c = 0; c < n; ++c) {
      if (covered[c]) continue;
      X.fill_row(c, row.data());
      int gain = 0;
      for (int j = 0; j < n; ++j)
        if (!covered[j] && row[j] <= delta / 2.0 + kTieTol) ++gain;
      if (gain > best_gain) {
        best_gain = gain;
        best_c = c;
      }
    }
    X.fill_row(best_c, row.data());
    std::vector<int> cell;
    for (int j = 0; j < n; ++j)
      if (!covered[j] && row[j] <= delta / 2.0 + kTieTol) {
        covered[j] = true;
        ++covered_count;
        cell.push_back(j);
      }
    // realized diameter of the cell
    double diam = 0.0;
    std::vector<double> crow(n);
    for (int a : cell) {
      X.fill_row(a, crow.data());
      for (int b : cell) diam = std::max(diam, crow[b]);
    }
    total += diam;
  }
  return total;
}

double lip_projection_lower(const FiniteMMS& X) {
  std::vector<int> all(X.n());
  std::iota(all.begin(), all.end(), 0);
  return lip_projection_lower(X, all);
}

double lip_projection_lower(const FiniteMMS& X, std::span<const int> subset) {
  if (X.geometry() != Geometry::DyadicCube)
    throw Error(ErrorKind::WrongSpaceKind, "lip_projection_lower: needs a dyadic-cube space");
  if (subset.empty()) return 0.0;
  std::set<std::uint32_t> image;
  for (int i : subset) image.insert(X.masks()[i]);
  // each image point carries one cylinder of length equal to the quantum
  return X.dyadic_scale() * static_cast<double>(image.size());
}

SeparationProfile separation_profile(const FiniteMMS& X, std::span<const double> scales) {
  const int n = X.n();
  SeparationProfile prof;
  int consecutive = 0;
  for (double scale : scales) {
    // single-linkage components: edges d < scale
    std::vector<int> label(n, -1);
    std::vector<double> row(n);
    int next_label = 0;
    std::vector<int> stack;
    for (int s = 0; s < n; ++s) {
      if (label[s] >= 0) continue;
      label[s] = next_label;
      stack.push_back(s);
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        X.fill_row(u, row.data());
        for (int v = 0; v < n; ++v)
          if (label[v] < 0 && row[v] < scale - kTieTol) {
            label[v] = next_label;
            stack.push_back(v);
          }
      }
      ++next_label;
    }
    SeparationEntry e;
    e.scale = scale;
    e.cluster_count = next_label;
    e.max_cluster_diameter = 0.0;
    e.min_cluster_separation = next_label > 1 ? kInf : 0.0;
    for (int u = 0; u < n; ++u) {
      X.fill_row(u, row.data());
      for (int v = u + 1; v < n; ++v) {
        if (label[u] == label[v])
          e.max_cluster_diameter = std::max(e.max_cluster_diameter, row[v]);
        else
          e.min_cluster_separation = std::min(e.min_cluster_separation, row[v]);
      }
    }
    prof.entries.push_back(e);
    bool flagged = e.cluster_count > 1 && e.max_cluster_diameter > 0.0 &&
                   e.min_cluster_separation / e.max_cluster_diameter >= 0.25;
    consecutive = flagged ? consecutive + 1 : 0;
    if (consecutive >= 4) prof.unrectifiable_evidence = true;
  }
  return prof;
}

namespace {

double lp_norm(std::span<const double> v, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::fabs(x), p);
  return std::pow(s, 1.0 / p);
}

struct StressEval {
  const FiniteMMS& X;
  double p;
  int dim;

  double point_pair(const std::vector<double>& U, int i, int j) const {
    std::vector<double> diff(dim);
    for (int t = 0; t < dim; ++t) diff[t] = U[i * dim + t] - U[j * dim + t];
    return lp_norm(diff, p);
  }

  // max relative error; q < inf gives the smoothed power-mean surrogate
  double objective(const std::vector<double>& U, double q) const {
    const int n = X.n();
    double acc = 0.0, worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double dij = X.d(i, j);
        if (dij <= 0.0) continue;
        double rel = std::fabs(point_pair(U, i, j) - dij) / dij;
        worst = std::max(worst, rel);
        if (!std::isinf(q)) acc += std::pow(rel, q);
      }
    return std::isinf(q) ? worst : acc;
  }
};

}  // namespace

StressResult lp_embed_stress(const FiniteMMS& X, double p, int dim, int restarts,
                             std::uint64_t seed) {
  const int n = X.n();
  if (n > 50) throw Error(ErrorKind::SizeGuard, "lp_embed_stress: more than 50 points");
  if (dim < 1 || dim > 10) throw Error(ErrorKind::SizeGuard, "lp_embed_stress: dim out of range");
  if (!(p >= 1.0)) throw Error(ErrorKind::Schema, "lp_embed_stress: need p >= 1");
  if (restarts < 1) throw Error(ErrorKind::Schema, "lp_embed_stress: need restarts >= 1");

  StressEval eval{X, p, dim};
  double diam = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) diam = std::max(diam, X.d(i, j));

  StressResult best;
  best.p = p;
  best.dim = dim;
  best.restarts = restarts;
  best.best_stress = kInf;

  Rng master(seed);
  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng = master.fork(restart);
    std::vector<double> U(static_cast<std::size_t>(n) * dim, 0.0);
    if (restart == 0) {
      // axis seed: point i along axis (i-1) mod dim at its distance from 0
      for (int i = 1; i < n; ++i) U[i * dim + (i - 1) % dim] = X.d(0, i);
    } else {
      for (double& u : U) u = rng.uniform(-diam, diam);
    }
    // coordinate descent with a smoothing ramp, deterministic sweeps
    for (double q : {2.0, 8.0, 32.0, kInf}) {
      for (int sweep = 0; sweep < 6; ++sweep) {
        for (int i = 0; i < n; ++i)
          for (int t = 0; t < dim; ++t) {
            double step = diam / 2.0;
            // golden-section down to fine resolution around the current value
            double center = U[i * dim + t];
            double lo = center - step, hi = center + step;
            const double gr = 0.6180339887498949;
            double a = lo, b = hi;
            double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
            auto val = [&](double v) {
              U[i * dim + t] = v;
              return eval.objective(U, q);
            };
            double f1 = val(x1), f2 = val(x2);
            for (int it = 0; it < 24; ++it) {
              if (f1 < f2) {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - gr * (b - a);
                f1 = val(x1);
              } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + gr * (b - a);
                f2 = val(x2);
              }
            }
            double cand = 0.5 * (a + b);
            double fc = val(cand);
            double f0 = val(center);
            U[i * dim + t] = fc <= f0 ? cand : center;
          }
      }
    }
    double stress = eval.objective(U, kInf);
    if (stress < best.best_stress) {
      best.best_stress = stress;
      best.config = U;
    }
  }
  return best;
}

HeisenbergIdentityReport heisenberg_identity_check(int samples, std::uint64_t seed) {
  Rng rng(seed);
  HeisenbergIdentityReport rep;
  rep.samples = samples;
  for (int s = 0; s < samples; ++s) {
    HeisenbergPoint a{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0), rng.uniform(-4.0, 4.0)};
    int m = static_cast<int>(rng.below(10)) - 3;
    int nexp = static_cast<int>(rng.below(10)) - 3;
    if (m == nexp) nexp += 1;
    double lam = std::ldexp(1.0, m);
    double mu = std::ldexp(1.0, nexp);
    auto lhs_pt = heisenberg_mul(heisenberg_inv(heisenberg_dilate(a, lam)),
                                 heisenberg_dilate(a, mu));
    double lhs = koranyi_norm(lhs_pt);
    double c = (mu + lam) / (mu - lam);
    double rhs = std::fabs(mu - lam) * koranyi_norm({a.x, a.y, c * a.t});
    double scalebase = std::max(lhs, rhs);
    double rel = scalebase > 0.0 ? std::fabs(lhs - rhs) / scalebase : 0.0;
    rep.max_rel_err = std::max(rep.max_rel_err, rel);
  }
  return rep;
}

HeisenbergGrowthReport heisenberg_growth_constant(int samples, std::uint64_t seed, int exp_lo,
                                                  int exp_hi) {
  if (exp_lo < 1 || exp_hi <= exp_lo)
    throw Error(ErrorKind::Schema, "heisenberg_growth_constant: bad exponent range");
  Rng rng(seed);
  HeisenbergGrowthReport rep;
  rep.samples = samples;
  rep.exp_lo = exp_lo;
  rep.exp_hi = exp_hi;
  int done = 0;
  while (done < samples) {
    HeisenbergPoint a{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    double na = koranyi_norm(a);
    if (na > 1.0 || na == 0.0) continue;
    ++done;
    for (int m = exp_lo; m <= exp_hi; ++m)
      for (int nexp = exp_lo; nexp <= exp_hi; ++nexp) {
        if (m == nexp) continue;
        double lam = std::ldexp(1.0, m), mu = std::ldexp(1.0, nexp);
        double lhs = koranyi_norm(heisenberg_mul(heisenberg_inv(heisenberg_dilate(a, lam)),
                                                 heisenberg_dilate(a, mu)));
        rep.constant = std::max(rep.constant, lhs / (std::fabs(mu - lam) * na));
      }
  }
  return rep;
}

}  // namespace mmslab
