#include "mmslab/lip_dual.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

namespace mmslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double support_cap(double L, double r, double dist_to_base) {
  double slackv = r - dist_to_base;
  if (slackv <= 0.0) return 0.0;
  return std::min(1.0, L * slackv);
}

/// Min-cost transshipment solver on the window of nodes with positive cap.
/// Arcs: u->v at cost L*d(u,v) for window nodes, u<->bank at cost cap_u.
/// Metric costs make transit nodes useless, so only supply/demand nodes and
/// the bank participate; flows on used arcs enable residual backtracking.
class FlowSolver {
public:
  FlowSolver(const FiniteMMS& space, double L, std::vector<int> nodes,
             std::vector<double> cap, std::vector<double> supply)
      : space_(space),
        L_(L),
        nodes_(std::move(nodes)),
        cap_(std::move(cap)),
        supply_(std::move(supply)) {
    V_ = static_cast<int>(nodes_.size());
    bank_ = V_;
    pi_.assign(V_ + 1, 0.0);
  }

  // Returns the optimal cost; potentials become the dual witness.
  double solve() {
    residual_ = supply_;
    double total_cost = 0.0;
    // Drain every positive-supply node to sinks or the bank, then fill
    // remaining deficits from the bank.
    while (true) {
      int src = -1;
      for (int i = 0; i < V_; ++i)
        if (residual_[i] > kAugTol) {
          src = i;
          break;
        }
      bool from_bank = false;
      if (src < 0) {
        for (int i = 0; i < V_; ++i)
          if (residual_[i] < -kAugTol) {
            from_bank = true;
            src = bank_;
            break;
          }
        if (!from_bank) break;
      }
      total_cost += augment(src, from_bank);
    }
    return total_cost;
  }

  /// g_i = pi[bank] - pi[i]; dual-feasible by the SSP invariant.
  std::vector<double> dual_g() const {
    std::vector<double> g(V_);
    for (int i = 0; i < V_; ++i) g[i] = pi_[bank_] - pi_[i];
    return g;
  }

  const std::vector<int>& window() const { return nodes_; }

private:
  static constexpr double kAugTol = 1e-14;

  double arc_cost(int u, int v) const {
    if (u == bank_) return cap_[v];
    if (v == bank_) return cap_[u];
    return L_ * space_.d(nodes_[u], nodes_[v]);
  }

  // One shortest-path augmentation from src (or the bank). Returns the cost
  // added. Dense Dijkstra with reduced costs; deterministic tie-breaks.
  double augment(int src, bool from_bank) {
    const int N = V_ + 1;
    std::vector<double> dist(N, kInf);
    std::vector<int> prev(N, -1);
    std::vector<bool> done(N, false);
    dist[src] = 0.0;
    int target = -1;
    while (true) {
      int u = -1;
      double best = kInf;
      for (int i = 0; i < N; ++i)
        if (!done[i] && dist[i] < best) {
          best = dist[i];
          u = i;
        }
      if (u < 0) break;
      done[u] = true;
      bool is_absorber = from_bank ? (u != bank_ && residual_[u] < -kAugTol)
                                   : (u == bank_ || (u != src && residual_[u] < -kAugTol));
      if (is_absorber) {
        target = u;
        break;
      }
      // forward arcs u -> v (all v), reduced cost >= 0 by invariant
      for (int v = 0; v < N; ++v) {
        if (done[v] || v == u) continue;
        if (u == bank_ && v == bank_) continue;
        double rc = arc_cost_pair(u, v) + pi_[u] - pi_[v];
        if (rc < 0.0) rc = 0.0;  // clamp float noise
        if (dist[u] + rc < dist[v]) {
          dist[v] = dist[u] + rc;
          prev[v] = u;
        }
      }
      // residual (backward) arcs: v -> u carried flow, usable as u -> v at -cost
      for (auto& [key, f] : flow_) {
        if (f <= kAugTol) continue;
        int a = key.first, b = key.second;  // flow a -> b
        if (b != u || done[a]) continue;
        double rc = -arc_cost_pair(a, b) + pi_[u] - pi_[a];
        if (rc < 0.0) rc = 0.0;
        if (dist[u] + rc < dist[a]) {
          dist[a] = dist[u] + rc;
          prev[a] = u;
        }
      }
    }
    if (target < 0)
      throw Error(ErrorKind::Internal, "flow solver: no augmenting path");
    // potential update keeps all reduced costs nonnegative
    for (int i = 0; i < N; ++i) pi_[i] += std::min(dist[i], dist[target]);

    // bottleneck along the path
    double amount = from_bank ? -residual_[target]
                              : std::min(residual_[src],
                                         target == bank_ ? kInf : -residual_[target]);
    for (int v = target; prev[v] >= 0; v = prev[v]) {
      int u = prev[v];
      auto it = flow_.find({v, u});
      if (it != flow_.end() && it->second > kAugTol) amount = std::min(amount, it->second);
    }
    // apply
    double cost = 0.0;
    for (int v = target; prev[v] >= 0; v = prev[v]) {
      int u = prev[v];
      auto back = flow_.find({v, u});
      if (back != flow_.end() && back->second > kAugTol) {
        back->second -= amount;
        cost -= arc_cost_pair(v, u) * amount;
      } else {
        flow_[{u, v}] += amount;
        cost += arc_cost_pair(u, v) * amount;
      }
    }
    if (from_bank) {
      residual_[target] += amount;
    } else {
      residual_[src] -= amount;
      if (target != bank_) residual_[target] += amount;
    }
    return cost;
  }

  double arc_cost_pair(int u, int v) const { return arc_cost(u, v); }

  const FiniteMMS& space_;
  double L_;
  std::vector<int> nodes_;
  std::vector<double> cap_;
  std::vector<double> supply_;
  std::vector<double> residual_;
  std::vector<double> pi_;
  std::map<std::pair<int, int>, double> flow_;
  int V_ = 0;
  int bank_ = 0;
};

void verify_witness(const LipschitzDualProblem& p, const std::vector<double>& g, double value) {
  const FiniteMMS& Z = *p.space;
  const int n = Z.n();
  std::vector<double> base_row(n);
  Z.fill_row(p.base, base_row.data());
  double obj = 0.0;
  for (int i = 0; i < n; ++i) {
    obj += g[i] * p.signed_mass[i];
    double cap = support_cap(p.L, p.r, base_row[i]);
    if (std::fabs(g[i]) > cap + 1e-8)
      throw Error(ErrorKind::Internal, "f_lr witness violates the support cap");
  }
  if (std::fabs(obj - value) > 1e-8 * (1.0 + std::fabs(value)))
    throw Error(ErrorKind::Internal, "f_lr witness objective mismatch");
  std::vector<double> row(n);
  for (int i = 0; i < n; ++i) {
    Z.fill_row(i, row.data());
    for (int j = i + 1; j < n; ++j)
      if (std::fabs(g[i] - g[j]) > p.L * row[j] + 1e-8)
        throw Error(ErrorKind::Internal, "f_lr witness violates a Lipschitz constraint");
  }
}

}  // namespace

LPResult f_lr(const LipschitzDualProblem& p) {
  if (!p.space) throw Error(ErrorKind::Schema, "f_lr: missing space");
  const FiniteMMS& Z = *p.space;
  const int n = Z.n();
  if (static_cast<int>(p.signed_mass.size()) != n)
    throw Error(ErrorKind::Schema, "f_lr: signed_mass size mismatch");
  if (!(p.L > 0.0) || !(p.r > 0.0)) throw Error(ErrorKind::Schema, "f_lr: need L, r > 0");
  for (double v : p.signed_mass)
    if (!std::isfinite(v)) return LPResult{0.0, std::vector<double>(n, 0.0),
                                           LPResult::Status::InfeasibleGuard};

  std::vector<double> base_row(n);
  Z.fill_row(p.base, base_row.data());

  std::vector<int> window;
  std::vector<double> caps, supply;
  bool any_mass = false;
  for (int i = 0; i < n; ++i) {
    double cap = support_cap(p.L, p.r, base_row[i]);
    if (cap > 0.0) {
      window.push_back(i);
      caps.push_back(cap);
      supply.push_back(p.signed_mass[i]);
      if (p.signed_mass[i] != 0.0) any_mass = true;
    }
  }

  LPResult res;
  res.witness.assign(n, 0.0);
  if (window.empty() || !any_mass) {
    res.value = 0.0;
    return res;
  }

  FlowSolver solver(Z, p.L, window, caps, supply);
  res.value = solver.solve();
  std::vector<double> g = solver.dual_g();
  for (std::size_t k = 0; k < window.size(); ++k) {
    // clamp float drift into the feasible box
    double cap = caps[k];
    res.witness[window[k]] = std::clamp(g[k], -cap, cap);
  }
  verify_witness(p, res.witness, res.value);
  return res;
}

double f_lr_oracle(const LipschitzDualProblem& p) {
  if (!p.space) throw Error(ErrorKind::Schema, "f_lr_oracle: missing space");
  const FiniteMMS& Z = *p.space;
  const int n = Z.n();
  if (n > 4) throw Error(ErrorKind::SizeGuard, "f_lr_oracle: more than 4 points");
  if (static_cast<int>(p.signed_mass.size()) != n)
    throw Error(ErrorKind::Schema, "f_lr_oracle: signed_mass size mismatch");

  // Rows of A g <= b.
  std::vector<std::array<double, 4>> A;
  std::vector<double> b;
  auto add_row = [&](std::array<double, 4> row, double rhs) {
    A.push_back(row);
    b.push_back(rhs);
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      std::array<double, 4> r1{}, r2{};
      r1[i] = 1.0;
      r1[j] = -1.0;
      r2[i] = -1.0;
      r2[j] = 1.0;
      add_row(r1, p.L * Z.d(i, j));
      add_row(r2, p.L * Z.d(i, j));
    }
  for (int i = 0; i < n; ++i) {
    double cap = support_cap(p.L, p.r, Z.d(p.base, i));
    std::array<double, 4> r1{}, r2{};
    r1[i] = 1.0;
    r2[i] = -1.0;
    add_row(r1, cap);
    add_row(r2, cap);
  }

  const int m = static_cast<int>(A.size());
  double best = 0.0;  // g = 0 is always feasible
  auto feasible = [&](const std::array<double, 4>& g) {
    for (int r = 0; r < m; ++r) {
      double lhs = 0.0;
      for (int c = 0; c < n; ++c) lhs += A[r][c] * g[c];
      if (lhs > b[r] + 1e-9) return false;
    }
    return true;
  };
  auto consider = [&](const std::array<double, 4>& g) {
    if (!feasible(g)) return;
    double obj = 0.0;
    for (int c = 0; c < n; ++c) obj += g[c] * p.signed_mass[c];
    best = std::max(best, obj);
  };

  std::vector<int> comb(n);
  // iterate combinations of row indices
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      // solve the n x n system A_sub g = b_sub
      double M[4][5];
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) M[r][c] = A[comb[r]][c];
        M[r][n] = b[comb[r]];
      }
      // gaussian elimination with partial pivoting
      for (int col = 0; col < n; ++col) {
        int piv = -1;
        double pmax = 1e-12;
        for (int r = col; r < n; ++r)
          if (std::fabs(M[r][col]) > pmax) {
            pmax = std::fabs(M[r][col]);
            piv = r;
          }
        if (piv < 0) return;  // singular subset
        for (int c = 0; c <= n; ++c) std::swap(M[col][c], M[piv][c]);
        for (int r = 0; r < n; ++r) {
          if (r == col) continue;
          double f = M[r][col] / M[col][col];
          for (int c = 0; c <= n; ++c) M[r][c] -= f * M[col][c];
        }
      }
      std::array<double, 4> g{};
      for (int r = 0; r < n; ++r) g[r] = M[r][n] / M[r][r];
      consider(g);
      return;
    }
    for (int i = start; i < m; ++i) {
      comb[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

double f_x(const FiniteMMS& Z, int base, std::span<const double> mu,
           std::span<const double> nu) {
  const int n = Z.n();
  if (static_cast<int>(mu.size()) != n || static_cast<int>(nu.size()) != n)
    throw Error(ErrorKind::Schema, "f_x: measure size mismatch");
  LipschitzDualProblem p;
  p.space = &Z;
  p.base = base;
  p.signed_mass.resize(n);
  bool all_zero = true;
  for (int i = 0; i < n; ++i) {
    if (!(mu[i] >= 0.0) || !(nu[i] >= 0.0))
      throw Error(ErrorKind::Schema, "f_x: measures must be nonnegative");
    p.signed_mass[i] = mu[i] - nu[i];
    if (p.signed_mass[i] != 0.0) all_zero = false;
  }
  if (all_zero) return 0.0;

  auto pred = [&](double eps) {
    p.L = 1.0 / eps;
    p.r = 1.0 / eps;
    return f_lr(p).value < eps;
  };

  const double half = 0.5 - 1e-9;
  if (!pred(half)) return 0.5;
  double lo = 0.0, hi = half;
  for (int it = 0; it < kFxBisectionIters && hi - lo > 1e-9; ++it) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace mmslab
