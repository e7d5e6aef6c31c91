#include "cclot/oracle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "cclot/lp.hpp"

namespace cclot::oracle {

using namespace cclot::lp;

namespace {

// cumulative demand of scenario j over the first `len` periods
double cumdem(const Instance& inst, int j, int len) {
  double s = 0.0;
  for (int t = 0; t < len; ++t) s += inst.d[j][t];
  return s;
}

double bigM(const Instance& inst, int i) {
  double best = 0.0;
  for (int j = 0; j < inst.m; ++j)
    best = std::max(best, cumdem(inst, j, inst.n) - cumdem(inst, j, i));
  return best;
}

double pattern_count(const Instance& inst) {
  double zpats = 0.0, comb = 1.0;
  for (int q = 0; q <= inst.k(); ++q) {
    zpats += comb;
    comb = comb * (inst.m - q) / (q + 1);
  }
  return std::ldexp(zpats, inst.n);  // 2^n * sum of binomials
}

void check_pattern_guard(const Instance& inst) {
  if (pattern_count(inst) > 1e6)
    throw std::runtime_error("oracle: instance too large to enumerate");
}

// Calls fn(z) for every 0/1 vector z of length m with sum(z) <= k.
template <class F>
void for_each_z(int m, int k, F&& fn) {
  std::vector<int> z(m, 0);
  fn(z);
  std::vector<int> pick;
  for (int q = 1; q <= k; ++q) {
    pick.assign(q, 0);
    for (int i = 0; i < q; ++i) pick[i] = i;
    for (;;) {
      std::fill(z.begin(), z.end(), 0);
      for (int i : pick) z[i] = 1;
      fn(z);
      int i = q - 1;
      while (i >= 0 && pick[i] == m - q + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (int t = i + 1; t < q; ++t) pick[t] = pick[t - 1] + 1;
    }
  }
}

// Shared pattern LP: columns y, z, and optionally s, with every cover row
// written as sum_{i<=t} y_i + D_jt z_j >= D_jt so that pinning the z
// columns turns scenarios on and off without touching the rows.
struct PatternLp {
  LinearProgram lp;
  int n, m;
  bool with_s;
  std::vector<double> M;

  PatternLp(const Instance& inst, bool stock_vars) {
    n = inst.n;
    m = inst.m;
    with_s = stock_vars;
    M.resize(n);
    for (int i = 0; i < n; ++i) M[i] = bigM(inst, i);
    for (int i = 0; i < n; ++i) lp.add_column(0.0, M[i], 0.0);
    for (int j = 0; j < m; ++j) lp.add_column(0.0, 1.0, 0.0);
    if (with_s)
      for (int j = 0; j < m; ++j)
        for (int t = 0; t < n; ++t) lp.add_column(0.0, kInf, 0.0);
    for (int j = 0; j < m; ++j)
      for (int t = 0; t < n; ++t) {
        double D = cumdem(inst, j, t + 1);
        Row row;
        for (int i = 0; i <= t; ++i) row.coef.push_back({i, 1.0});
        row.coef.push_back({n + j, D});
        row.sense = Sense::GE;
        row.rhs = D;
        lp.rows.push_back(row);
      }
    if (with_s)
      for (int j = 0; j < m; ++j)
        for (int t = 0; t < n; ++t) {
          Row row;
          row.coef.push_back({scol(j, t), 1.0});
          for (int i = 0; i <= t; ++i) row.coef.push_back({i, -1.0});
          row.sense = Sense::GE;
          row.rhs = -cumdem(inst, j, t + 1);
          lp.rows.push_back(row);
        }
  }

  int ycol(int i) const { return i; }
  int zcol(int j) const { return n + j; }
  int scol(int j, int t) const { return n + m + j * n + t; }

  void pin(SimplexSolver& solver, const std::vector<int>& x,
           const std::vector<int>& z) const {
    for (int i = 0; i < n; ++i) solver.set_bounds(ycol(i), 0.0, x[i] ? M[i] : 0.0);
    for (int j = 0; j < m; ++j) {
      double v = z[j] ? 1.0 : 0.0;
      solver.set_bounds(zcol(j), v, v);
    }
  }
};

int rank_plus_one(const std::vector<std::vector<double>>& pts) {
  if (pts.empty()) return 0;
  std::size_t dim = pts[0].size();
  std::vector<std::vector<double>> basis;  // row echelon, with pivot columns
  std::vector<std::size_t> pivcol;
  double scale = 1.0;
  for (std::size_t p = 1; p < pts.size(); ++p) {
    std::vector<double> v(dim);
    for (std::size_t c = 0; c < dim; ++c) {
      v[c] = pts[p][c] - pts[0][c];
      scale = std::max(scale, std::abs(pts[p][c]));
    }
    for (std::size_t b = 0; b < basis.size(); ++b) {
      double f = v[pivcol[b]] / basis[b][pivcol[b]];
      if (f == 0.0) continue;
      for (std::size_t c = 0; c < dim; ++c) v[c] -= f * basis[b][c];
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < dim; ++c)
      if (std::abs(v[c]) > std::abs(v[best])) best = c;
    if (std::abs(v[best]) > 1e-7 * scale) {
      basis.push_back(std::move(v));
      pivcol.push_back(best);
    }
  }
  return static_cast<int>(basis.size()) + 1;
}

}  // namespace

BruteOpt brute_force_optimum(const Instance& inst) {
  inst.validate();
  check_pattern_guard(inst);
  int n = inst.n, m = inst.m;
  PatternLp pat(inst, true);
  for (int i = 0; i < n; ++i) pat.lp.cost[pat.ycol(i)] = inst.c[i];
  for (int j = 0; j < m; ++j)
    for (int t = 0; t < n; ++t) pat.lp.cost[pat.scol(j, t)] = inst.h[t] / m;
  SimplexSolver solver(pat.lp);

  bool nonneg_inner = true;
  for (double v : inst.c) nonneg_inner = nonneg_inner && v >= 0.0;
  for (double v : inst.h) nonneg_inner = nonneg_inner && v >= 0.0;

  BruteOpt best;
  std::vector<int> x(n);
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    double fx = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = (mask >> i) & 1;
      if (x[i]) fx += inst.f[i];
    }
    if (nonneg_inner && fx >= best.objective) continue;
    for_each_z(m, inst.k(), [&](const std::vector<int>& z) {
      pat.pin(solver, x, z);
      LpSolution sol = solver.solve();
      if (sol.status != LpStatus::Optimal) return;
      double obj = fx + sol.objective;
      if (obj < best.objective - 1e-12) {
        best.objective = obj;
        best.x = x;
        best.z = z;
        best.y.assign(sol.primal.begin(), sol.primal.begin() + n);
        best.s.assign(m, std::vector<double>(n));
        for (int j = 0; j < m; ++j)
          for (int t = 0; t < n; ++t) best.s[j][t] = sol.primal[pat.scol(j, t)];
      }
    });
  }
  if (!std::isfinite(best.objective))
    throw std::runtime_error("oracle: no feasible pattern found");
  return best;
}

ValidityVerdict validate_cut(const Instance& inst, const cuts::Cut& cut,
                             Space space) {
  inst.validate();
  check_pattern_guard(inst);
  bool needs_s = false;
  for (const auto& [ref, a] : cut.terms) needs_s |= ref.kind == VarKind::S;
  if (needs_s && space == Space::P)
    throw std::invalid_argument("oracle: cut touches stock variables, use Pplus");

  int n = inst.n, m = inst.m;
  PatternLp pat(inst, space == Space::Pplus);
  std::vector<double> xcoef(n, 0.0);
  for (const auto& [ref, a] : cut.terms) {
    switch (ref.kind) {
      case VarKind::X: xcoef.at(ref.i) += a; break;
      case VarKind::Y: pat.lp.cost[pat.ycol(ref.i)] += a; break;
      case VarKind::Z: pat.lp.cost[pat.zcol(ref.j)] += a; break;
      case VarKind::S: pat.lp.cost[pat.scol(ref.j, ref.i)] += a; break;
      default: throw std::logic_error("oracle: unsupported cut term");
    }
  }
  SimplexSolver solver(pat.lp);

  std::vector<std::vector<double>> cumD(m, std::vector<double>(n));
  for (int j = 0; j < m; ++j)
    for (int t = 0; t < n; ++t) cumD[j][t] = cumdem(inst, j, t + 1);

  ValidityVerdict verdict;
  std::vector<int> x(n);
  std::vector<double> capcum(n);
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    double cx = 0.0, cap = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = (mask >> i) & 1;
      if (x[i]) cx += xcoef[i];
      if (x[i]) cap += pat.M[i];
      capcum[i] = cap;
    }
    bool stop = false;
    for_each_z(m, inst.k(), [&](const std::vector<int>& z) {
      if (stop) return;
      // a pattern is feasible iff cumulative capacity covers every kept
      // scenario; proving infeasibility here skips the LP entirely
      for (int t = 0; t < n; ++t) {
        double need = 0.0;
        for (int j = 0; j < m; ++j)
          if (!z[j] && cumD[j][t] > need) need = cumD[j][t];
        if (need > capcum[t] + 1e-5 * (1.0 + need)) return;
      }
      pat.pin(solver, x, z);
      LpSolution sol = solver.solve();
      if (sol.status == LpStatus::Infeasible) return;  // not a point of P
      if (sol.status == LpStatus::Unbounded) {
        verdict.unbounded = true;
        verdict.worst_slack = -kInf;
        verdict.worst_x = x;
        verdict.worst_z = z;
        stop = true;
        return;
      }
      double slack = cx + sol.objective - cut.rhs;
      if (slack < verdict.worst_slack) {
        verdict.worst_slack = slack;
        verdict.worst_x = x;
        verdict.worst_z = z;
      }
    });
    if (stop) break;
  }
  verdict.valid = verdict.worst_slack >= -1e-6 * (1.0 + std::abs(cut.rhs));
  return verdict;
}

cuts::SepResult brute_force_separation(const DemandStats& st, int i,
                                       const std::vector<double>& zhat,
                                       SepVariant variant, double xnext) {
  if (i < 0 || i >= st.n())
    throw std::invalid_argument("oracle: period out of range");
  if (static_cast<int>(zhat.size()) != st.m())
    throw std::invalid_argument("oracle: zhat length");
  int k = st.k();
  if (k > 15) throw std::runtime_error("oracle: k too large to enumerate");
  cuts::SepResult best;  // value 0.0, empty subset
  if (k == 0) return best;

  std::vector<double> v(k + 1);
  for (int r = 0; r < k; ++r) v[r] = st.ranked_value(i, r);
  v[k] = st.closing_value(i);

  bool anchored = variant == SepVariant::Anchored;
  bool have = !anchored;  // free variant starts from the empty subset at 0
  if (anchored) best.value = std::numeric_limits<double>::infinity();
  std::vector<int> ranks;
  for (unsigned mask = 1; mask < (1u << k); ++mask) {
    if (anchored && !(mask & 1u)) continue;
    ranks.clear();
    for (int r = 0; r < k; ++r)
      if (mask & (1u << r)) ranks.push_back(r);
    double val = anchored ? 0.0 : -v[ranks[0]] * xnext;
    for (std::size_t p = 0; p < ranks.size(); ++p) {
      double nextv = p + 1 < ranks.size() ? v[ranks[p + 1]] : v[k];
      val += (v[ranks[p]] - nextv) * zhat[st.ranked(i, ranks[p])];
    }
    if (!have || val < best.value) {
      have = true;
      best.value = val;
      best.subset.clear();
      for (int r : ranks) best.subset.push_back(st.ranked(i, r));
    }
  }
  return best;
}

bool hull_integrality_check(const Instance& inst, int trials, bool include_cuts,
                            unsigned seed) {
  inst.validate();
  if (inst.k() != 0)
    throw std::invalid_argument("oracle: hull check needs zero risk budget");
  if (inst.n > 6)
    throw std::invalid_argument("oracle: hull check limited to n <= 6");
  int n = inst.n;

  // running max of cumulative demand across scenarios
  std::vector<double> Dbar(n + 1, 0.0);
  for (int t = 1; t <= n; ++t)
    for (int j = 0; j < inst.m; ++j)
      Dbar[t] = std::max(Dbar[t], cumdem(inst, j, t));

  LinearProgram lp;  // x first, then y
  for (int i = 0; i < n; ++i) lp.add_column(0.0, 1.0, 0.0);
  std::vector<double> M(n);
  for (int i = 0; i < n; ++i) {
    M[i] = bigM(inst, i);
    lp.add_column(0.0, kInf, 0.0);
  }
  for (int j = 0; j < inst.m; ++j)
    for (int t = 0; t < n; ++t) {
      Row row;
      for (int i = 0; i <= t; ++i) row.coef.push_back({n + i, 1.0});
      row.sense = Sense::GE;
      row.rhs = cumdem(inst, j, t + 1);
      lp.rows.push_back(row);
    }
  for (int i = 0; i < n; ++i) {
    Row row;
    row.coef.push_back({i, M[i]});
    row.coef.push_back({n + i, -1.0});
    row.sense = Sense::GE;
    row.rhs = 0.0;
    lp.rows.push_back(row);
  }
  if (include_cuts)
    for (int ell = 0; ell < n; ++ell)
      for (unsigned sm = 0; sm < (1u << (ell + 1)); ++sm) {
        Row row;
        for (int i = 0; i <= ell; ++i) {
          if (sm & (1u << i))
            row.coef.push_back({n + i, 1.0});
          else if (Dbar[ell + 1] - Dbar[i] > 0.0)
            row.coef.push_back({i, Dbar[ell + 1] - Dbar[i]});
        }
        row.sense = Sense::GE;
        row.rhs = Dbar[ell + 1];
        if (!row.coef.empty()) lp.rows.push_back(row);
      }

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  for (int trial = 0; trial < trials; ++trial) {
    for (int i = 0; i < n; ++i)
      lp.cost[i] = 200.0 * uf(rng) + 1e-7 * std::ldexp(1.0, -i);
    for (int i = 0; i < n; ++i)
      lp.cost[n + i] = 20.0 * uf(rng) + 1e-7 * std::ldexp(1.0, -n - i);
    SimplexSolver trial_solver(lp);
    LpSolution sol = trial_solver.solve();
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error("oracle: hull LP did not solve");
    for (int i = 0; i < n; ++i) {
      double xi = sol.primal[i];
      if (std::min(std::abs(xi), std::abs(1.0 - xi)) > 1e-6) return false;
    }
  }
  return true;
}

int tight_point_rank(const Instance& inst, const cuts::Cut& cut,
                     int sample_budget, unsigned seed) {
  inst.validate();
  if (inst.n > 3 || inst.m > 6)
    throw std::invalid_argument("oracle: rank check limited to n <= 3, m <= 6");
  int n = inst.n, m = inst.m;
  bool with_s = false;
  for (const auto& [ref, a] : cut.terms) with_s |= ref.kind == VarKind::S;

  // any stock level beyond the worst demand never helps tightness checks,
  // but keeps every face LP bounded
  double sub = 10.0;
  for (int j = 0; j < m; ++j) sub = std::max(sub, 2.0 * cumdem(inst, j, n) + 10.0);

  std::vector<double> M(n);
  for (int i = 0; i < n; ++i) M[i] = bigM(inst, i);

  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uf(-1.0, 1.0);
  std::vector<std::vector<double>> points;
  int dim = 2 * n + m + (with_s ? n * m : 0);

  std::vector<int> x(n), z(m);
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    for (int i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
    for_each_z(m, inst.k(), [&](const std::vector<int>& zpat) {
      z = zpat;
      // constant part of the cut at this pattern
      double cons = 0.0;
      bool cont = false;  // does the cut touch y or s at all
      for (const auto& [ref, a] : cut.terms) {
        if (ref.kind == VarKind::X) cons += a * x[ref.i];
        else if (ref.kind == VarKind::Z) cons += a * z[ref.j];
        else cont = true;
      }

      LinearProgram lp;  // y columns then (optionally) s columns
      for (int i = 0; i < n; ++i) lp.add_column(0.0, x[i] ? M[i] : 0.0, 0.0);
      if (with_s)
        for (int j = 0; j < m; ++j)
          for (int t = 0; t < n; ++t) lp.add_column(0.0, sub, 0.0);
      auto scol = [&](int j, int t) { return n + j * n + t; };
      for (int j = 0; j < m; ++j) {
        if (z[j]) continue;
        for (int t = 0; t < n; ++t) {
          Row row;
          for (int i = 0; i <= t; ++i) row.coef.push_back({i, 1.0});
          row.sense = Sense::GE;
          row.rhs = cumdem(inst, j, t + 1);
          lp.rows.push_back(row);
        }
      }
      if (with_s)
        for (int j = 0; j < m; ++j)
          for (int t = 0; t < n; ++t) {
            Row row;
            row.coef.push_back({scol(j, t), 1.0});
            for (int i = 0; i <= t; ++i) row.coef.push_back({i, -1.0});
            row.sense = Sense::GE;
            row.rhs = -cumdem(inst, j, t + 1);
            lp.rows.push_back(row);
          }
      if (cont) {
        Row face;
        for (const auto& [ref, a] : cut.terms) {
          if (ref.kind == VarKind::Y) face.coef.push_back({ref.i, a});
          if (ref.kind == VarKind::S) face.coef.push_back({scol(ref.j, ref.i), a});
        }
        face.sense = Sense::EQ;
        face.rhs = cut.rhs - cons;
        lp.rows.push_back(face);
      } else if (std::abs(cons - cut.rhs) > 1e-9) {
        return;  // pattern sits strictly off the face
      }

      for (int trial = 0; trial < sample_budget; ++trial) {
        for (std::size_t c = 0; c < lp.cost.size(); ++c) lp.cost[c] = uf(rng);
        SimplexSolver s2(lp);
        LpSolution sol = s2.solve();
        if (sol.status != LpStatus::Optimal) {
          if (trial == 0) return;  // face empty for this pattern
          continue;
        }
        std::vector<double> pt;
        pt.reserve(dim);
        for (int i = 0; i < n; ++i) pt.push_back(x[i]);
        for (int i = 0; i < n; ++i) pt.push_back(sol.primal[i]);
        for (int j = 0; j < m; ++j) pt.push_back(z[j]);
        if (with_s)
          for (int j = 0; j < m; ++j)
            for (int t = 0; t < n; ++t) pt.push_back(sol.primal[scol(j, t)]);
        points.push_back(std::move(pt));
      }
    });
  }
  return rank_plus_one(points);
}

}  // namespace cclot::oracle
