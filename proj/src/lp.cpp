#include "cclot/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

namespace cclot::lp {

int LinearProgram::add_column(double lo, double up, double obj) {
  lower.push_back(lo);
  upper.push_back(up);
  cost.push_back(obj);
  return num_cols() - 1;
}

int LinearProgram::add_row(std::vector<std::pair<int, double>> coef,
                           Sense sense, double rhs) {
  Row r;
  r.sense = sense;
  r.rhs = rhs;
  // merge duplicate columns so downstream sparse math sees each once
  std::sort(coef.begin(), coef.end());
  for (auto& [col, a] : coef) {
    if (!r.coef.empty() && r.coef.back().first == col)
      r.coef.back().second += a;
    else
      r.coef.emplace_back(col, a);
  }
  rows.push_back(std::move(r));
  return num_rows() - 1;
}

namespace {

enum class VS : unsigned char { Basic, AtLower, AtUpper, FreeNB };

double scaled_tol(double base, double ref) {
  return base * (1.0 + std::fabs(ref));
}

}  // namespace

struct SimplexSolver::Impl {
  LinearProgram lp;
  int nstruct = 0;

  // variable data: structural columns first, then one logical per row
  std::vector<double> vlb, vub, vcost;
  std::vector<VS> vstat;
  std::vector<double> nbval;  // value held while nonbasic
  std::vector<std::vector<std::pair<int, double>>> cols;  // structural columns

  // active working set
  std::vector<int> act;      // row ids in activation order
  std::vector<int> apos;     // row -> position in act, -1 if inactive
  std::vector<int> bvar;     // row -> basic variable (valid while active)
  std::vector<double> xval;  // row -> value of its basic variable
  std::vector<double> delta; // unit rows: coefficient of bvar in its row
  std::vector<int> brow;     // var -> row it is basic in, -1 otherwise

  // core block: rows whose basic variable spans several rows
  std::vector<int> core_rows;
  std::vector<int> cpos;   // row -> core position, -1 otherwise
  std::vector<int> cbpos;  // var -> its core position when core-basic
  std::vector<std::vector<double>> Cinv;

  // scratch
  std::vector<double> y, w, acc;
  std::vector<int> wtouch, acc_touch;
  std::vector<char> acc_in;

  bool values_dirty = true;
  int pivots_since_refactor = 0;
  int resets = 0;
  long total_pivots = 0;
  double dual_obj = 0.0;
  double cost_scale = 1.0;

  static constexpr int kRefactorEvery = 256;
  static constexpr long kPivotCap = 2000000;
  static constexpr int kBatchCap = 1000;

  explicit Impl(const LinearProgram& prog) : lp(prog) {
    nstruct = lp.num_cols();
    for (int v = 0; v < nstruct; ++v) {
      if (!(lp.lower[v] <= lp.upper[v]))
        throw std::invalid_argument("lp: column bounds crossed");
      if (!std::isfinite(lp.cost[v]))
        throw std::invalid_argument("lp: objective coefficient not finite");
    }
    vlb = lp.lower;
    vub = lp.upper;
    vcost = lp.cost;
    cols.resize(nstruct);
    vstat.assign(nstruct, VS::AtLower);
    nbval.assign(nstruct, 0.0);
    brow.assign(nstruct, -1);
    cbpos.assign(nstruct, -1);
    for (int v = 0; v < nstruct; ++v) reset_nonbasic(v);
    int nrows = lp.num_rows();
    for (int r = 0; r < nrows; ++r) register_row(r);
    refresh_cost_scale();
  }

  void refresh_cost_scale() {
    cost_scale = 1.0;
    for (int v = 0; v < nstruct; ++v)
      cost_scale = std::max(cost_scale, std::fabs(vcost[v]));
  }

  void reset_nonbasic(int v) {
    if (std::isfinite(vlb[v])) {
      vstat[v] = VS::AtLower;
      nbval[v] = vlb[v];
    } else if (std::isfinite(vub[v])) {
      vstat[v] = VS::AtUpper;
      nbval[v] = vub[v];
    } else {
      vstat[v] = VS::FreeNB;
      nbval[v] = 0.0;
    }
  }

  int logical(int r) const { return nstruct + r; }

  // Registers bookkeeping for row r (bounds of its logical, column lists).
  // New rows start inactive; the solve loop activates them on violation.
  void register_row(int r) {
    const Row& row = lp.rows[r];
    if (!std::isfinite(row.rhs))
      throw std::invalid_argument("lp: row rhs not finite");
    for (auto [v, a] : row.coef) {
      if (v < 0 || v >= nstruct)
        throw std::invalid_argument("lp: row references unknown column");
      if (!std::isfinite(a))
        throw std::invalid_argument("lp: row coefficient not finite");
    }
    double lo = 0.0, hi = 0.0;
    switch (row.sense) {
      case Sense::GE: lo = -kInf; hi = 0.0; break;
      case Sense::LE: lo = 0.0; hi = kInf; break;
      case Sense::EQ: lo = 0.0; hi = 0.0; break;
    }
    vlb.push_back(lo);
    vub.push_back(hi);
    vcost.push_back(0.0);
    vstat.push_back(VS::AtLower);
    nbval.push_back(0.0);
    cbpos.push_back(-1);
    brow.push_back(-1);
    apos.push_back(-1);
    bvar.push_back(-1);
    xval.push_back(0.0);
    delta.push_back(1.0);
    cpos.push_back(-1);
    // a variable this row touches may stop being a column singleton; if it
    // is currently basic in a unit row, that row must join the core first
    for (auto [v, a] : row.coef) {
      if (static_cast<int>(cols[v].size()) == 1) {
        int r0 = cols[v][0].first;
        if (apos[r0] >= 0 && bvar[r0] == v && cpos[r0] < 0) promote_to_core(r0);
      }
      cols[v].emplace_back(r, a);
    }
  }

  bool is_singleton(int v) const {
    if (v >= nstruct) return true;  // logicals live in one row by construction
    return cols[v].size() == 1;
  }

  int singleton_row(int v) const {
    return v >= nstruct ? v - nstruct : cols[v][0].first;
  }

  double coef_in_row(int v, int r) const {
    if (v >= nstruct) return v - nstruct == r ? 1.0 : 0.0;
    for (auto [rr, a] : cols[v])
      if (rr == r) return a;
    return 0.0;
  }

  bool row_is_unit(int r) const {
    int v = bvar[r];
    return is_singleton(v) && singleton_row(v) == r;
  }

  // Iterates the coefficients of row r including the implicit logical.
  template <class F>
  void for_row(int r, F&& fn) const {
    for (auto [v, a] : lp.rows[r].coef) fn(v, a);
    fn(nstruct + r, 1.0);
  }

  // ---- core block maintenance --------------------------------------------

  void core_clear() {
    for (int r : core_rows) {
      if (bvar[r] >= 0) cbpos[bvar[r]] = -1;
      cpos[r] = -1;
    }
    core_rows.clear();
    Cinv.clear();
  }

  // Full rebuild of the core inverse from the current basis. Returns false
  // if the core matrix is numerically singular.
  bool refactor() {
    core_clear();
    // Re-pair basics with their home rows first. The basis is a set; which
    // row hosts which basic is bookkeeping, and pivoting tends to strand
    // singletons in foreign rows, which bloats the core. Hosting every
    // singleton on its own row keeps the core minimal, and values travel
    // with their variables so nothing needs recomputing.
    {
      std::vector<std::pair<int, double>> sing, multi;
      for (int r : act) {
        int v = bvar[r];
        (is_singleton(v) ? sing : multi).push_back({v, xval[r]});
        bvar[r] = -1;
      }
      for (auto [v, x] : sing) {
        int home = singleton_row(v);
        if (apos[home] >= 0 && bvar[home] == -1 &&
            std::fabs(coef_in_row(v, home)) > 1e-9) {
          bvar[home] = v;
          xval[home] = x;
          brow[v] = home;
        } else {
          multi.push_back({v, x});
        }
      }
      std::size_t next = 0;
      for (int r : act) {
        if (bvar[r] != -1) continue;
        bvar[r] = multi[next].first;
        xval[r] = multi[next].second;
        brow[multi[next].first] = r;
        ++next;
      }
    }
    std::vector<int> rc;
    for (int r : act) {
      if (row_is_unit(r))
        delta[r] = coef_in_row(bvar[r], r);
      else
        rc.push_back(r);
    }
    int nc = static_cast<int>(rc.size());
    for (int q = 0; q < nc; ++q) {
      cpos[rc[q]] = q;
      cbpos[bvar[rc[q]]] = q;
    }
    std::vector<std::vector<double>> A(nc, std::vector<double>(2 * nc, 0.0));
    for (int p = 0; p < nc; ++p) {
      for_row(rc[p], [&](int v, double a) {
        int q = cbpos[v];
        if (q >= 0 && bvar[rc[q]] == v) A[p][q] += a;
      });
      A[p][nc + p] = 1.0;
    }
    for (int col = 0; col < nc; ++col) {
      int piv = col;
      double best = std::fabs(A[col][col]);
      for (int i = col + 1; i < nc; ++i)
        if (std::fabs(A[i][col]) > best) {
          best = std::fabs(A[i][col]);
          piv = i;
        }
      if (best < 1e-11) {
        for (int q = 0; q < nc; ++q) {
          cbpos[bvar[rc[q]]] = -1;
          cpos[rc[q]] = -1;
        }
        return false;
      }
      std::swap(A[col], A[piv]);
      double inv = 1.0 / A[col][col];
      for (double& x : A[col]) x *= inv;
      for (int i = 0; i < nc; ++i) {
        if (i == col) continue;
        double f = A[i][col];
        if (f == 0.0) continue;
        for (int j = col; j < 2 * nc; ++j) A[i][j] -= f * A[col][j];
      }
    }
    core_rows = rc;
    Cinv.assign(nc, std::vector<double>(nc));
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j) Cinv[i][j] = A[i][nc + j];
    pivots_since_refactor = 0;
    return true;
  }

  // Cinv update when the core row at position p swaps its basic column for
  // variable e; u = Cinv * (column of e restricted to core rows).
  bool core_replace(int p, const std::vector<double>& u) {
    int nc = static_cast<int>(core_rows.size());
    if (std::fabs(u[p]) < 1e-11) return false;
    double inv = 1.0 / u[p];
    std::vector<double>& rp = Cinv[p];
    for (double& x : rp) x *= inv;
    for (int i = 0; i < nc; ++i) {
      if (i == p) continue;
      double f = u[i];
      if (f == 0.0) continue;
      std::vector<double>& ri = Cinv[i];
      for (int j = 0; j < nc; ++j) ri[j] -= f * rp[j];
    }
    return true;
  }

  std::vector<double> core_col(int e) const {
    int nc = static_cast<int>(core_rows.size());
    std::vector<double> b(nc, 0.0);
    if (e >= nstruct) {
      int rr = e - nstruct;
      if (cpos[rr] >= 0) b[cpos[rr]] = 1.0;
    } else {
      for (auto [rr, a] : cols[e])
        if (cpos[rr] >= 0) b[cpos[rr]] += a;
    }
    return b;
  }

  // Grows the core by (row r, variable e) via a bordered inverse. The
  // caller must have set bvar[r] = e already.
  bool core_grow(int r, int e) {
    int nc = static_cast<int>(core_rows.size());
    std::vector<double> b = core_col(e);
    std::vector<double> vrow(nc, 0.0);
    double dlt = 0.0;
    for_row(r, [&](int v, double a) {
      if (v == e) {
        dlt += a;
        return;
      }
      int q = cbpos[v];
      if (q >= 0 && bvar[core_rows[q]] == v) vrow[q] += a;
    });
    std::vector<double> u(nc, 0.0), vC(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      double s = 0.0;
      const std::vector<double>& ri = Cinv[i];
      for (int j = 0; j < nc; ++j) s += ri[j] * b[j];
      u[i] = s;
    }
    for (int j = 0; j < nc; ++j) {
      double s = 0.0;
      for (int i = 0; i < nc; ++i) s += vrow[i] * Cinv[i][j];
      vC[j] = s;
    }
    double s = dlt;
    for (int i = 0; i < nc; ++i) s -= vrow[i] * u[i];
    if (std::fabs(s) < 1e-11) return false;
    for (int i = 0; i < nc; ++i) {
      double f = u[i] / s;
      std::vector<double>& ri = Cinv[i];
      for (int j = 0; j < nc; ++j) ri[j] += f * vC[j];
      ri.push_back(-f);
    }
    std::vector<double> bottom(nc + 1);
    for (int j = 0; j < nc; ++j) bottom[j] = -vC[j] / s;
    bottom[nc] = 1.0 / s;
    Cinv.push_back(std::move(bottom));
    core_rows.push_back(r);
    cpos[r] = nc;
    cbpos[e] = nc;
    return true;
  }

  // Shrinks the core by removing position p (its row leaves the core).
  bool core_shrink(int p) {
    int nc = static_cast<int>(core_rows.size());
    double g = Cinv[p][p];
    if (std::fabs(g) < 1e-11) return false;
    for (int i = 0; i < nc; ++i) {
      if (i == p) continue;
      double f = Cinv[i][p] / g;
      if (f == 0.0) continue;
      std::vector<double>& ri = Cinv[i];
      const std::vector<double>& rp = Cinv[p];
      for (int j = 0; j < nc; ++j) ri[j] -= f * rp[j];
    }
    int last = nc - 1;
    int removed = core_rows[p];
    cpos[removed] = -1;
    if (bvar[removed] >= 0) cbpos[bvar[removed]] = -1;
    if (p != last) {
      core_rows[p] = core_rows[last];
      cpos[core_rows[p]] = p;
      cbpos[bvar[core_rows[p]]] = p;
      Cinv[p] = std::move(Cinv[last]);
      for (int i = 0; i < last; ++i) Cinv[i][p] = Cinv[i][last];
    }
    Cinv.pop_back();
    for (auto& ri : Cinv) ri.pop_back();
    core_rows.pop_back();
    return true;
  }

  void promote_to_core(int r) {
    if (cpos[r] >= 0) return;
    if (!core_grow(r, bvar[r])) {
      if (!refactor()) repair_basis();
    }
  }

  // ---- values -------------------------------------------------------------

  double var_value(int v) const {
    int r = brow[v];
    return (r >= 0 && bvar[r] == v) ? xval[r] : nbval[v];
  }

  void recompute_values() {
    int nc = static_cast<int>(core_rows.size());
    std::vector<double> rv(lp.num_rows(), 0.0);
    for (int r : act) {
      double s = lp.rows[r].rhs;
      for_row(r, [&](int v, double a) {
        if (vstat[v] != VS::Basic) s -= a * nbval[v];
      });
      rv[r] = s;
    }
    std::vector<double> rc(nc), wc(nc, 0.0);
    for (int q = 0; q < nc; ++q) rc[q] = rv[core_rows[q]];
    for (int i = 0; i < nc; ++i) {
      double s = 0.0;
      const std::vector<double>& ri = Cinv[i];
      for (int j = 0; j < nc; ++j) s += ri[j] * rc[j];
      wc[i] = s;
    }
    for (int q = 0; q < nc; ++q) xval[core_rows[q]] = wc[q];
    for (int r : act) {
      if (cpos[r] >= 0) continue;
      double s = rv[r];
      for_row(r, [&](int v, double a) {
        int q = cbpos[v];
        if (q >= 0 && bvar[core_rows[q]] == v) s -= a * xval[core_rows[q]];
      });
      xval[r] = s / delta[r];
    }
    values_dirty = false;
  }

  // ---- FTRAN / BTRAN ------------------------------------------------------

  void acc_add(int r, double v) {
    if (!acc_in[r]) {
      acc_in[r] = 1;
      acc[r] = 0.0;
      acc_touch.push_back(r);
    }
    acc[r] += v;
  }

  // w = B^-1 * (column of variable e); nonzero rows listed in wtouch.
  void ftran(int e) {
    for (int r : wtouch) w[r] = 0.0;
    wtouch.clear();
    int nc = static_cast<int>(core_rows.size());
    std::vector<double> ac = core_col(e);
    std::vector<double> wc(nc, 0.0);
    for (int i = 0; i < nc; ++i) {
      double s = 0.0;
      const std::vector<double>& ri = Cinv[i];
      for (int j = 0; j < nc; ++j) s += ri[j] * ac[j];
      wc[i] = s;
    }
    // unit rows: w_r = (a_r - sum over core basics in row r) / delta_r,
    // gathered by scattering the core solution through basic columns
    for (int q = 0; q < nc; ++q) {
      double f = wc[q];
      if (std::fabs(f) < 1e-14) continue;
      int vb = bvar[core_rows[q]];
      if (vb >= nstruct) {
        int rr = vb - nstruct;
        if (apos[rr] >= 0 && cpos[rr] < 0) acc_add(rr, f);
      } else {
        for (auto [rr, a] : cols[vb])
          if (apos[rr] >= 0 && cpos[rr] < 0) acc_add(rr, a * f);
      }
    }
    if (e >= nstruct) {
      int rr = e - nstruct;
      if (apos[rr] >= 0 && cpos[rr] < 0) acc_add(rr, -1.0);
    } else {
      for (auto [rr, a] : cols[e])
        if (apos[rr] >= 0 && cpos[rr] < 0) acc_add(rr, -a);
    }
    for (int q = 0; q < nc; ++q) {
      if (wc[q] != 0.0) {
        w[core_rows[q]] = wc[q];
        wtouch.push_back(core_rows[q]);
      }
    }
    for (int r : acc_touch) {
      double val = -acc[r] / delta[r];
      acc_in[r] = 0;
      if (std::fabs(val) > 1e-14) {
        w[r] = val;
        wtouch.push_back(r);
      }
    }
    acc_touch.clear();
  }

  // y with y^T B = (objective of basic variables); cb supplies the
  // phase-dependent coefficient of a basic variable.
  template <class CB>
  void btran(CB&& cb) {
    std::fill(y.begin(), y.end(), 0.0);
    int nc = static_cast<int>(core_rows.size());
    std::vector<double> rhs(nc, 0.0);
    for (int q = 0; q < nc; ++q) rhs[q] = cb(bvar[core_rows[q]]);
    for (int r : act) {
      if (cpos[r] >= 0) continue;
      double cu = cb(bvar[r]);
      if (cu == 0.0) continue;
      double yr = cu / delta[r];
      y[r] = yr;
      for_row(r, [&](int v, double a) {
        int q = cbpos[v];
        if (q >= 0 && bvar[core_rows[q]] == v) rhs[q] -= yr * a;
      });
    }
    for (int j = 0; j < nc; ++j) {
      double s = 0.0;
      for (int i = 0; i < nc; ++i) s += rhs[i] * Cinv[i][j];
      y[core_rows[j]] = s;
    }
  }

  double reduced_cost(int v, double cv) const {
    double d = cv;
    if (v >= nstruct) {
      d -= y[v - nstruct];
    } else {
      for (auto [r, a] : cols[v]) d -= y[r] * a;
    }
    return d;
  }

  // ---- recovery -----------------------------------------------------------

  void repair_basis() {
    if (++resets > 3)
      throw LpNumericalError("lp engine: basis repair failed repeatedly");
    for (int r : act) {
      int v = bvar[r];
      if (v != logical(r)) {
        reset_nonbasic(v);
        brow[v] = -1;
      }
      bvar[r] = logical(r);
      vstat[logical(r)] = VS::Basic;
      brow[logical(r)] = r;
      delta[r] = 1.0;
    }
    core_clear();
    if (!refactor()) throw LpNumericalError("lp engine: slack basis singular");
    recompute_values();
  }

  void activate(int r) {
    apos[r] = static_cast<int>(act.size());
    act.push_back(r);
    int lv = logical(r);
    bvar[r] = lv;
    vstat[lv] = VS::Basic;
    brow[lv] = r;
    delta[r] = 1.0;
    double s = lp.rows[r].rhs;
    for (auto [v, a] : lp.rows[r].coef) s -= a * var_value(v);
    xval[r] = s;  // logical absorbs the residual; may start out of bounds
  }

  // ---- main simplex -------------------------------------------------------

  bool basic_infeasible(int r) const {
    int v = bvar[r];
    double x = xval[r];
    return x < vlb[v] - scaled_tol(1e-7, x) || x > vub[v] + scaled_tol(1e-7, x);
  }

  LpStatus run_simplex(int* ray_var, int* ray_dir) {
    long degen_streak = 0;
    while (true) {
      if (total_pivots >= kPivotCap)
        throw LpNumericalError("lp engine: pivot limit exceeded");
      if (pivots_since_refactor >= kRefactorEvery) {
        if (!refactor()) repair_basis();
        recompute_values();
      }
      bool phase1 = false;
      for (int r : act)
        if (basic_infeasible(r)) {
          phase1 = true;
          break;
        }
      auto cb = [&](int v) -> double {
        if (!phase1) return vcost[v];
        int r = brow[v];
        if (r < 0 || bvar[r] != v) return 0.0;
        double x = xval[r];
        if (x < vlb[v] - scaled_tol(1e-7, x)) return -1.0;
        if (x > vub[v] + scaled_tol(1e-7, x)) return 1.0;
        return 0.0;
      };
      btran(cb);

      double dtol = phase1 ? 1e-8 : 1e-8 * cost_scale;
      bool bland = degen_streak >= kBlandTrigger;
      int e = -1, dir = 0;
      double best_score = 0.0;
      int total_vars = nstruct + lp.num_rows();
      for (int v = 0; v < total_vars; ++v) {
        if (vstat[v] == VS::Basic) continue;
        if (v >= nstruct && apos[v - nstruct] < 0) continue;
        if (!(vub[v] - vlb[v] > 0.0)) continue;
        double d = reduced_cost(v, phase1 ? 0.0 : vcost[v]);
        int dv = 0;
        if (vstat[v] == VS::AtLower && d < -dtol) dv = 1;
        else if (vstat[v] == VS::AtUpper && d > dtol) dv = -1;
        else if (vstat[v] == VS::FreeNB && std::fabs(d) > dtol) dv = d < 0 ? 1 : -1;
        if (dv == 0) continue;
        if (bland) {
          e = v;
          dir = dv;
          break;
        }
        if (std::fabs(d) > best_score) {
          best_score = std::fabs(d);
          e = v;
          dir = dv;
        }
      }
      if (e < 0) return phase1 ? LpStatus::Infeasible : LpStatus::Optimal;

      ftran(e);

      double limit;  // how far e may travel on its own; may be +inf
      if (vstat[e] == VS::FreeNB)
        limit = dir > 0 ? vub[e] - nbval[e] : nbval[e] - vlb[e];
      else
        limit = vub[e] - vlb[e];
      double best_t = limit;
      bool have_block = false;
      int block_row = -1;
      double block_bound = 0.0, best_piv = 0.0;
      for (int r : wtouch) {
        double wr = w[r];
        if (std::fabs(wr) < kPivotTol) continue;
        double move = -dir * wr;  // basic variable's rate of change
        int v = bvar[r];
        double x = xval[r];
        double tl = scaled_tol(1e-7, x);
        bool blocked = false;
        double tr = 0.0, bnd = 0.0;
        if (phase1 && x < vlb[v] - tl) {
          if (move > 0) {
            tr = (vlb[v] - x) / move;
            bnd = vlb[v];
            blocked = true;
          }
        } else if (phase1 && x > vub[v] + tl) {
          if (move < 0) {
            tr = (vub[v] - x) / move;
            bnd = vub[v];
            blocked = true;
          }
        } else if (move > 0 && std::isfinite(vub[v])) {
          tr = (vub[v] - x) / move;
          bnd = vub[v];
          blocked = true;
        } else if (move < 0 && std::isfinite(vlb[v])) {
          tr = (vlb[v] - x) / move;
          bnd = vlb[v];
          blocked = true;
        }
        if (!blocked) continue;
        if (tr < 0.0) tr = 0.0;
        if (!have_block || tr < best_t - 1e-10 ||
            (tr < best_t + 1e-10 && std::fabs(wr) > best_piv)) {
          if (!have_block && tr > limit) continue;  // bound flip wins
          best_t = tr;
          block_row = r;
          block_bound = bnd;
          best_piv = std::fabs(wr);
          have_block = true;
        }
      }
      if (have_block && best_t > limit) {
        have_block = false;
        block_row = -1;
        best_t = limit;
      }

      if (!have_block && !std::isfinite(limit)) {
        if (phase1)
          throw LpNumericalError("lp engine: unbounded phase-1 direction");
        *ray_var = e;
        *ray_dir = dir;
        return LpStatus::Unbounded;
      }

      double t = std::max(0.0, best_t);
      for (int r : wtouch) xval[r] += -dir * w[r] * t;
      ++total_pivots;
      if (block_row < 0) {
        vstat[e] = dir > 0 ? VS::AtUpper : VS::AtLower;
        nbval[e] = dir > 0 ? vub[e] : vlb[e];
      } else {
        int l = bvar[block_row];
        double enter_val = nbval[e] + dir * t;
        vstat[l] = (std::isfinite(vub[l]) && block_bound == vub[l] &&
                    vlb[l] != vub[l])
                       ? VS::AtUpper
                       : VS::AtLower;
        nbval[l] = block_bound;
        brow[l] = -1;
        update_structure(block_row, l, e);
        bvar[block_row] = e;
        xval[block_row] = enter_val;
        vstat[e] = VS::Basic;
        brow[e] = block_row;
        ++pivots_since_refactor;
      }
      if (t > 1e-9)
        degen_streak = 0;
      else
        ++degen_streak;
    }
  }

  // Rewires the core/unit classification after basic variable l of row r
  // is replaced by e.
  void update_structure(int r, int l, int e) {
    bool was_core = cpos[r] >= 0;
    bool now_unit = is_singleton(e) && singleton_row(e) == r;
    bool ok = true;
    if (!was_core && now_unit) {
      delta[r] = coef_in_row(e, r);
      if (std::fabs(delta[r]) < 1e-11) ok = false;
    } else if (!was_core && !now_unit) {
      bvar[r] = e;  // core_grow records cbpos for the new basic
      ok = core_grow(r, e);
    } else if (was_core && now_unit) {
      ok = core_shrink(cpos[r]);
      if (ok) {
        delta[r] = coef_in_row(e, r);
        if (std::fabs(delta[r]) < 1e-11) ok = false;
      }
    } else {
      int p = cpos[r];
      std::vector<double> b = core_col(e);
      int nc = static_cast<int>(core_rows.size());
      std::vector<double> u(nc, 0.0);
      for (int i = 0; i < nc; ++i) {
        double s = 0.0;
        const std::vector<double>& ri = Cinv[i];
        for (int j = 0; j < nc; ++j) s += ri[j] * b[j];
        u[i] = s;
      }
      cbpos[l] = -1;
      ok = core_replace(p, u);
      if (ok) cbpos[e] = p;
    }
    if (!ok) {
      bvar[r] = e;
      vstat[e] = VS::Basic;
      if (!refactor()) repair_basis();
      recompute_values();
    }
  }

  // ---- activation loop ----------------------------------------------------

  double row_violation(int r) const {
    const Row& row = lp.rows[r];
    double ax = 0.0;
    for (auto [v, a] : row.coef) ax += a * var_value(v);
    double tl = scaled_tol(1e-7, row.rhs);
    double lack = 0.0;
    switch (row.sense) {
      case Sense::GE: lack = row.rhs - ax; break;
      case Sense::LE: lack = ax - row.rhs; break;
      case Sense::EQ: lack = std::fabs(ax - row.rhs); break;
    }
    return lack > tl ? lack : 0.0;
  }

  double row_ray_slope(int r, const std::vector<double>& ray) const {
    double s = 0.0;
    for (auto [v, a] : lp.rows[r].coef) s += a * ray[v];
    return s;
  }

  LpSolution snapshot_primal(LpStatus st) const {
    LpSolution sol;
    sol.status = st;
    sol.primal.assign(nstruct, 0.0);
    for (int v = 0; v < nstruct; ++v) sol.primal[v] = var_value(v);
    sol.dual.assign(lp.num_rows(), 0.0);
    return sol;
  }

  LpSolution finish_optimal() {
    LpSolution sol = snapshot_primal(LpStatus::Optimal);
    double obj = 0.0;
    for (int v = 0; v < nstruct; ++v) obj += vcost[v] * sol.primal[v];
    sol.objective = obj;
    for (int r : act) sol.dual[r] = y[r];
    double dobj = 0.0;
    for (int r : act) dobj += y[r] * lp.rows[r].rhs;
    for (int v = 0; v < nstruct; ++v) {
      if (vstat[v] == VS::Basic || vstat[v] == VS::FreeNB) continue;
      dobj += reduced_cost(v, vcost[v]) * nbval[v];
    }
    dual_obj = dobj;
    return sol;
  }

  LpSolution do_solve() {
    int total_vars = nstruct + lp.num_rows();
    if (static_cast<int>(brow.size()) < total_vars) brow.resize(total_vars, -1);
    y.assign(lp.num_rows(), 0.0);
    w.assign(lp.num_rows(), 0.0);
    acc.assign(lp.num_rows(), 0.0);
    acc_in.assign(lp.num_rows(), 0);
    wtouch.clear();
    acc_touch.clear();
    if (values_dirty) {
      std::fill(brow.begin(), brow.end(), -1);
      for (int r : act) brow[bvar[r]] = r;
      recompute_values();
    }
    resets = 0;
    while (true) {
      int ray_var = -1, ray_dir = 0;
      LpStatus st = run_simplex(&ray_var, &ray_dir);
      if (st == LpStatus::Infeasible) return snapshot_primal(st);
      if (st == LpStatus::Unbounded) {
        std::vector<double> ray(nstruct, 0.0);
        if (ray_var < nstruct) ray[ray_var] = ray_dir;
        for (int r : wtouch) {
          int v = bvar[r];
          if (v < nstruct) ray[v] = -ray_dir * w[r];
        }
        int added = 0;
        for (int r = 0; r < lp.num_rows() && added < kBatchCap; ++r) {
          if (apos[r] >= 0) continue;
          bool bad = row_violation(r) > 0.0;
          if (!bad) {
            double slope = row_ray_slope(r, ray);
            switch (lp.rows[r].sense) {
              case Sense::GE: bad = slope < -1e-9; break;
              case Sense::LE: bad = slope > 1e-9; break;
              case Sense::EQ: bad = std::fabs(slope) > 1e-9; break;
            }
          }
          if (bad) {
            activate(r);
            ++added;
          }
        }
        if (added == 0) return snapshot_primal(st);
        continue;
      }
      struct Cand {
        double viol;
        int row;
      };
      std::vector<Cand> cands;
      for (int r = 0; r < lp.num_rows(); ++r) {
        if (apos[r] >= 0) continue;
        double viol = row_violation(r);
        if (viol > 0.0) cands.push_back({viol, r});
      }
      if (cands.empty()) return finish_optimal();
      if (static_cast<int>(cands.size()) > kBatchCap) {
        std::nth_element(
            cands.begin(), cands.begin() + kBatchCap, cands.end(),
            [](const Cand& a, const Cand& b) { return a.viol > b.viol; });
        cands.resize(kBatchCap);
      }
      for (const Cand& c : cands) activate(c.row);
    }
  }
};

SimplexSolver::SimplexSolver(const LinearProgram& prog) : impl_(new Impl(prog)) {
  if (!impl_->refactor()) impl_->repair_basis();
}

SimplexSolver::~SimplexSolver() = default;

LpSolution SimplexSolver::solve() { return impl_->do_solve(); }

LpSolution SimplexSolver::add_row_and_resolve(const Row& row) {
  LinearProgram& lp = impl_->lp;
  lp.add_row(row.coef, row.sense, row.rhs);
  impl_->register_row(lp.num_rows() - 1);
  return impl_->do_solve();
}

void SimplexSolver::set_bounds(int col, double lo, double up) {
  Impl& s = *impl_;
  if (col < 0 || col >= s.nstruct)
    throw std::invalid_argument("set_bounds: bad column");
  if (!(lo <= up)) throw std::invalid_argument("set_bounds: bounds crossed");
  s.vlb[col] = lo;
  s.vub[col] = up;
  s.lp.lower[col] = lo;
  s.lp.upper[col] = up;
  if (s.vstat[col] != VS::Basic) {
    if (!std::isfinite(lo) && !std::isfinite(up)) {
      s.vstat[col] = VS::FreeNB;
      s.nbval[col] = 0.0;
    } else if (s.vstat[col] == VS::AtLower && std::isfinite(lo)) {
      s.nbval[col] = lo;
    } else if (s.vstat[col] == VS::AtUpper && std::isfinite(up)) {
      s.nbval[col] = up;
    } else if (s.vstat[col] == VS::FreeNB) {
      // keep value 0 unless it now violates a bound
    }
    if (std::isfinite(lo) && s.nbval[col] < lo) {
      s.nbval[col] = lo;
      s.vstat[col] = VS::AtLower;
    }
    if (std::isfinite(up) && s.nbval[col] > up) {
      s.nbval[col] = up;
      s.vstat[col] = VS::AtUpper;
    }
  }
  s.values_dirty = true;
}

const LinearProgram& SimplexSolver::program() const { return impl_->lp; }

double SimplexSolver::dual_objective() const { return impl_->dual_obj; }

long SimplexSolver::pivots() const { return impl_->total_pivots; }

LpSolution solve_lp(const LinearProgram& prog) {
  SimplexSolver s(prog);
  return s.solve();
}

}  // namespace cclot::lp
