#include "cclot/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "cclot/lp.hpp"
#include "json.hpp"

namespace cclot {

namespace {

using cuts::Cut;
using cuts::CutPool;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Fixing {
  int col;
  double val;
};

struct Node {
  double bound;
  std::vector<Fixing> fixings;
};

struct NodeOrder {  // best bound first
  bool operator()(const Node& a, const Node& b) const {
    return a.bound > b.bound;
  }
};

lp::Row to_row(const MipModel& model, const Cut& cut) {
  lp::Row row;
  row.sense = lp::Sense::GE;
  row.rhs = cut.rhs;
  for (const auto& [ref, a] : cut.terms)
    row.coef.push_back({model.col(ref.kind, ref.i, ref.j), a});
  return row;
}

}  // namespace

void CutConfig::validate() const {
  if (mixing_cap < 0)
    throw std::invalid_argument("cut config: mixing cap must be nonnegative");
  if (max_rounds < 0)
    throw std::invalid_argument("cut config: round cap must be nonnegative");
}

const char* status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal:
      return "optimal";
    case SolveStatus::TimeLimit:
      return "time-limit";
    default:
      return "infeasible";
  }
}

SolveReport solve(const MipModel& model, const CutConfig& cfg,
                  double time_limit) {
  cfg.validate();
  const Clock::time_point t0 = Clock::now();
  const Instance& inst = model.inst;
  const DemandStats& st = model.stats;
  const int n = inst.n, m = inst.m;

  SolveReport rep;
  rep.cuts = {{"LS_BIGM", 0}, {"MIXING", 0}, {"NEW", 0}, {"STOCK", 0}};

  lp::SimplexSolver solver(model.prog);
  CutPool pool;
  const bool stock_ok = cfg.stock && model.tag == Formulation::DEP;

  std::vector<int> bincols;  // model column order puts x before z
  for (int c = 0; c < static_cast<int>(model.binary.size()); ++c)
    if (model.binary[c]) bincols.push_back(c);

  auto out_of_time = [&] { return seconds_since(t0) >= time_limit; };

  auto reset_and_fix = [&](const std::vector<Fixing>& fixings) {
    for (int c : bincols)
      solver.set_bounds(c, model.prog.lower[c], model.prog.upper[c]);
    for (const Fixing& f : fixings) solver.set_bounds(f.col, f.val, f.val);
  };

  // Cutting loop at the current node: solve, separate the enabled families
  // in order, repeat. Cuts are valid for the whole tree, so they stay in
  // the shared LP and stored node bounds remain correct.
  auto cut_and_solve = [&](bool at_root) {
    lp::LpSolution sol = solver.solve();
    int stall = 0;
    double last = sol.objective;
    for (int round = 0; round < cfg.max_rounds; ++round) {
      if (sol.status != lp::LpStatus::Optimal || out_of_time()) break;

      std::vector<double> xhat(n), yhat(n), zhat(m);
      for (int i = 0; i < n; ++i) xhat[i] = sol.primal[model.x(i)];
      for (int i = 0; i < n; ++i) yhat[i] = sol.primal[model.y(i)];
      for (int j = 0; j < m; ++j) zhat[j] = sol.primal[model.z(j)];

      std::vector<Cut> cand;
      if (cfg.mixing) {
        int room = cfg.mixing_cap - rep.cuts["MIXING"];
        std::vector<Cut> mix = cuts::separate_mixing(st, yhat, zhat);
        for (Cut& c : mix) {
          if (room <= 0) break;
          cand.push_back(std::move(c));
          --room;
        }
      }
      if (cfg.new_cuts && (at_root || !cfg.new_root_only)) {
        for (Cut& c : cuts::separate_new(st, xhat, yhat, zhat))
          cand.push_back(std::move(c));
      }
      if (stock_ok) {
        std::vector<std::vector<double>> shat(m, std::vector<double>(n));
        for (int j = 0; j < m; ++j)
          for (int i = 0; i < n; ++i) shat[j][i] = sol.primal[model.s(j, i)];
        for (Cut& c : cuts::separate_stock(st, shat, xhat, zhat))
          cand.push_back(std::move(c));
      }

      int added = 0;
      for (Cut& c : cand) {
        if (!pool.insert(c)) continue;
        ++rep.cuts[family_name(c.family)];
        sol = solver.add_row_and_resolve(to_row(model, c));
        ++added;
      }
      if (added == 0) break;
      if (at_root && sol.status == lp::LpStatus::Optimal)
        rep.root_bounds.push_back(sol.objective);

      if (sol.objective - last <= 1e-7 * (1.0 + std::fabs(last))) {
        if (++stall >= 3) break;
      } else {
        stall = 0;
      }
      last = sol.objective;
    }
    return sol;
  };

  double best = std::numeric_limits<double>::infinity();

  auto most_fractional = [&](const lp::LpSolution& sol) {
    int pick = -1;
    double score = 1e-6;  // integrality tolerance
    for (int c : bincols) {
      double v = sol.primal[c];
      double dist = std::fabs(v - std::round(v));
      if (dist > score) {  // strict: ties keep the earliest column
        score = dist;
        pick = c;
      }
    }
    return pick;
  };

  // Round the binaries, pin them, and re-solve so the incumbent is exact
  // for that pattern; accept only candidates the feasibility check passes.
  auto try_incumbent = [&](const lp::LpSolution& at) {
    for (int c : bincols) {
      double v = std::round(at.primal[c]);
      solver.set_bounds(c, v, v);
    }
    lp::LpSolution sol = solver.solve();
    if (sol.status != lp::LpStatus::Optimal) return;
    std::vector<double> x(n), y(n), z(m);
    for (int i = 0; i < n; ++i) x[i] = sol.primal[model.x(i)];
    for (int i = 0; i < n; ++i) y[i] = sol.primal[model.y(i)];
    for (int j = 0; j < m; ++j) z[j] = sol.primal[model.z(j)];
    if (!chance_feasible(inst, x, y, z)) return;
    if (sol.objective >= best) return;
    best = sol.objective;
    rep.has_incumbent = true;
    rep.objective = best;
    rep.x = std::move(x);
    rep.y = std::move(y);
    rep.z = std::move(z);
    rep.tail.assign(sol.primal.begin() + 2 * n + m, sol.primal.end());
  };

  auto prune_tol = [&] { return 1e-7 * (1.0 + std::fabs(best)); };

  // root node
  reset_and_fix({});
  lp::LpSolution root = cut_and_solve(true);
  if (root.status == lp::LpStatus::Unbounded)
    throw std::runtime_error("solver: relaxation unbounded below");
  if (root.status == lp::LpStatus::Infeasible) {
    rep.status = SolveStatus::Infeasible;
    rep.time_sec = seconds_since(t0);
    return rep;
  }
  rep.root_lp = root.objective;
  double dual_bound = root.objective;

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int c0 = most_fractional(root);
  if (c0 < 0) {
    try_incumbent(root);
  } else {
    for (double v : {0.0, 1.0})
      open.push({root.objective, {{c0, v}}});
  }

  bool timed_out = false;
  while (!open.empty()) {
    if (out_of_time()) {
      timed_out = true;
      dual_bound = std::min(open.top().bound, best);
      break;
    }
    Node nd = open.top();
    open.pop();
    dual_bound = std::max(dual_bound, std::min(nd.bound, best));
    if (nd.bound >= best - prune_tol()) break;  // best-bound: all pruned

    reset_and_fix(nd.fixings);
    lp::LpSolution sol = cut_and_solve(false);
    ++rep.nodes;
    if (sol.status != lp::LpStatus::Optimal) continue;
    if (sol.objective >= best - prune_tol()) continue;
    int c = most_fractional(sol);
    if (c < 0) {
      try_incumbent(sol);
      continue;
    }
    for (double v : {0.0, 1.0}) {
      Node child{sol.objective, nd.fixings};
      child.fixings.push_back({c, v});
      open.push(std::move(child));
    }
  }

  if (timed_out) {
    rep.status = SolveStatus::TimeLimit;
    rep.bound = dual_bound;
  } else if (rep.has_incumbent) {
    rep.status = SolveStatus::Optimal;
    rep.bound = best;
  } else {
    rep.status = SolveStatus::Infeasible;
  }
  rep.root_gap_pct = root_gap(rep);
  rep.time_sec = seconds_since(t0);
  return rep;
}

double root_gap(const SolveReport& rep) {
  if (!rep.has_incumbent || std::fabs(rep.objective) < 1e-12) return 0.0;
  return 100.0 * (rep.objective - rep.root_lp) / rep.objective;
}

std::string report_json(const SolveReport& rep) {
  nlohmann::ordered_json j;
  j["status"] = status_name(rep.status);
  j["objective"] =
      rep.has_incumbent ? nlohmann::json(rep.objective) : nlohmann::json();
  j["bound"] = rep.status == SolveStatus::Infeasible ? nlohmann::json()
                                                     : nlohmann::json(rep.bound);
  j["nodes"] = rep.nodes;
  j["root_lp"] = rep.root_lp;
  j["root_gap_pct"] = rep.root_gap_pct;
  nlohmann::ordered_json counts;
  for (const auto& [name, cnt] : rep.cuts) counts[name] = cnt;
  j["cuts"] = counts;
  j["time_sec"] = rep.time_sec;
  return j.dump();
}

}  // namespace cclot
