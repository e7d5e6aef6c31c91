#include "cclot/benders.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "cclot/model.hpp"

namespace cclot {

namespace {
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}
}  // namespace

DualSolution subproblem_dual(const Instance& inst, int j,
                             const std::vector<double>& yhat) {
  inst.validate();
  if (j < 0 || j >= inst.m)
    throw std::invalid_argument("benders: scenario out of range");
  if (static_cast<int>(yhat.size()) != inst.n)
    throw std::invalid_argument("benders: yhat length");
  DualSolution dual;
  dual.j = j;
  dual.gamma.assign(inst.n, 0.0);
  double partial = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    partial += yhat[i] - inst.d[j][i];
    if (partial > 0.0) {  // ties keep gamma at zero: sparser cuts
      dual.gamma[i] = inst.h[i];
      dual.value += inst.h[i] * partial;
    }
  }
  return dual;
}

cuts::Cut optimality_cut(const Instance& inst, const DualSolution& dual) {
  if (dual.j < 0 || dual.j >= inst.m ||
      static_cast<int>(dual.gamma.size()) != inst.n)
    throw std::invalid_argument("benders: malformed dual");
  cuts::Cut cut;
  cut.family = cuts::CutFamily::BENDERS_OPT;
  cut.scenario = dual.j;
  cut.terms.push_back({{VarKind::ThetaScen, -1, dual.j}, 1.0});
  double rhs = 0.0, cum = 0.0;
  std::vector<double> suffix(inst.n + 1, 0.0);  // sum of gamma_i for i >= t
  for (int i = inst.n - 1; i >= 0; --i)
    suffix[i] = suffix[i + 1] + dual.gamma[i];
  for (int t = 0; t < inst.n; ++t)
    if (suffix[t] != 0.0)
      cut.terms.push_back({{VarKind::Y, t, -1}, -suffix[t]});
  for (int i = 0; i < inst.n; ++i) {
    cum += inst.d[dual.j][i];
    rhs -= dual.gamma[i] * cum;
  }
  cut.rhs = rhs;
  return cut;
}

SolveReport solve_benders(const Instance& inst, const CutConfig& cfg,
                          double time_limit, std::string* trace) {
  inst.validate();
  const Clock::time_point t0 = Clock::now();
  MipModel master = build_benders_master(inst);

  if (trace) *trace = "iter,master_obj,violated_scenarios,cuts_added\n";
  std::vector<std::set<std::vector<char>>> memo(inst.m);
  SolveReport rep;
  long nodes = 0;
  int total_cuts = 0;
  std::map<std::string, int> family_totals;

  for (int iter = 1;; ++iter) {
    double left = time_limit - seconds_since(t0);
    if (left <= 0.0) {
      rep.status = SolveStatus::TimeLimit;
      break;
    }
    rep = solve(master, cfg, left);
    nodes += rep.nodes;
    for (const auto& [name, cnt] : rep.cuts) family_totals[name] += cnt;
    if (rep.status != SolveStatus::Optimal) break;

    int violated = 0, added = 0;
    for (int j = 0; j < inst.m; ++j) {
      DualSolution dual = subproblem_dual(inst, j, rep.y);
      if (dual.value <= rep.tail[j] + 1e-6 * (1.0 + std::fabs(dual.value)))
        continue;
      ++violated;
      std::vector<char> pattern(inst.n);
      for (int i = 0; i < inst.n; ++i) pattern[i] = dual.gamma[i] > 0.0;
      if (!memo[j].insert(std::move(pattern)).second) continue;
      cuts::Cut cut = optimality_cut(inst, dual);
      master.add_row(cut.terms, lp::Sense::GE, cut.rhs);
      ++added;
    }
    total_cuts += added;
    if (trace) {
      char line[96];
      std::snprintf(line, sizeof line, "%d,%.10g,%d,%d\n", iter, rep.objective,
                    violated, added);
      *trace += line;
    }
    if (added == 0) break;  // converged (or only memoized repeats remain)
  }

  rep.nodes = nodes;
  for (const auto& [name, cnt] : family_totals) rep.cuts[name] = cnt;
  rep.cuts["BENDERS_OPT"] = total_cuts;
  rep.root_gap_pct = root_gap(rep);
  rep.time_sec = seconds_since(t0);
  return rep;
}

}  // namespace cclot
