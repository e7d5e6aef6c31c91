#pragma once

#include <string>
#include <vector>

#include "cclot/cuts.hpp"
#include "cclot/instance.hpp"
#include "cclot/solver.hpp"

namespace cclot {

// Dual of one scenario's inventory subproblem. The closed form assigns
// gamma_i = h_i exactly when the running production surplus is positive,
// which matches the primal holding cost (simple recourse, strong duality).
struct DualSolution {
  int j = 0;
  std::vector<double> gamma;  // length n, entries in {0, h_i}
  double value = 0.0;
};

DualSolution subproblem_dual(const Instance& inst, int j,
                             const std::vector<double>& yhat);

// theta_j - sum_i gamma_i * (sum_{t<=i} y_t) >= -sum_i gamma_i * D_{ji}.
// An all-zero gamma gives the trivial row theta_j >= 0; callers normally
// suppress it.
cuts::Cut optimality_cut(const Instance& inst, const DualSolution& dual);

// Iterative master re-solve: solve the master MIP, price every scenario,
// add the violated optimality cuts, repeat until no violation. When trace
// is non-null it receives `iter,master_obj,violated_scenarios,cuts_added`
// CSV lines. Gamma patterns are memoized so no cut enters twice.
SolveReport solve_benders(const Instance& inst,
                          const CutConfig& cfg = CutConfig{},
                          double time_limit = 600.0,
                          std::string* trace = nullptr);

}  // namespace cclot
