#pragma once

#include <map>
#include <string>
#include <vector>

#include "cclot/cuts.hpp"
#include "cclot/model.hpp"

namespace cclot {

// Which cut families the root loop may separate, and how hard it tries.
// LS_BIGM rows have no separation routine (they are dominated by the other
// families); the flag exists so configurations can be named uniformly.
struct CutConfig {
  bool ls_bigM = false;
  bool mixing = true;
  bool new_cuts = true;
  bool stock = true;
  int mixing_cap = 150;       // total MIXING cuts per solve
  bool new_root_only = true;  // NEW cuts only at the root node
  int max_rounds = 50;        // cut rounds per node

  void validate() const;  // cap and round counts must be nonnegative
};

enum class SolveStatus { Optimal, TimeLimit, Infeasible };

const char* status_name(SolveStatus s);

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  double objective = 0.0;  // best incumbent (minimization)
  bool has_incumbent = false;
  std::vector<double> x, y, z;
  std::vector<double> tail;  // s (scenario major) on DEP, theta otherwise
  double bound = 0.0;        // global dual bound
  long nodes = 0;            // branch nodes solved, root excluded
  std::map<std::string, int> cuts;  // family name -> count added
  double root_lp = 0.0;             // LP value after the root cut loop
  double root_gap_pct = 0.0;
  double time_sec = 0.0;
  std::vector<double> root_bounds;  // LP value after each root cut round
};

// Cutting planes at every node (NEW at the root only by default), then
// best-bound branch-and-bound on the fractional binaries. Ties in the
// branching score break toward x over z, then the lowest index. The model
// is not modified; cuts live in the solver's private copy.
SolveReport solve(const MipModel& model, const CutConfig& cfg = CutConfig{},
                  double time_limit = 600.0);

// 100 * (best - rootLP) / best, with a zero guard.
double root_gap(const SolveReport& rep);

// {"status","objective","bound","nodes","root_lp","root_gap_pct",
//  "cuts":{family:count},"time_sec"}
std::string report_json(const SolveReport& rep);

}  // namespace cclot
