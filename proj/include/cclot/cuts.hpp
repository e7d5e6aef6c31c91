#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cclot/instance.hpp"
#include "cclot/model.hpp"

namespace cclot::cuts {

enum class CutFamily { LS_BIGM, MIXING, NEW, STOCK, BENDERS_OPT };

const char* family_name(CutFamily f);

// One valid inequality, always of sense >=. Carries its provenance so
// experiment logs can be audited. Periods and scenarios are 0-based in
// memory and printed 1-based by cut_log_line.
struct Cut {
  std::vector<std::pair<VarRef, double>> terms;
  double rhs = 0.0;
  CutFamily family = CutFamily::MIXING;
  int ell = -1;
  int scenario = -1;
  std::vector<int> S;
  std::vector<std::pair<int, std::vector<int>>> Tsets;  // (period, scenarios)
  double violation = 0.0;  // at the point it was separated from, if any
};

// Subset of T*_ell listed by descending cumulative demand (rank order of
// sigma_desc). The closing scenario sigma_{ell(k+1)} is implicit. T may be
// empty, in which case the implied head is the closing scenario itself.
struct MixingSet {
  int ell = 0;
  std::vector<int> T;
};

// Blueprint of a hybrid cut at period ell: periods 0..ell are split into
// S (keeps its y) and Sbar (replaced by an x term); period 0 must be in S.
// Every i in Sbar carries a mixing-style subset at period i-1 (empty means
// no demand offset, giving x_i the full head-demand coefficient), and Tell
// is the anchored subset at ell whose head must be sigma_{ell(1)} (Tell may
// only be empty when k = 0, or for the dominance-comparison cuts where the
// closing scenario stands in as head).
struct NewCutSpec {
  int ell = 0;
  std::vector<int> S;
  std::vector<std::pair<int, std::vector<int>>> Tprev;  // keyed by period i-1
  std::vector<int> Tell;
};

// ---- constructors ---------------------------------------------------------

Cut ls_bigM_cut(const DemandStats& st, int j, int ell,
                const std::vector<int>& S);
Cut mixing_cut(const DemandStats& st, const MixingSet& ms);
Cut new_cut(const DemandStats& st, const NewCutSpec& spec);
Cut stock_cut(const DemandStats& st, int ell, int j, const MixingSet& tell);

// ---- separation -----------------------------------------------------------

inline double violation_tol(double rhs) {
  return 1e-6 * std::max(1.0, std::fabs(rhs));
}

struct SepResult {
  double value = 0.0;
  std::vector<int> subset;  // rank order, subset of T*_i
};

// Minimum over subsets T of T*_i of -D_{t(1)i} * xnext + sum of chain
// coefficients times zhat; the empty set scores 0. Exact.
SepResult separate_mixing_free(const DemandStats& st, int i,
                               const std::vector<double>& zhat, double xnext);

// Same minimum with sigma_{i(1)} forced into T and no x term. With k = 0
// the subset is empty (the base inequality plays the anchored role).
SepResult separate_mixing_anchored(const DemandStats& st, int i,
                                   const std::vector<double>& zhat);

// Most violated mixing cut per period (considering the empty set's base
// inequality as well); only cuts violated beyond tolerance are returned.
std::vector<Cut> separate_mixing(const DemandStats& st,
                                 const std::vector<double>& yhat,
                                 const std::vector<double>& zhat);

// Hybrid-cut heuristic: one candidate per period ell >= 1 via the S-test,
// returned when violated. Exact under the disjointness condition tested in
// the suite.
std::vector<Cut> separate_new(const DemandStats& st,
                              const std::vector<double>& xhat,
                              const std::vector<double>& yhat,
                              const std::vector<double>& zhat);

// Stock cuts on the DEP: for each ell >= 1 pairs the scenario with the
// largest cumulative demand at ell-1 with the anchored subset at ell.
// shat is scenario-major (m rows of n inventory values). Exact per (ell,j).
std::vector<Cut> separate_stock(const DemandStats& st,
                                const std::vector<std::vector<double>>& shat,
                                const std::vector<double>& xhat,
                                const std::vector<double>& zhat);

// LHS of a cut at a candidate point; s may be empty when no STOCK terms.
double cut_lhs(const Cut& cut, const std::vector<double>& x,
               const std::vector<double>& y, const std::vector<double>& z,
               const std::vector<std::vector<double>>& s = {});

// `family,ell,scenario,S,Tsets,violation,rhs`; periods/scenarios 1-based,
// S pipe-separated, Tsets like `1:1|5;2:3|4`.
extern const char* kCutLogHeader;
std::string cut_log_line(const Cut& cut);

// Deduplicating container; insert returns false when an identical cut
// (same term multiset and rhs within 1e-9) is already present.
class CutPool {
 public:
  bool insert(const Cut& cut);
  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }

 private:
  std::vector<Cut> cuts_;
  std::unordered_set<std::string> keys_;
};

}  // namespace cclot::cuts
