// Brute-force certifiers. Everything here is deliberately independent of
// the model-building code: rows are rebuilt from the raw demand table so
// that agreement with the fast paths actually means something.
#pragma once

#include <limits>
#include <vector>

#include "cclot/cuts.hpp"
#include "cclot/instance.hpp"

namespace cclot::oracle {

enum class Space { P, Pplus };
enum class SepVariant { Free, Anchored };

struct ValidityVerdict {
  bool valid = true;
  bool unbounded = false;  // LHS - rhs unbounded below on some pattern
  std::vector<int> worst_x, worst_z;
  double worst_slack = std::numeric_limits<double>::infinity();
};

struct BruteOpt {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<int> x, z;
  std::vector<double> y;
  std::vector<std::vector<double>> s;  // scenario major
};

// Exact optimum of the extensive formulation: enumerate every binary
// (x, z) pattern with sum(z) <= k and solve the continuous remainder.
// Refuses instances with more than a million patterns.
BruteOpt brute_force_optimum(const Instance& inst);

// Minimizes LHS(cut) - rhs over the chosen space, pattern by pattern.
// Valid iff the global minimum stays above -1e-6*(1+|rhs|).
ValidityVerdict validate_cut(const Instance& inst, const cuts::Cut& cut,
                             Space space);

// Exact separation subproblem value by enumerating every subset of the
// top-k scenario set at period i (anchored: subsets containing the rank-0
// scenario). Requires k <= 15. xnext is only read by the free variant.
cuts::SepResult brute_force_separation(const DemandStats& st, int i,
                                       const std::vector<double>& zhat,
                                       SepVariant variant, double xnext = 1.0);

// At zero risk the setup/production polytope should become integral once
// every (ell, S) row on the running-max cumulative demand is added.
// Solves `trials` LPs with random nonnegative costs and reports whether
// every x vertex came out 0/1. include_cuts=false gives the bare big-M
// relaxation, useful to show the rows are doing the work.
bool hull_integrality_check(const Instance& inst, int trials,
                            bool include_cuts = true, unsigned seed = 99);

// Counts affinely independent feasible points tight on the cut, sampling
// `sample_budget` random objectives over the face per binary pattern.
// Returning dim+1 of the ambient polytope certifies a facet; less is
// inconclusive. Tiny instances only (n <= 3, m <= 6).
int tight_point_rank(const Instance& inst, const cuts::Cut& cut,
                     int sample_budget, unsigned seed = 7);

}  // namespace cclot::oracle
