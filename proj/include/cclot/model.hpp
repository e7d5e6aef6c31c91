#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cclot/instance.hpp"
#include "cclot/lp.hpp"

namespace cclot {

enum class VarKind { X, Y, Z, S, ThetaPrime, ThetaScen };

// Reference to a model variable. i is a 0-based period (X, Y, S,
// ThetaPrime), j a 0-based scenario (Z, S, ThetaScen).
struct VarRef {
  VarKind kind = VarKind::X;
  int i = -1;
  int j = -1;
};

enum class Formulation { DEP, COMPACT, BENDERS_MASTER };

// A built model: column table with binary flags, structural rows, and the
// demand statistics every cut routine needs. Models are blueprints; the
// solver clones the program into a private simplex instance. Cut rows may
// be appended after construction with add_row.
//
// Column order is x(0..n-1), y(0..n-1), z(0..m-1), then the formulation's
// own tail: s(j,t) scenario-major for DEP, ThetaPrime(i) for COMPACT,
// ThetaScen(j) for BENDERS_MASTER.
//
// Structural row order:
//   DEP:            cover rows (j major, t minor), cardinality, setup
//                   linking (i), inventory rows (j major, t minor)
//   COMPACT:        cover, cardinality, setup linking, then for each
//                   period i the k+1 aggregated inventory rows q = 0..k
//   BENDERS_MASTER: cover, cardinality, setup linking
struct MipModel {
  Instance inst;
  DemandStats stats;
  Formulation tag = Formulation::DEP;
  lp::LinearProgram prog;
  std::vector<VarRef> columns;
  std::vector<char> binary;
  int structural_rows = 0;

  explicit MipModel(const Instance& instance, Formulation t);

  // Column lookups; throw std::logic_error for kinds the model does not
  // own and std::out_of_range for bad indices.
  int col(VarKind kind, int i, int j) const;
  int x(int i) const { return col(VarKind::X, i, -1); }
  int y(int i) const { return col(VarKind::Y, i, -1); }
  int z(int j) const { return col(VarKind::Z, -1, j); }
  int s(int j, int i) const { return col(VarKind::S, i, j); }
  int theta_prime(int i) const { return col(VarKind::ThetaPrime, i, -1); }
  int theta(int j) const { return col(VarKind::ThetaScen, -1, j); }

  int add_row(const std::vector<std::pair<VarRef, double>>& terms,
              lp::Sense sense, double rhs);
};

MipModel build_dep(const Instance& inst);
MipModel build_compact(const Instance& inst);
MipModel build_benders_master(const Instance& inst);

// True iff the candidate satisfies the chance-constrained feasibility
// conditions: sum(z) <= k + tol, y_i <= M_i x_i + tol, and every scenario
// whose z_j reads as zero is covered in every period up to tol.
bool chance_feasible(const Instance& inst, const std::vector<double>& x,
                     const std::vector<double>& y,
                     const std::vector<double>& z, double tol = 1e-6);

// One row per line, `name: coeffs sense rhs`. Debugging aid only.
std::string dump_model(const MipModel& model);

}  // namespace cclot
