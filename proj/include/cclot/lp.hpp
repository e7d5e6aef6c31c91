#pragma once

#include <limits>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cclot::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances shared by the engine and its callers.
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasTol = 1e-6;
inline constexpr double kOptTol = 1e-6;
inline constexpr int kBlandTrigger = 5000;  // degenerate pivots before Bland

enum class Sense { GE, LE, EQ };

struct Row {
  std::vector<std::pair<int, double>> coef;  // (column, coefficient), sparse
  Sense sense = Sense::GE;
  double rhs = 0.0;
};

// Minimization LP with bounded columns. Rows may carry any sense; the
// solver attaches one logical (slack) variable per row internally.
struct LinearProgram {
  std::vector<double> lower, upper, cost;
  std::vector<Row> rows;

  int add_column(double lo, double up, double obj);
  int add_row(std::vector<std::pair<int, double>> coef, Sense sense, double rhs);
  int num_cols() const { return static_cast<int>(cost.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  std::vector<double> primal;  // structural columns
  std::vector<double> dual;    // one multiplier per row (0 for slack rows)
};

// Raised when anti-cycling and refactorization safeguards are exhausted.
class LpNumericalError : public std::runtime_error {
 public:
  explicit LpNumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

// Revised primal simplex with bounded variables.
//
// The basis inverse is kept dense only on the "core": rows whose basic
// variable appears in more than one row. Rows whose basic variable is a
// column singleton (slacks, per-scenario inventory variables) form a
// diagonal block that is solved by substitution, which keeps pivots cheap
// on models where most rows bind through a singleton. Rows are activated
// lazily: a row enters the working set only once the current iterate
// violates it, so large mostly-slack systems never pay for a full basis.
//
// The object owns a private copy of the program and keeps its basis
// between calls, which makes bound changes and row additions warm.
class SimplexSolver {
 public:
  explicit SimplexSolver(const LinearProgram& prog);
  ~SimplexSolver();
  SimplexSolver(const SimplexSolver&) = delete;
  SimplexSolver& operator=(const SimplexSolver&) = delete;

  LpSolution solve();

  // Appends the row and re-solves from the current basis.
  LpSolution add_row_and_resolve(const Row& row);

  // Changes one column's bounds in place, keeping the basis.
  void set_bounds(int col, double lo, double up);

  const LinearProgram& program() const;

  // Dual objective of the last optimal solve (bound terms included);
  // exposed so callers can audit the duality gap.
  double dual_objective() const;

  long pivots() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

LpSolution solve_lp(const LinearProgram& prog);

}  // namespace cclot::lp
