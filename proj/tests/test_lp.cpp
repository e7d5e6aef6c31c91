#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "cclot/lp.hpp"
#include "reference_simplex.hpp"

using namespace cclot;
using refsimplex::reference_solve;

namespace {

lp::LinearProgram random_lp(std::mt19937& rng, int ncols, int nrows,
                            bool allow_free, bool force_feasible) {
  lp::LinearProgram prog;
  std::uniform_int_distribution<int> coefd(-4, 4);
  std::uniform_int_distribution<int> costd(-5, 5);
  std::uniform_int_distribution<int> pct(0, 99);
  std::uniform_int_distribution<int> ubd(2, 6);
  std::vector<double> x0(ncols, 0.0);
  for (int j = 0; j < ncols; ++j) {
    int roll = pct(rng);
    double lo = 0.0, up = lp::kInf;
    if (roll < 50) {
      up = ubd(rng);
    } else if (roll < 70) {
      lo = -ubd(rng);
      up = ubd(rng);
    } else if (roll < 80 && allow_free) {
      lo = -lp::kInf;
    }
    if (force_feasible && !std::isfinite(up)) up = 6 + ubd(rng);
    prog.add_column(lo, up, costd(rng));
    double xl = std::isfinite(lo) ? lo : -3.0;
    double xu = std::isfinite(up) ? up : xl + 4.0;
    std::uniform_int_distribution<int> pickx(static_cast<int>(xl),
                                             static_cast<int>(xu));
    x0[j] = pickx(rng);
  }
  std::uniform_int_distribution<int> nnzd(1, std::min(ncols, 5));
  std::uniform_int_distribution<int> cold(0, ncols - 1);
  std::uniform_int_distribution<int> margind(0, 4);
  for (int r = 0; r < nrows; ++r) {
    int nnz = nnzd(rng);
    std::vector<std::pair<int, double>> coef;
    for (int t = 0; t < nnz; ++t) {
      int c = cold(rng);
      int a = coefd(rng);
      if (a != 0) coef.emplace_back(c, a);
    }
    if (coef.empty()) coef.emplace_back(cold(rng), 1.0);
    double ax = 0.0;
    for (auto [c, a] : coef) ax += a * x0[c];
    int roll = pct(rng);
    double margin = margind(rng);
    if (force_feasible || roll < 75) {
      if (roll % 3 == 0 && !force_feasible)
        prog.add_row(coef, lp::Sense::EQ, ax);
      else if (roll % 2 == 0)
        prog.add_row(coef, lp::Sense::GE, ax - margin);
      else
        prog.add_row(coef, lp::Sense::LE, ax + margin);
    } else {
      // deliberately unmoored rhs: instance may be infeasible
      if (roll % 2 == 0)
        prog.add_row(coef, lp::Sense::GE, ax + 1 + margin);
      else
        prog.add_row(coef, lp::Sense::LE, ax - 1 - margin);
    }
  }
  return prog;
}

void check_primal_feasible(const lp::LinearProgram& prog,
                           const std::vector<double>& x) {
  REQUIRE(static_cast<int>(x.size()) == prog.num_cols());
  for (int j = 0; j < prog.num_cols(); ++j) {
    CHECK(x[j] >= prog.lower[j] - 1e-6);
    CHECK(x[j] <= prog.upper[j] + 1e-6);
  }
  for (const auto& row : prog.rows) {
    double ax = 0.0;
    for (auto [c, a] : row.coef) ax += a * x[c];
    double tol = 1e-6 * (1.0 + std::fabs(row.rhs));
    switch (row.sense) {
      case lp::Sense::GE: CHECK(ax >= row.rhs - tol); break;
      case lp::Sense::LE: CHECK(ax <= row.rhs + tol); break;
      case lp::Sense::EQ: CHECK(std::fabs(ax - row.rhs) <= tol); break;
    }
  }
}

}  // namespace

TEST_CASE("box-only problems") {
  lp::LinearProgram prog;
  prog.add_column(0.0, 5.0, -1.0);
  prog.add_column(-2.0, 3.0, 2.0);
  auto sol = lp::solve_lp(prog);
  REQUIRE(sol.status == lp::LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-5.0 + 2.0 * -2.0));
  CHECK(sol.primal[0] == doctest::Approx(5.0));
  CHECK(sol.primal[1] == doctest::Approx(-2.0));
}

TEST_CASE("classic textbook optimum") {
  lp::LinearProgram prog;
  int x = prog.add_column(0.0, lp::kInf, -3.0);
  int y = prog.add_column(0.0, lp::kInf, -5.0);
  prog.add_row({{x, 1.0}}, lp::Sense::LE, 4.0);
  prog.add_row({{y, 2.0}}, lp::Sense::LE, 12.0);
  prog.add_row({{x, 3.0}, {y, 2.0}}, lp::Sense::LE, 18.0);
  auto sol = lp::solve_lp(prog);
  REQUIRE(sol.status == lp::LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-36.0));
  CHECK(sol.primal[x] == doctest::Approx(2.0));
  CHECK(sol.primal[y] == doctest::Approx(6.0));
  auto ref = reference_solve(prog);
  REQUIRE(ref.status == lp::LpStatus::Optimal);
  CHECK(ref.objective == doctest::Approx(-36.0));
}

TEST_CASE("infeasible bounds vs rows") {
  lp::LinearProgram prog;
  int x = prog.add_column(0.0, 10.0, 1.0);
  prog.add_row({{x, 1.0}}, lp::Sense::GE, 2.0);
  prog.add_row({{x, 1.0}}, lp::Sense::LE, 1.0);
  auto sol = lp::solve_lp(prog);
  CHECK(sol.status == lp::LpStatus::Infeasible);
  CHECK(reference_solve(prog).status == lp::LpStatus::Infeasible);
}

TEST_CASE("unbounded ray through a row") {
  lp::LinearProgram prog;
  int x = prog.add_column(0.0, lp::kInf, -1.0);
  int y = prog.add_column(0.0, lp::kInf, -1.0);
  prog.add_row({{x, 1.0}, {y, -1.0}}, lp::Sense::LE, 0.0);
  auto sol = lp::solve_lp(prog);
  CHECK(sol.status == lp::LpStatus::Unbounded);
  CHECK(reference_solve(prog).status == lp::LpStatus::Unbounded);
}

TEST_CASE("upper bound only, minimizing downward is unbounded") {
  lp::LinearProgram prog;
  prog.add_column(-lp::kInf, 3.0, 1.0);
  auto sol = lp::solve_lp(prog);
  CHECK(sol.status == lp::LpStatus::Unbounded);
  CHECK(reference_solve(prog).status == lp::LpStatus::Unbounded);
}

TEST_CASE("degenerate pivoting terminates (Beale)") {
  lp::LinearProgram prog;
  int x1 = prog.add_column(0.0, lp::kInf, -0.75);
  int x2 = prog.add_column(0.0, lp::kInf, 150.0);
  int x3 = prog.add_column(0.0, lp::kInf, -0.02);
  int x4 = prog.add_column(0.0, lp::kInf, 6.0);
  prog.add_row({{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}},
               lp::Sense::LE, 0.0);
  prog.add_row({{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}},
               lp::Sense::LE, 0.0);
  prog.add_row({{x3, 1.0}}, lp::Sense::LE, 1.0);
  auto sol = lp::solve_lp(prog);
  REQUIRE(sol.status == lp::LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(-0.05));
}

TEST_CASE("column singletons: inventory-style substitution rows") {
  lp::LinearProgram prog;
  int y = prog.add_column(0.0, 10.0, 0.0);
  int s1 = prog.add_column(0.0, lp::kInf, 1.0);
  int s2 = prog.add_column(0.0, lp::kInf, 1.0);
  prog.add_row({{s1, 1.0}, {y, -1.0}}, lp::Sense::GE, -5.0);
  prog.add_row({{s2, 1.0}, {y, -1.0}}, lp::Sense::GE, -8.0);
  prog.add_row({{y, 1.0}}, lp::Sense::GE, 6.0);
  auto sol = lp::solve_lp(prog);
  REQUIRE(sol.status == lp::LpStatus::Optimal);
  CHECK(sol.objective == doctest::Approx(1.0));
  CHECK(sol.primal[y] == doctest::Approx(6.0));
}

TEST_CASE("repeat solve is stable") {
  std::mt19937 rng(991);
  auto prog = random_lp(rng, 8, 10, false, true);
  lp::SimplexSolver solver(prog);
  auto a = solver.solve();
  auto b = solver.solve();
  REQUIRE(a.status == b.status);
  if (a.status == lp::LpStatus::Optimal)
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-9));
}

TEST_CASE("randomized agreement with reference simplex") {
  int optimal_seen = 0, infeasible_seen = 0, unbounded_seen = 0;
  for (unsigned seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    std::mt19937 rng(seed * 7919u);
    int ncols = 2 + static_cast<int>(rng() % 11);
    int nrows = 1 + static_cast<int>(rng() % 14);
    bool allow_free = seed % 3 == 0;
    auto prog = random_lp(rng, ncols, nrows, allow_free, false);
    auto ref = reference_solve(prog);
    lp::SimplexSolver solver(prog);
    auto got = solver.solve();
    REQUIRE(got.status == ref.status);
    if (ref.status == lp::LpStatus::Optimal) {
      ++optimal_seen;
      double tol = 1e-6 * (1.0 + std::fabs(ref.objective));
      CHECK(std::fabs(got.objective - ref.objective) <= tol);
      check_primal_feasible(prog, got.primal);
      double gap = std::fabs(solver.dual_objective() - got.objective);
      CHECK(gap <= 1e-6 * (1.0 + std::fabs(got.objective)));
    } else if (ref.status == lp::LpStatus::Infeasible) {
      ++infeasible_seen;
    } else {
      ++unbounded_seen;
    }
  }
  // the sweep must actually exercise all three outcomes
  CHECK(optimal_seen >= 20);
  CHECK(infeasible_seen >= 3);
  CHECK(unbounded_seen >= 3);
}

TEST_CASE("warm row additions match cold solves and are monotone") {
  std::mt19937 rng(4242);
  auto base = random_lp(rng, 8, 6, false, true);
  lp::SimplexSolver warm(base);
  auto cur = warm.solve();
  REQUIRE(cur.status == lp::LpStatus::Optimal);
  lp::LinearProgram cold = base;
  double prev_obj = cur.objective;
  std::uniform_int_distribution<int> cold_col(0, 7);
  std::uniform_int_distribution<int> coefd(1, 3);
  std::uniform_real_distribution<double> offd(-1.0, 2.0);
  int infeasible_steps = 0;
  for (int step = 0; step < 50; ++step) {
    CAPTURE(step);
    lp::Row row;
    row.sense = lp::Sense::GE;
    int nnz = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < nnz; ++t) row.coef.emplace_back(cold_col(rng), coefd(rng));
    double ax = 0.0;
    for (auto [c, a] : row.coef) ax += a * cur.primal[c];
    row.rhs = ax + offd(rng);
    cur = warm.add_row_and_resolve(row);
    cold.add_row(row.coef, row.sense, row.rhs);
    auto ref = reference_solve(cold);
    REQUIRE(cur.status == ref.status);
    if (cur.status == lp::LpStatus::Optimal) {
      double tol = 1e-6 * (1.0 + std::fabs(ref.objective));
      CHECK(std::fabs(cur.objective - ref.objective) <= tol);
      // a new constraint can only push the minimum up
      CHECK(cur.objective >= prev_obj - 1e-7 * (1.0 + std::fabs(prev_obj)));
      prev_obj = cur.objective;
      check_primal_feasible(cold, cur.primal);
    } else {
      if (++infeasible_steps >= 2) break;
    }
  }
}

TEST_CASE("warm bound changes match cold solves") {
  std::mt19937 rng(1717);
  auto base = random_lp(rng, 10, 8, false, true);
  // give every column a binary-style companion range we can toggle
  lp::SimplexSolver warm(base);
  auto cur = warm.solve();
  REQUIRE(cur.status == lp::LpStatus::Optimal);
  lp::LinearProgram cold = base;
  for (int step = 0; step < 30; ++step) {
    CAPTURE(step);
    int col = static_cast<int>(rng() % cold.num_cols());
    double lo, up;
    if (step % 3 == 0) {
      // restore the original range
      lo = base.lower[col];
      up = base.upper[col];
    } else {
      // pin the column to one of its finite ends
      double cu = cold.upper[col];
      double pick = (rng() % 2 == 0 || !std::isfinite(cu)) ? cold.lower[col] : cu;
      lo = up = pick;
    }
    warm.set_bounds(col, lo, up);
    cold.lower[col] = lo;
    cold.upper[col] = up;
    cur = warm.solve();
    auto ref = reference_solve(cold);
    REQUIRE(cur.status == ref.status);
    if (cur.status == lp::LpStatus::Optimal) {
      double tol = 1e-6 * (1.0 + std::fabs(ref.objective));
      CHECK(std::fabs(cur.objective - ref.objective) <= tol);
      check_primal_feasible(cold, cur.primal);
    }
  }
}

TEST_CASE("medium random LP stays consistent") {
  std::mt19937 rng(5150);
  auto prog = random_lp(rng, 60, 120, false, true);
  lp::SimplexSolver solver(prog);
  auto got = solver.solve();
  REQUIRE(got.status == lp::LpStatus::Optimal);
  check_primal_feasible(prog, got.primal);
  double gap = std::fabs(solver.dual_objective() - got.objective);
  CHECK(gap <= 1e-6 * (1.0 + std::fabs(got.objective)));
  auto ref = reference_solve(prog);
  REQUIRE(ref.status == lp::LpStatus::Optimal);
  CHECK(std::fabs(got.objective - ref.objective) <=
        1e-6 * (1.0 + std::fabs(ref.objective)));
}
