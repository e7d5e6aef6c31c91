#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "cclot/benders.hpp"
#include "cclot/lp.hpp"
#include "cclot/model.hpp"
#include "cclot/oracle.hpp"
#include "cclot/solver.hpp"
#include "doctest.h"
#include "worked_instance.hpp"

using namespace cclot;
namespace orc = cclot::oracle;

namespace {

bool rel_close(double a, double b, double tol = 1e-6) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

// direct primal evaluation of one scenario's holding cost
double inventory_cost(const Instance& inst, int j,
                      const std::vector<double>& yhat) {
  double partial = 0.0, total = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    partial += yhat[i] - inst.d[j][i];
    total += inst.h[i] * std::max(partial, 0.0);
  }
  return total;
}

// the same value via an LP over the inventory variables
double inventory_lp(const Instance& inst, int j,
                    const std::vector<double>& yhat) {
  lp::LinearProgram prog;
  for (int i = 0; i < inst.n; ++i) prog.add_column(0.0, lp::kInf, inst.h[i]);
  double partial = 0.0;
  for (int i = 0; i < inst.n; ++i) {
    partial += yhat[i] - inst.d[j][i];
    prog.add_row({{i, 1.0}}, lp::Sense::GE, partial);
  }
  lp::LpSolution sol = lp::solve_lp(prog);
  REQUIRE(sol.status == lp::LpStatus::Optimal);
  return sol.objective;
}

}  // namespace

TEST_CASE("closed-form dual on the worked example") {
  Instance inst = fixtures::worked_example();
  DualSolution dual = subproblem_dual(inst, 0, {11.0, 0.0});
  CHECK(dual.gamma == std::vector<double>{1.0, 1.0});
  CHECK(dual.value == doctest::Approx(9.0));

  cuts::Cut cut = optimality_cut(inst, dual);
  CHECK(cut.family == cuts::CutFamily::BENDERS_OPT);
  CHECK(cut.scenario == 0);
  REQUIRE(cut.terms.size() == 3);
  CHECK(cut.terms[0].first.kind == VarKind::ThetaScen);
  CHECK(cut.terms[0].second == 1.0);
  double ycoef0 = 0.0, ycoef1 = 0.0;
  for (const auto& [ref, a] : cut.terms) {
    if (ref.kind == VarKind::Y && ref.i == 0) ycoef0 = a;
    if (ref.kind == VarKind::Y && ref.i == 1) ycoef1 = a;
  }
  CHECK(ycoef0 == -2.0);
  CHECK(ycoef1 == -1.0);
  CHECK(cut.rhs == -13.0);

  // idle production carries no inventory: all-zero dual, trivial row
  DualSolution idle = subproblem_dual(inst, 0, {0.0, 0.0});
  CHECK(idle.value == 0.0);
  CHECK(idle.gamma == std::vector<double>{0.0, 0.0});
  cuts::Cut trivial = optimality_cut(inst, idle);
  CHECK(trivial.terms.size() == 1);
  CHECK(trivial.rhs == 0.0);

  CHECK_THROWS_AS(subproblem_dual(inst, 9, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(subproblem_dual(inst, 0, {0.0}), std::invalid_argument);
}

TEST_CASE("exact cover keeps the dual at zero") {
  Instance inst;
  inst.n = 2;
  inst.m = 1;
  inst.epsilon = 0.0;
  inst.f = {1, 1};
  inst.c = {1, 1};
  inst.h = {4, 7};
  inst.d = {{5, 5}};
  DualSolution dual = subproblem_dual(inst, 0, {5.0, 5.0});
  CHECK(dual.gamma == std::vector<double>{0.0, 0.0});
  CHECK(dual.value == 0.0);
}

TEST_CASE("dual value equals the primal inventory LP") {
  std::mt19937 rng(20);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  for (int seed = 0; seed < 20; ++seed) {
    Instance inst = generate(4, 5, 0.25, 6000 + seed);
    std::vector<double> yhat(inst.n);
    for (double& v : yhat) v = 80.0 * uf(rng);
    int j = static_cast<int>(rng() % inst.m);
    DualSolution dual = subproblem_dual(inst, j, yhat);
    CHECK(std::abs(dual.value - inventory_cost(inst, j, yhat)) < 1e-9);
    CHECK(std::abs(dual.value - inventory_lp(inst, j, yhat)) <
          1e-9 * (1.0 + dual.value));
    for (int i = 0; i < inst.n; ++i) {
      CHECK(dual.gamma[i] >= 0.0);
      CHECK(dual.gamma[i] <= inst.h[i]);
    }
  }
}

TEST_CASE("optimality cuts underestimate the true cost everywhere") {
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  Instance inst = generate(3, 6, 0.34, 6100);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> ysrc(inst.n), yprobe(inst.n);
    for (double& v : ysrc) v = 70.0 * uf(rng);
    for (double& v : yprobe) v = 70.0 * uf(rng);
    int j = static_cast<int>(rng() % inst.m);
    cuts::Cut cut = optimality_cut(inst, subproblem_dual(inst, j, ysrc));
    // lower bound the cut imposes on theta_j at yprobe
    double need = cut.rhs;
    for (const auto& [ref, a] : cut.terms)
      if (ref.kind == VarKind::Y) need -= a * yprobe[ref.i];
    CHECK(inventory_cost(inst, j, yprobe) >= need - 1e-9);
  }
}

TEST_CASE("free holding costs converge in one round") {
  Instance inst = fixtures::worked_example_costed();
  inst.h = {0.0, 0.0};
  std::string trace;
  SolveReport rep = solve_benders(inst, CutConfig{}, 600.0, &trace);
  CHECK(rep.status == SolveStatus::Optimal);
  CHECK(rep.cuts["BENDERS_OPT"] == 0);
  CHECK(rel_close(rep.objective, orc::brute_force_optimum(inst).objective));
  std::istringstream is(trace);
  std::string line;
  REQUIRE(std::getline(is, line));
  CHECK(line == "iter,master_obj,violated_scenarios,cuts_added");
  REQUIRE(std::getline(is, line));
  CHECK(line.substr(0, 2) == "1,");
  CHECK(line.substr(line.size() - 4) == ",0,0");
  CHECK(!std::getline(is, line));
}

TEST_CASE("benders agrees with branch-and-bound and the oracle") {
  Instance worked = fixtures::worked_example_costed();
  SolveReport wrep = solve_benders(worked);
  CHECK(std::abs(wrep.objective - 101.2) < 1e-6);

  int total_iters = 0;
  for (int seed = 0; seed < 25; ++seed) {
    double eps = (seed % 2) ? 0.34 : 0.2;
    Instance inst = generate(3, (seed % 3) ? 5 : 6, eps, 7000 + seed);
    CAPTURE(seed);
    std::string trace;
    SolveReport ben = solve_benders(inst, CutConfig{}, 600.0, &trace);
    REQUIRE(ben.status == SolveStatus::Optimal);
    double ref = orc::brute_force_optimum(inst).objective;
    CHECK(rel_close(ben.objective, ref));
    CHECK(ben.cuts["BENDERS_OPT"] >= 0);
    CHECK(ben.cuts.count("MIXING") == 1);

    // the master objective never decreases across iterations
    std::istringstream is(trace);
    std::string line;
    std::getline(is, line);  // header
    double prev = -1e100;
    int iters = 0;
    int expect_iter = 1;
    while (std::getline(is, line)) {
      std::istringstream ls(line);
      std::string iter_s, obj_s;
      std::getline(ls, iter_s, ',');
      std::getline(ls, obj_s, ',');
      CHECK(iter_s == std::to_string(expect_iter++));
      double obj = std::stod(obj_s);
      CHECK(obj >= prev - 1e-6 * (1.0 + std::abs(obj)));
      prev = obj;
      ++iters;
    }
    CHECK(iters >= 1);
    total_iters += iters;
  }
  MESSAGE("mean benders iterations ", total_iters / 25.0);
}
