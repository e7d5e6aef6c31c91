// Command-line front end: instance generation, solves over any
// formulation and cut configuration, oracle-backed verification suites,
// and a small benchmark grid driver.
//
// Exit codes: 0 success/optimal, 2 usage, 3 time limit, 4 infeasible,
// 5 verification failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cclot/benders.hpp"
#include "cclot/cuts.hpp"
#include "cclot/instance.hpp"
#include "cclot/model.hpp"
#include "cclot/oracle.hpp"
#include "cclot/solver.hpp"
#include "json.hpp"

namespace {

using namespace cclot;
namespace orc = cclot::oracle;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTimeLimit = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitVerifyFail = 5;

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Cut list like "mixing,new,stock,ls" or "mixing+new"; empty disables all.
bool parse_cuts(const std::string& text, CutConfig& cfg) {
  cfg.ls_bigM = cfg.mixing = cfg.new_cuts = cfg.stock = false;
  std::string token;
  for (char ch : text + ",") {
    if (ch == ',' || ch == '+') {
      if (token == "mixing") {
        cfg.mixing = true;
      } else if (token == "new") {
        cfg.new_cuts = true;
      } else if (token == "stock") {
        cfg.stock = true;
      } else if (token == "ls") {
        cfg.ls_bigM = true;
      } else if (!token.empty()) {
        std::cerr << "unknown cut family: " << token << "\n";
        return false;
      }
      token.clear();
    } else {
      token += ch;
    }
  }
  return true;
}

int cmd_solve(const std::string& in, const std::string& method,
              const std::string& cuts_text, int mixing_limit,
              double time_limit, const std::string& out) {
  CutConfig cfg;
  if (!parse_cuts(cuts_text, cfg)) return kExitUsage;
  cfg.mixing_cap = mixing_limit;
  if (cfg.stock && method != "dep") {
    std::cerr << "warning: stock cuts need the extensive formulation; "
                 "skipping them for method '"
              << method << "'\n";
    cfg.stock = false;
  }
  Instance inst = load_instance(in);
  SolveReport rep;
  if (method == "dep") {
    rep = solve(build_dep(inst), cfg, time_limit);
  } else if (method == "compact") {
    rep = solve(build_compact(inst), cfg, time_limit);
  } else {
    rep = solve_benders(inst, cfg, time_limit);
  }
  write_text(out, report_json(rep));
  switch (rep.status) {
    case SolveStatus::Optimal:
      return kExitOk;
    case SolveStatus::TimeLimit:
      return kExitTimeLimit;
    default:
      return kExitInfeasible;
  }
}

// ---- verification suites ---------------------------------------------------

struct Shape {
  int n, m;
  double eps;
};
// small shapes whose k stays <= 3 with demands U{1..20}
const Shape kShapes[] = {{3, 5, 0.34}, {2, 6, 0.4}, {4, 8, 0.3}, {6, 12, 0.25}};

Instance verify_instance(int idx, unsigned seed) {
  GenConfig cfg;
  cfg.d_lo = 1;
  cfg.d_hi = 20;
  const Shape& sh = kShapes[idx % 4];
  return generate(sh.n, sh.m, sh.eps, seed, cfg);
}

std::vector<int> random_chain(const DemandStats& st, int period,
                              std::mt19937& rng, bool anchored) {
  std::vector<int> T;
  for (int r = 0; r < st.k(); ++r)
    if ((r == 0 && anchored) || (rng() & 1)) T.push_back(st.ranked(period, r));
  return T;
}

int fail_with(const Instance& inst, const std::string& what) {
  std::cerr << "FAIL: " << what << "\ncounterexample instance:\n"
            << to_json(inst) << "\n";
  return kExitVerifyFail;
}

int verify_validity(int trials, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  double worst = 0.0;
  int checked = 0;
  for (int t = 0; t < trials; ++t) {
    Instance inst = verify_instance(t, seed + 100 + t);
    DemandStats st(inst);
    std::vector<cuts::Cut> cand;

    int ell = static_cast<int>(rng() % inst.n);
    cand.push_back(cuts::mixing_cut(st, {ell, random_chain(st, ell, rng, false)}));
    if (inst.n > 1) {
      ell = 1 + static_cast<int>(rng() % (inst.n - 1));
      cuts::NewCutSpec spec;
      spec.ell = ell;
      spec.S = {0};
      for (int i = 1; i <= ell; ++i) {
        if (rng() & 1)
          spec.S.push_back(i);
        else
          spec.Tprev.push_back({i - 1, random_chain(st, i - 1, rng, false)});
      }
      spec.Tell = random_chain(st, ell, rng, true);
      cand.push_back(cuts::new_cut(st, spec));
      cand.push_back(cuts::stock_cut(st, ell, static_cast<int>(rng() % inst.m),
                                     {ell, random_chain(st, ell, rng, true)}));
    }
    if (t % 2 == 0) {
      std::vector<int> S;
      for (int i = 0; i <= ell; ++i)
        if (rng() & 1) S.push_back(i);
      cand.push_back(
          cuts::ls_bigM_cut(st, static_cast<int>(rng() % inst.m), ell, S));
    }

    std::vector<double> xhat(inst.n), yhat(inst.n), zhat(inst.m);
    for (double& v : xhat) v = uf(rng);
    for (double& v : yhat) v = 25.0 * inst.n * uf(rng) * uf(rng);
    for (double& v : zhat) v = uf(rng);
    std::vector<std::vector<double>> shat(inst.m, std::vector<double>(inst.n));
    for (auto& row : shat)
      for (double& v : row) v = 20.0 * uf(rng);
    for (cuts::Cut& c : cuts::separate_mixing(st, yhat, zhat))
      cand.push_back(std::move(c));
    for (cuts::Cut& c : cuts::separate_new(st, xhat, yhat, zhat))
      cand.push_back(std::move(c));
    for (cuts::Cut& c : cuts::separate_stock(st, shat, xhat, zhat))
      cand.push_back(std::move(c));

    for (const cuts::Cut& c : cand) {
      bool with_s = false;
      for (const auto& [ref, a] : c.terms) with_s |= ref.kind == VarKind::S;
      orc::ValidityVerdict v =
          orc::validate_cut(inst, c, with_s ? orc::Space::Pplus : orc::Space::P);
      ++checked;
      worst = std::min(worst, v.worst_slack);
      if (!v.valid)
        return fail_with(inst, "invalid cut: " + cuts::cut_log_line(c));
    }
  }
  std::printf("validity: %d instances, %d cuts, worst slack %.3g\n", trials,
              checked, worst);
  return kExitOk;
}

int verify_separation(int trials, unsigned seed) {
  Instance inst = generate(3, 25, 0.48, seed);
  DemandStats st(inst);
  std::mt19937 rng(seed + 1);
  std::uniform_real_distribution<double> uf(0.0, 1.0);
  std::vector<double> zhat(inst.m);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    int i = static_cast<int>(rng() % inst.n);
    double xnext = uf(rng);
    for (double& v : zhat) v = uf(rng);
    cuts::SepResult fast = cuts::separate_mixing_free(st, i, zhat, xnext);
    cuts::SepResult ref =
        orc::brute_force_separation(st, i, zhat, orc::SepVariant::Free, xnext);
    worst = std::max(worst, std::fabs(fast.value - ref.value));
    cuts::SepResult afast = cuts::separate_mixing_anchored(st, i, zhat);
    cuts::SepResult aref =
        orc::brute_force_separation(st, i, zhat, orc::SepVariant::Anchored);
    worst = std::max(worst, std::fabs(afast.value - aref.value));
    if (worst > 1e-9)
      return fail_with(inst, "separation mismatch at period " +
                                 std::to_string(i));
  }
  std::printf("separation: %d points, max deviation %.3g\n", trials, worst);
  return kExitOk;
}

int verify_hull(int trials, unsigned seed) {
  bool bare_fractional = false;
  for (int t = 0; t < 10; ++t) {
    Instance inst = generate(3 + t % 2, 6 + t % 3, 0.0, seed + t);
    if (!orc::hull_integrality_check(inst, std::max(10, trials / 10), true,
                                     seed + t))
      return fail_with(inst, "fractional vertex with hull rows present");
    if (!bare_fractional)
      bare_fractional = !orc::hull_integrality_check(
          inst, std::max(10, trials / 10), false, seed + t);
  }
  if (!bare_fractional) {
    std::cerr << "FAIL: the bare big-M relaxation never went fractional; "
                 "the hull rows were not exercised\n";
    return kExitVerifyFail;
  }
  std::printf("hull: 10 zero-risk instances integral with the rows, "
              "bare relaxation fractional\n");
  return kExitOk;
}

int verify_facets(int trials, unsigned /*seed*/) {
  Instance inst;  // the five-scenario two-period example
  inst.n = 2;
  inst.m = 5;
  inst.epsilon = 0.4;
  inst.f = {100, 100};
  inst.c = {6, 6};
  inst.h = {1, 1};
  inst.d = {{6, 1}, {3, 6}, {1, 10}, {2, 8}, {4, 5}};
  DemandStats st(inst);
  int budget = std::max(40, trials);

  cuts::NewCutSpec spec;
  spec.ell = 1;
  spec.S = {0};
  spec.Tprev = {{0, {0, 4}}};
  spec.Tell = {2, 3};
  int r1 = orc::tight_point_rank(inst, cuts::new_cut(st, spec), budget);
  int r2 = orc::tight_point_rank(inst, cuts::stock_cut(st, 1, 0, {1, {2, 3}}),
                                 budget);
  std::printf("facets: hybrid cut rank %d of 8, stock cut rank %d of 18\n", r1,
              r2);
  if (r1 != 8 || r2 != 18) {
    std::cerr << "FAIL: expected full-dimensional tight point sets\n";
    return kExitVerifyFail;
  }
  std::printf("facet-confirmed: both example cuts\n");
  return kExitOk;
}

// ---- bench ------------------------------------------------------------------

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

int cmd_bench(const std::string& grid_path, const std::string& out_path) {
  std::ifstream in(grid_path);
  if (!in) {
    std::cerr << "cannot read grid file " << grid_path << "\n";
    return kExitUsage;
  }
  nlohmann::json grid;
  try {
    grid = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    std::cerr << "bad grid file: " << e.what() << "\n";
    return kExitUsage;
  }
  auto list_d = [&](const char* key, std::vector<double> dflt) {
    if (!grid.contains(key)) return dflt;
    return grid[key].get<std::vector<double>>();
  };
  auto list_i = [&](const char* key, std::vector<int> dflt) {
    if (!grid.contains(key)) return dflt;
    return grid[key].get<std::vector<int>>();
  };
  auto list_s = [&](const char* key, std::vector<std::string> dflt) {
    if (!grid.contains(key)) return dflt;
    return grid[key].get<std::vector<std::string>>();
  };
  std::vector<double> epss = list_d("eps", {0.05});
  std::vector<int> ns = list_i("n", {5});
  std::vector<int> ms = list_i("m", {20});
  std::vector<int> seeds = list_i("seeds", {1, 2, 3});
  std::vector<std::string> methods = list_s("methods", {"dep", "compact"});
  std::vector<std::string> cut_sets = list_s("cuts", {"mixing"});
  double time_limit = grid.value("time_limit", 600.0);

  std::ostringstream csv;
  csv << "eps,n,m,method,cuts,time_sec,gap_pct,nodes,root_gap_pct,"
         "cuts_mixing,cuts_new,cuts_stock,cuts_benders\n";

  for (double eps : epss)
    for (int n : ns)
      for (int m : ms)
        for (const std::string& method : methods)
          for (const std::string& cuts_text : cut_sets) {
            CutConfig cfg;
            if (!parse_cuts(cuts_text, cfg)) return kExitUsage;
            if (cfg.stock && method != "dep") cfg.stock = false;
            double time_sum = 0, gap_sum = 0, nodes_sum = 0, rgap_sum = 0;
            double cm = 0, cn = 0, cs = 0, cb = 0;
            int ok = 0;
            for (int seed : seeds) {
              try {
                Instance inst = generate(n, m, eps, seed);
                SolveReport rep;
                if (method == "dep")
                  rep = solve(build_dep(inst), cfg, time_limit);
                else if (method == "compact")
                  rep = solve(build_compact(inst), cfg, time_limit);
                else if (method == "benders")
                  rep = solve_benders(inst, cfg, time_limit);
                else {
                  std::cerr << "unknown method: " << method << "\n";
                  return kExitUsage;
                }
                double gap = 0.0;
                if (rep.has_incumbent && std::fabs(rep.objective) > 1e-12)
                  gap = 100.0 * (rep.objective - rep.bound) / rep.objective;
                time_sum += rep.time_sec;
                gap_sum += gap;
                nodes_sum += static_cast<double>(rep.nodes);
                rgap_sum += rep.root_gap_pct;
                auto count = [&](const char* f) {
                  auto it = rep.cuts.find(f);
                  return it == rep.cuts.end() ? 0.0 : double(it->second);
                };
                cm += count("MIXING");
                cn += count("NEW");
                cs += count("STOCK");
                cb += count("BENDERS_OPT");
                ++ok;
              } catch (const std::exception& e) {
                std::cerr << "bench cell (" << eps << "," << n << "," << m
                          << "," << method << "," << cuts_text << ") seed "
                          << seed << " failed: " << e.what() << "\n";
              }
            }
            double denom = ok ? ok : 1;
            double nan = std::nan("");
            std::string cuts_label = cuts_text.empty() ? "none" : cuts_text;
            for (char& ch : cuts_label)
              if (ch == ',') ch = '+';
            csv << fmt_num(eps) << ',' << n << ',' << m << ',' << method << ','
                << cuts_label << ',' << fmt_num(ok ? time_sum / denom : nan)
                << ',' << fmt_num(ok ? gap_sum / denom : nan) << ','
                << fmt_num(ok ? nodes_sum / denom : nan) << ','
                << fmt_num(ok ? rgap_sum / denom : nan) << ','
                << fmt_num(ok ? cm / denom : nan) << ','
                << fmt_num(ok ? cn / denom : nan) << ','
                << fmt_num(ok ? cs / denom : nan) << ','
                << fmt_num(ok ? cb / denom : nan) << '\n';
          }
  write_text(out_path, csv.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chance-constrained lot sizing toolkit"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance");
  int g_n = 5, g_m = 100;
  double g_eps = 0.05;
  unsigned long g_seed = 1;
  std::string g_out = "-";
  gen->add_option("--n", g_n, "periods")->check(CLI::PositiveNumber);
  gen->add_option("--m", g_m, "scenarios")->check(CLI::PositiveNumber);
  gen->add_option("--eps", g_eps, "risk level, 0 <= eps < 1")
      ->check(CLI::Range(0.0, 1.0 - 1e-12));
  gen->add_option("--seed", g_seed, "random seed");
  gen->add_option("--out", g_out, "output file (default stdout)");

  // solve
  auto* sol = app.add_subcommand("solve", "solve an instance");
  std::string s_in, s_method = "dep", s_cuts = "mixing,new,stock";
  std::string s_out = "-";
  int s_mixing_limit = 150;
  double s_time_limit = 600.0;
  sol->add_option("--in", s_in, "instance file")->required();
  sol->add_option("--method", s_method, "dep|compact|benders")
      ->check(CLI::IsMember({"dep", "compact", "benders"}));
  sol->add_option("--cuts", s_cuts, "comma list of mixing,new,stock,ls");
  sol->add_option("--mixing-limit", s_mixing_limit, "mixing cut cap")
      ->check(CLI::NonNegativeNumber);
  sol->add_option("--time-limit", s_time_limit, "seconds");
  sol->add_option("--out", s_out, "report file (default stdout)");

  // verify
  auto* ver = app.add_subcommand("verify", "run an oracle suite");
  std::string v_suite;
  int v_trials = 200;
  unsigned v_seed = 99;
  ver->add_option("--suite", v_suite, "validity|separation|hull|facets")
      ->required()
      ->check(CLI::IsMember({"validity", "separation", "hull", "facets"}));
  ver->add_option("--trials", v_trials, "trial count")
      ->check(CLI::PositiveNumber);
  ver->add_option("--seed", v_seed, "random seed");

  // bench
  auto* ben = app.add_subcommand("bench", "run a benchmark grid");
  std::string b_grid, b_out = "-";
  ben->add_option("--grid", b_grid, "grid config JSON")->required();
  ben->add_option("--out", b_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed()) {
      Instance inst = generate(g_n, g_m, g_eps, g_seed);
      if (g_out == "-") {
        std::cout << to_json(inst) << "\n";
      } else {
        save_instance(inst, g_out);
      }
      std::printf("k = %d\n", inst.k());
      return kExitOk;
    }
    if (sol->parsed())
      return cmd_solve(s_in, s_method, s_cuts, s_mixing_limit, s_time_limit,
                       s_out);
    if (ver->parsed()) {
      if (v_suite == "validity") return verify_validity(v_trials, v_seed);
      if (v_suite == "separation") return verify_separation(v_trials, v_seed);
      if (v_suite == "hull") return verify_hull(v_trials, v_seed);
      return verify_facets(v_trials, v_seed);
    }
    if (ben->parsed()) return cmd_bench(b_grid, b_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
