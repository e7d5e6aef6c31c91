// Python surface: instance handling, the three solve paths, and the
// brute-force optimum for cross-checking. Reports come back as dicts so
// scripts can dump them straight to JSON.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cclot/benders.hpp"
#include "cclot/instance.hpp"
#include "cclot/model.hpp"
#include "cclot/oracle.hpp"
#include "cclot/solver.hpp"

namespace py = pybind11;
using namespace cclot;

namespace {

CutConfig make_config(const std::string& cuts, int mixing_limit) {
  CutConfig cfg;
  cfg.ls_bigM = cfg.mixing = cfg.new_cuts = cfg.stock = false;
  cfg.mixing_cap = mixing_limit;
  std::string token;
  for (char ch : cuts + ",") {
    if (ch == ',' || ch == '+') {
      if (token == "mixing")
        cfg.mixing = true;
      else if (token == "new")
        cfg.new_cuts = true;
      else if (token == "stock")
        cfg.stock = true;
      else if (token == "ls")
        cfg.ls_bigM = true;
      else if (!token.empty())
        throw std::invalid_argument("unknown cut family: " + token);
      token.clear();
    } else {
      token += ch;
    }
  }
  return cfg;
}

py::dict report_dict(const SolveReport& rep) {
  py::dict d;
  d["status"] = status_name(rep.status);
  if (rep.has_incumbent) {
    d["objective"] = rep.objective;
    d["x"] = rep.x;
    d["y"] = rep.y;
    d["z"] = rep.z;
  } else {
    d["objective"] = py::none();
  }
  if (rep.status != SolveStatus::Infeasible) d["bound"] = rep.bound;
  d["nodes"] = rep.nodes;
  d["root_lp"] = rep.root_lp;
  d["root_gap_pct"] = rep.root_gap_pct;
  py::dict cuts;
  for (const auto& [name, cnt] : rep.cuts) cuts[name.c_str()] = cnt;
  d["cuts"] = cuts;
  d["time_sec"] = rep.time_sec;
  return d;
}

}  // namespace

PYBIND11_MODULE(_cclot, mod) {
  mod.doc() = "chance-constrained lot sizing toolkit";

  py::class_<Instance>(mod, "Instance")
      .def(py::init<>())
      .def_readwrite("n", &Instance::n)
      .def_readwrite("m", &Instance::m)
      .def_readwrite("epsilon", &Instance::epsilon)
      .def_readwrite("f", &Instance::f)
      .def_readwrite("c", &Instance::c)
      .def_readwrite("h", &Instance::h)
      .def_readwrite("d", &Instance::d)
      .def("k", &Instance::k)
      .def("validate", &Instance::validate)
      .def("to_json", [](const Instance& inst) { return to_json(inst); })
      .def("__repr__", [](const Instance& inst) {
        return "Instance(n=" + std::to_string(inst.n) +
               ", m=" + std::to_string(inst.m) + ")";
      });

  mod.def(
      "generate",
      [](int n, int m, double eps, unsigned long seed) {
        return generate(n, m, eps, seed);
      },
      py::arg("n"), py::arg("m"), py::arg("eps"), py::arg("seed") = 1);
  mod.def("from_json", &from_json);
  mod.def("load_instance", &load_instance);
  mod.def("save_instance", &save_instance);

  mod.def(
      "solve",
      [](const Instance& inst, const std::string& method,
         const std::string& cuts, int mixing_limit, double time_limit) {
        CutConfig cfg = make_config(cuts, mixing_limit);
        SolveReport rep;
        if (method == "dep") {
          rep = solve(build_dep(inst), cfg, time_limit);
        } else if (method == "compact") {
          cfg.stock = false;
          rep = solve(build_compact(inst), cfg, time_limit);
        } else if (method == "benders") {
          cfg.stock = false;
          rep = solve_benders(inst, cfg, time_limit);
        } else {
          throw std::invalid_argument("method must be dep|compact|benders");
        }
        return report_dict(rep);
      },
      py::arg("instance"), py::arg("method") = "dep",
      py::arg("cuts") = "mixing,new,stock", py::arg("mixing_limit") = 150,
      py::arg("time_limit") = 600.0);

  mod.def(
      "brute_force_optimum",
      [](const Instance& inst) {
        oracle::BruteOpt best = oracle::brute_force_optimum(inst);
        py::dict d;
        d["objective"] = best.objective;
        d["x"] = best.x;
        d["z"] = best.z;
        d["y"] = best.y;
        return d;
      },
      py::arg("instance"));

  mod.def("chance_feasible", &chance_feasible, py::arg("instance"),
          py::arg("x"), py::arg("y"), py::arg("z"), py::arg("tol") = 1e-6);
}
