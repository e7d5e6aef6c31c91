#include "cclot/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace cclot {

MipModel::MipModel(const Instance& instance, Formulation t)
    : inst(instance), stats(instance), tag(t) {}

int MipModel::col(VarKind kind, int i, int j) const {
  int n = inst.n, m = inst.m;
  auto need_i = [&]() {
    if (i < 0 || i >= n) throw std::out_of_range("model: period index");
  };
  auto need_j = [&]() {
    if (j < 0 || j >= m) throw std::out_of_range("model: scenario index");
  };
  switch (kind) {
    case VarKind::X:
      need_i();
      return i;
    case VarKind::Y:
      need_i();
      return n + i;
    case VarKind::Z:
      need_j();
      return 2 * n + j;
    case VarKind::S:
      if (tag != Formulation::DEP)
        throw std::logic_error("model: s variables only exist in DEP");
      need_i();
      need_j();
      return 2 * n + m + j * n + i;
    case VarKind::ThetaPrime:
      if (tag != Formulation::COMPACT)
        throw std::logic_error("model: theta' only exists in COMPACT");
      need_i();
      return 2 * n + m + i;
    case VarKind::ThetaScen:
      if (tag != Formulation::BENDERS_MASTER)
        throw std::logic_error("model: theta_j only exists in BENDERS_MASTER");
      need_j();
      return 2 * n + m + j;
  }
  throw std::logic_error("model: unknown variable kind");
}

int MipModel::add_row(const std::vector<std::pair<VarRef, double>>& terms,
                      lp::Sense sense, double rhs) {
  std::vector<std::pair<int, double>> coef;
  coef.reserve(terms.size());
  for (const auto& [ref, a] : terms) coef.emplace_back(col(ref.kind, ref.i, ref.j), a);
  return prog.add_row(std::move(coef), sense, rhs);
}

namespace {

// Columns x, y, z shared by all three formulations, plus the cover,
// cardinality and setup-linking rows.
void build_common(MipModel& model) {
  const Instance& inst = model.inst;
  int n = inst.n, m = inst.m;
  for (int i = 0; i < n; ++i) {
    model.prog.add_column(0.0, 1.0, inst.f[i]);
    model.columns.push_back({VarKind::X, i, -1});
    model.binary.push_back(1);
  }
  for (int i = 0; i < n; ++i) {
    model.prog.add_column(0.0, lp::kInf, inst.c[i]);
    model.columns.push_back({VarKind::Y, i, -1});
    model.binary.push_back(0);
  }
  for (int j = 0; j < m; ++j) {
    model.prog.add_column(0.0, 1.0, 0.0);
    model.columns.push_back({VarKind::Z, -1, j});
    model.binary.push_back(1);
  }
}

void build_common_rows(MipModel& model) {
  const Instance& inst = model.inst;
  const DemandStats& st = model.stats;
  int n = inst.n, m = inst.m;
  // cover: sum_{i<=t} y_i + D_jt z_j >= D_jt
  for (int j = 0; j < m; ++j) {
    for (int t = 0; t < n; ++t) {
      std::vector<std::pair<int, double>> coef;
      for (int i = 0; i <= t; ++i) coef.emplace_back(model.y(i), 1.0);
      coef.emplace_back(model.z(j), st.cum(j, t));
      model.prog.add_row(std::move(coef), lp::Sense::GE, st.cum(j, t));
    }
  }
  // cardinality: sum_j z_j <= k
  {
    std::vector<std::pair<int, double>> coef;
    for (int j = 0; j < m; ++j) coef.emplace_back(model.z(j), 1.0);
    model.prog.add_row(std::move(coef), lp::Sense::LE,
                       static_cast<double>(inst.k()));
  }
  // setup linking: M_i x_i - y_i >= 0
  for (int i = 0; i < n; ++i) {
    model.prog.add_row({{model.x(i), st.M(i)}, {model.y(i), -1.0}},
                       lp::Sense::GE, 0.0);
  }
}

}  // namespace

MipModel build_dep(const Instance& inst) {
  inst.validate();
  MipModel model(inst, Formulation::DEP);
  const DemandStats& st = model.stats;
  int n = inst.n, m = inst.m;
  build_common(model);
  for (int j = 0; j < m; ++j) {
    for (int t = 0; t < n; ++t) {
      model.prog.add_column(0.0, lp::kInf, inst.h[t] / m);
      model.columns.push_back({VarKind::S, t, j});
      model.binary.push_back(0);
    }
  }
  build_common_rows(model);
  // inventory: s_jt - sum_{i<=t} y_i >= -D_jt
  for (int j = 0; j < m; ++j) {
    for (int t = 0; t < n; ++t) {
      std::vector<std::pair<int, double>> coef;
      coef.emplace_back(model.s(j, t), 1.0);
      for (int i = 0; i <= t; ++i) coef.emplace_back(model.y(i), -1.0);
      model.prog.add_row(std::move(coef), lp::Sense::GE, -st.cum(j, t));
    }
  }
  model.structural_rows = model.prog.num_rows();
  return model;
}

MipModel build_compact(const Instance& inst) {
  inst.validate();
  MipModel model(inst, Formulation::COMPACT);
  const DemandStats& st = model.stats;
  int n = inst.n, m = inst.m, k = inst.k();
  build_common(model);
  for (int i = 0; i < n; ++i) {
    model.prog.add_column(0.0, lp::kInf, inst.h[i] / m);
    model.columns.push_back({VarKind::ThetaPrime, i, -1});
    model.binary.push_back(0);
  }
  build_common_rows(model);
  // aggregated inventory: theta'_i >= (m-q) sum_{p<=i} y_p - (sum of the
  // m-q smallest cumulative demands at i), for q = 0..k
  for (int i = 0; i < n; ++i) {
    for (int q = 0; q <= k; ++q) {
      int keep = m - q;
      double dsum = 0.0;
      for (int p = 0; p < keep; ++p) dsum += st.cum(st.sigma_asc(i)[p], i);
      std::vector<std::pair<int, double>> coef;
      coef.emplace_back(model.theta_prime(i), 1.0);
      for (int p = 0; p <= i; ++p)
        coef.emplace_back(model.y(p), -static_cast<double>(keep));
      model.prog.add_row(std::move(coef), lp::Sense::GE, -dsum);
    }
  }
  model.structural_rows = model.prog.num_rows();
  return model;
}

MipModel build_benders_master(const Instance& inst) {
  inst.validate();
  MipModel model(inst, Formulation::BENDERS_MASTER);
  int m = inst.m;
  build_common(model);
  for (int j = 0; j < m; ++j) {
    model.prog.add_column(0.0, lp::kInf, 1.0 / m);
    model.columns.push_back({VarKind::ThetaScen, -1, j});
    model.binary.push_back(0);
  }
  build_common_rows(model);
  model.structural_rows = model.prog.num_rows();
  return model;
}

bool chance_feasible(const Instance& inst, const std::vector<double>& x,
                     const std::vector<double>& y,
                     const std::vector<double>& z, double tol) {
  int n = inst.n, m = inst.m;
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n ||
      static_cast<int>(z.size()) != m)
    throw std::invalid_argument("chance_feasible: vector lengths");
  double zsum = 0.0;
  for (double v : z) zsum += v;
  if (zsum > inst.k() + tol) return false;
  DemandStats st(inst);
  for (int i = 0; i < n; ++i)
    if (y[i] > st.M(i) * x[i] + tol) return false;
  for (int j = 0; j < m; ++j) {
    if (z[j] > 0.5) continue;  // scenario allowed to fail
    double cum = 0.0;
    for (int t = 0; t < n; ++t) {
      cum += y[t];
      if (cum < st.cum(j, t) - tol) return false;
    }
  }
  return true;
}

namespace {

std::string var_name(const VarRef& ref) {
  std::ostringstream os;
  switch (ref.kind) {
    case VarKind::X: os << "x" << ref.i; break;
    case VarKind::Y: os << "y" << ref.i; break;
    case VarKind::Z: os << "z" << ref.j; break;
    case VarKind::S: os << "s[" << ref.j << "," << ref.i << "]"; break;
    case VarKind::ThetaPrime: os << "tp" << ref.i; break;
    case VarKind::ThetaScen: os << "th" << ref.j; break;
  }
  return os.str();
}

}  // namespace

std::string dump_model(const MipModel& model) {
  std::ostringstream os;
  os << "min:";
  for (int c = 0; c < model.prog.num_cols(); ++c) {
    double v = model.prog.cost[c];
    if (v != 0.0) os << " " << v << "*" << var_name(model.columns[c]);
  }
  os << "\n";
  for (int r = 0; r < model.prog.num_rows(); ++r) {
    const lp::Row& row = model.prog.rows[r];
    os << (r < model.structural_rows ? "r" : "cut") << r << ":";
    for (auto [c, a] : row.coef) os << " " << a << "*" << var_name(model.columns[c]);
    switch (row.sense) {
      case lp::Sense::GE: os << " >= "; break;
      case lp::Sense::LE: os << " <= "; break;
      case lp::Sense::EQ: os << " == "; break;
    }
    os << row.rhs << "\n";
  }
  return os.str();
}

}  // namespace cclot
