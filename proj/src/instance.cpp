#include "cclot/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cclot {

int Instance::k() const { return static_cast<int>(std::floor(m * epsilon)); }

void Instance::validate() const {
  if (n < 1) throw std::invalid_argument("instance: n must be >= 1");
  if (m < 1) throw std::invalid_argument("instance: m must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("instance: epsilon must lie in [0,1)");
  auto check_vec = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != n)
      throw std::invalid_argument(std::string("instance: field ") + name +
                                  " must have length n");
    for (double x : v)
      if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument(std::string("instance: field ") + name +
                                    " must be finite and nonnegative");
  };
  check_vec(f, "f");
  check_vec(c, "c");
  check_vec(h, "h");
  if (static_cast<int>(d.size()) != m)
    throw std::invalid_argument("instance: field d must have m rows");
  for (const auto& row : d) {
    if (static_cast<int>(row.size()) != n)
      throw std::invalid_argument("instance: each row of d must have length n");
    for (double x : row)
      if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument(
            "instance: field d must be finite and nonnegative");
  }
  int kk = k();
  if (!(kk >= 0 && kk < m))
    throw std::invalid_argument("instance: k = floor(m*epsilon) out of range");
}

Instance generate(int n, int m, double epsilon, unsigned long seed,
                  const GenConfig& cfg) {
  if (n < 1 || m < 1) throw std::invalid_argument("generate: n, m must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::invalid_argument("generate: epsilon must lie in [0,1)");
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  auto draw = [&rng](int lo, int hi) {
    std::uniform_int_distribution<int> dist(lo, hi);
    return static_cast<double>(dist(rng));
  };
  Instance inst;
  inst.n = n;
  inst.m = m;
  inst.epsilon = epsilon;
  inst.f.resize(n);
  inst.c.resize(n);
  inst.h.resize(n);
  for (int i = 0; i < n; ++i) inst.f[i] = draw(cfg.f_lo, cfg.f_hi);
  for (int i = 0; i < n; ++i) inst.c[i] = draw(cfg.c_lo, cfg.c_hi);
  for (int i = 0; i < n; ++i) inst.h[i] = draw(cfg.h_lo, cfg.h_hi);
  inst.d.assign(m, std::vector<double>(n));
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) inst.d[j][i] = draw(cfg.d_lo, cfg.d_hi);
  inst.validate();
  return inst;
}

namespace {

nlohmann::json require_field(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key))
    throw std::runtime_error(std::string("instance file: missing field ") + key);
  return obj.at(key);
}

std::vector<double> read_vector(const nlohmann::json& obj, const char* key,
                                int expect) {
  nlohmann::json arr = require_field(obj, key);
  if (!arr.is_array())
    throw std::runtime_error(std::string("instance file: field ") + key +
                             " must be an array");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number())
      throw std::runtime_error(std::string("instance file: field ") + key +
                               " must contain numbers");
    out.push_back(v.get<double>());
  }
  if (static_cast<int>(out.size()) != expect)
    throw std::runtime_error(std::string("instance file: field ") + key +
                             " has wrong length");
  return out;
}

}  // namespace

Instance from_json(const std::string& text) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error(std::string("instance file: not valid JSON: ") +
                             e.what());
  }
  Instance inst;
  nlohmann::json jn = require_field(obj, "n");
  nlohmann::json jm = require_field(obj, "m");
  nlohmann::json je = require_field(obj, "epsilon");
  if (!jn.is_number_integer())
    throw std::runtime_error("instance file: field n must be an integer");
  if (!jm.is_number_integer())
    throw std::runtime_error("instance file: field m must be an integer");
  if (!je.is_number())
    throw std::runtime_error("instance file: field epsilon must be a number");
  inst.n = jn.get<int>();
  inst.m = jm.get<int>();
  inst.epsilon = je.get<double>();
  if (inst.n < 1) throw std::runtime_error("instance file: field n must be >= 1");
  if (inst.m < 1) throw std::runtime_error("instance file: field m must be >= 1");
  inst.f = read_vector(obj, "f", inst.n);
  inst.c = read_vector(obj, "c", inst.n);
  inst.h = read_vector(obj, "h", inst.n);
  nlohmann::json jd = require_field(obj, "d");
  if (!jd.is_array() || static_cast<int>(jd.size()) != inst.m)
    throw std::runtime_error("instance file: field d must have m rows");
  for (const auto& row : jd) {
    if (!row.is_array() || static_cast<int>(row.size()) != inst.n)
      throw std::runtime_error(
          "instance file: each row of field d must have length n");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number())
        throw std::runtime_error("instance file: field d must contain numbers");
      r.push_back(v.get<double>());
    }
    inst.d.push_back(std::move(r));
  }
  inst.validate();
  return inst;
}

std::string to_json(const Instance& inst) {
  nlohmann::json obj;
  obj["n"] = inst.n;
  obj["m"] = inst.m;
  obj["epsilon"] = inst.epsilon;
  obj["f"] = inst.f;
  obj["c"] = inst.c;
  obj["h"] = inst.h;
  obj["d"] = inst.d;
  return obj.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open instance file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

void save_instance(const Instance& inst, const std::string& path) {
  inst.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write instance file: " + path);
  out << to_json(inst);
}

std::vector<std::vector<double>> cumulative_demands(const Instance& inst) {
  std::vector<std::vector<double>> D(inst.m, std::vector<double>(inst.n, 0.0));
  for (int j = 0; j < inst.m; ++j) {
    double acc = 0.0;
    for (int i = 0; i < inst.n; ++i) {
      acc += inst.d[j][i];
      D[j][i] = acc;
    }
  }
  return D;
}

void rank_scenarios(const std::vector<std::vector<double>>& D, int period,
                    std::vector<int>& desc, std::vector<int>& asc) {
  int m = static_cast<int>(D.size());
  desc.resize(m);
  asc.resize(m);
  std::iota(desc.begin(), desc.end(), 0);
  std::iota(asc.begin(), asc.end(), 0);
  std::sort(desc.begin(), desc.end(), [&](int a, int b) {
    if (D[a][period] != D[b][period]) return D[a][period] > D[b][period];
    return a < b;
  });
  std::sort(asc.begin(), asc.end(), [&](int a, int b) {
    if (D[a][period] != D[b][period]) return D[a][period] < D[b][period];
    return a < b;
  });
}

std::vector<double> big_m(const std::vector<std::vector<double>>& D) {
  int m = static_cast<int>(D.size());
  int n = static_cast<int>(D[0].size());
  std::vector<double> M(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double best = 0.0;
    for (int j = 0; j < m; ++j) {
      double before = (i == 0) ? 0.0 : D[j][i - 1];
      best = std::max(best, D[j][n - 1] - before);
    }
    M[i] = best;
  }
  return M;
}

DemandStats::DemandStats(const Instance& inst) {
  inst.validate();
  n_ = inst.n;
  m_ = inst.m;
  k_ = inst.k();
  D_ = cumulative_demands(inst);
  desc_.resize(n_);
  asc_.resize(n_);
  tstar_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    rank_scenarios(D_, i, desc_[i], asc_[i]);
    tstar_[i].assign(desc_[i].begin(), desc_[i].begin() + k_);
  }
  M_ = big_m(D_);
}

}  // namespace cclot
