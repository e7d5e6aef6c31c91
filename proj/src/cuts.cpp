#include "cclot/cuts.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

namespace cclot::cuts {

const char* kCutLogHeader = "family,ell,scenario,S,Tsets,violation,rhs";

const char* family_name(CutFamily f) {
  switch (f) {
    case CutFamily::LS_BIGM: return "LS_BIGM";
    case CutFamily::MIXING: return "MIXING";
    case CutFamily::NEW: return "NEW";
    case CutFamily::STOCK: return "STOCK";
    case CutFamily::BENDERS_OPT: return "BENDERS_OPT";
  }
  return "?";
}

namespace {

void check_period(const DemandStats& st, int ell) {
  if (ell < 0 || ell >= st.n())
    throw std::invalid_argument("cut: period out of range");
}

void check_scenario(const DemandStats& st, int j) {
  if (j < 0 || j >= st.m())
    throw std::invalid_argument("cut: scenario out of range");
}

// Rank positions of a proposed chain inside sigma_desc at period i. The
// chain must list scenarios from T*_i in strictly increasing rank order,
// which is exactly "descending cumulative demand with canonical ties".
std::vector<int> chain_ranks(const DemandStats& st, int i,
                             const std::vector<int>& T) {
  std::vector<int> ranks;
  ranks.reserve(T.size());
  int prev = -1;
  for (int t : T) {
    check_scenario(st, t);
    int r = -1;
    for (int p = 0; p < st.k(); ++p)
      if (st.ranked(i, p) == t) {
        r = p;
        break;
      }
    if (r < 0)
      throw std::invalid_argument("cut: chain scenario outside the top-k set");
    if (r <= prev)
      throw std::invalid_argument("cut: chain not in descending rank order");
    prev = r;
    ranks.push_back(r);
  }
  return ranks;
}

// Adds the chain's z coefficients (value steps down to the next member,
// closing scenario after the last) into alpha as a running max.
void chain_alphas(const DemandStats& st, int i, const std::vector<int>& ranks,
                  std::map<int, double>& alpha) {
  for (std::size_t p = 0; p < ranks.size(); ++p) {
    double here = st.ranked_value(i, ranks[p]);
    double next = p + 1 < ranks.size() ? st.ranked_value(i, ranks[p + 1])
                                       : st.closing_value(i);
    double a = here - next;
    int scen = st.ranked(i, ranks[p]);
    auto it = alpha.find(scen);
    if (it == alpha.end())
      alpha[scen] = a;
    else
      it->second = std::max(it->second, a);
  }
}

double chain_head_value(const DemandStats& st, int i,
                        const std::vector<int>& ranks) {
  return ranks.empty() ? st.closing_value(i) : st.ranked_value(i, ranks[0]);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

Cut ls_bigM_cut(const DemandStats& st, int j, int ell,
                const std::vector<int>& S) {
  check_period(st, ell);
  check_scenario(st, j);
  std::vector<char> inS(ell + 1, 0);
  for (int i : S) {
    if (i < 0 || i > ell)
      throw std::invalid_argument("cut: S must lie within 1..ell");
    if (inS[i]) throw std::invalid_argument("cut: S has duplicates");
    inS[i] = 1;
  }
  Cut cut;
  cut.family = CutFamily::LS_BIGM;
  cut.ell = ell;
  cut.scenario = j;
  cut.S = S;
  std::sort(cut.S.begin(), cut.S.end());
  double dfull = st.cum(j, ell);
  for (int i = 0; i <= ell; ++i) {
    if (inS[i]) {
      cut.terms.push_back({{VarKind::Y, i, -1}, 1.0});
    } else {
      double coef = dfull - st.cumd(j, i);  // demand of periods i..ell
      if (coef != 0.0) cut.terms.push_back({{VarKind::X, i, -1}, coef});
    }
  }
  if (dfull != 0.0) cut.terms.push_back({{VarKind::Z, -1, j}, dfull});
  cut.rhs = dfull;
  return cut;
}

Cut mixing_cut(const DemandStats& st, const MixingSet& ms) {
  check_period(st, ms.ell);
  auto ranks = chain_ranks(st, ms.ell, ms.T);
  Cut cut;
  cut.family = CutFamily::MIXING;
  cut.ell = ms.ell;
  cut.Tsets.push_back({ms.ell, ms.T});
  for (int i = 0; i <= ms.ell; ++i)
    cut.terms.push_back({{VarKind::Y, i, -1}, 1.0});
  std::map<int, double> alpha;
  chain_alphas(st, ms.ell, ranks, alpha);
  for (auto [scen, a] : alpha)
    if (a != 0.0) cut.terms.push_back({{VarKind::Z, -1, scen}, a});
  cut.rhs = chain_head_value(st, ms.ell, ranks);
  return cut;
}

Cut new_cut(const DemandStats& st, const NewCutSpec& spec) {
  int ell = spec.ell;
  check_period(st, ell);
  if (ell < 1)
    throw std::invalid_argument("new cut: needs a period later than the first");
  std::vector<char> inS(ell + 1, 0);
  for (int i : spec.S) {
    if (i < 0 || i > ell)
      throw std::invalid_argument("new cut: S must lie within 1..ell");
    if (inS[i]) throw std::invalid_argument("new cut: S has duplicates");
    inS[i] = 1;
  }
  if (!inS[0])
    throw std::invalid_argument("new cut: the first period must stay in S");

  auto tell_ranks = chain_ranks(st, ell, spec.Tell);
  if (!spec.Tell.empty() && spec.Tell[0] != st.ranked(ell, 0))
    throw std::invalid_argument(
        "new cut: anchored set must start at the largest scenario");
  double head = chain_head_value(st, ell, tell_ranks);

  // collect the per-period sets for the Sbar members
  std::vector<const std::vector<int>*> tprev(ell + 1, nullptr);
  for (const auto& [period, T] : spec.Tprev) {
    if (period < 0 || period >= ell)
      throw std::invalid_argument("new cut: T set at a period outside 1..ell-1");
    if (inS[period + 1])
      throw std::invalid_argument("new cut: T set supplied for a period in S");
    if (tprev[period + 1])
      throw std::invalid_argument("new cut: duplicate T set");
    tprev[period + 1] = &T;
  }
  for (int i = 1; i <= ell; ++i)
    if (!inS[i] && !tprev[i])
      throw std::invalid_argument("new cut: missing T set for a period in Sbar");

  Cut cut;
  cut.family = CutFamily::NEW;
  cut.ell = ell;
  cut.S = spec.S;
  std::sort(cut.S.begin(), cut.S.end());
  std::map<int, double> alpha;
  for (int i = 0; i <= ell; ++i) {
    if (inS[i]) {
      cut.terms.push_back({{VarKind::Y, i, -1}, 1.0});
      continue;
    }
    auto ranks = chain_ranks(st, i - 1, *tprev[i]);
    // An empty T_{i-1} contributes no demand offset: the separation value
    // of the empty set is zero, so the matching coefficient is the full
    // head demand. Only nonempty chains subtract their head.
    double headv = ranks.empty() ? 0.0 : st.ranked_value(i - 1, ranks[0]);
    double coef = head - headv;
    if (coef < -1e-12)
      throw std::invalid_argument("new cut: negative setup coefficient");
    if (coef != 0.0) cut.terms.push_back({{VarKind::X, i, -1}, coef});
    chain_alphas(st, i - 1, ranks, alpha);
    cut.Tsets.push_back({i - 1, *tprev[i]});
  }
  chain_alphas(st, ell, tell_ranks, alpha);
  cut.Tsets.push_back({ell, spec.Tell});
  std::sort(cut.Tsets.begin(), cut.Tsets.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto [scen, a] : alpha)
    if (a != 0.0) cut.terms.push_back({{VarKind::Z, -1, scen}, a});
  cut.rhs = head;
  return cut;
}

Cut stock_cut(const DemandStats& st, int ell, int j, const MixingSet& tell) {
  check_period(st, ell);
  if (ell < 1)
    throw std::invalid_argument("stock cut: needs a period later than the first");
  check_scenario(st, j);
  if (tell.ell != ell)
    throw std::invalid_argument("stock cut: chain period mismatch");
  auto ranks = chain_ranks(st, ell, tell.T);
  double head = chain_head_value(st, ell, ranks);
  double c = head - st.cum(j, ell - 1);
  Cut cut;
  cut.family = CutFamily::STOCK;
  cut.ell = ell;
  cut.scenario = j;
  cut.Tsets.push_back({ell, tell.T});
  cut.terms.push_back({{VarKind::S, ell - 1, j}, 1.0});
  if (c != 0.0) cut.terms.push_back({{VarKind::X, ell, -1}, c});
  std::map<int, double> alpha;
  chain_alphas(st, ell, ranks, alpha);
  for (auto [scen, a] : alpha)
    if (a != 0.0) cut.terms.push_back({{VarKind::Z, -1, scen}, a});
  cut.rhs = c;
  return cut;
}

// ---- separation -----------------------------------------------------------

namespace {

// Chain dynamic program over the ranked top-k scenarios at period i.
// C[r] is the cheapest cost of a chain headed by rank r (its z coefficient
// shrinks when the next member is close); nxt[r] the successor attaining
// it, with k standing for "close the chain". Ties prefer the smallest
// successor, i.e. the densest chain.
struct ChainDP {
  std::vector<double> v;  // v[0..k-1] ranked values, v[k] closing value
  std::vector<double> C;
  std::vector<int> nxt;
};

ChainDP chain_dp(const DemandStats& st, int i, const std::vector<double>& zhat) {
  int k = st.k();
  ChainDP dp;
  dp.v.resize(k + 1);
  dp.C.assign(k + 1, 0.0);
  dp.nxt.assign(k + 1, k);
  for (int r = 0; r < k; ++r) dp.v[r] = st.ranked_value(i, r);
  dp.v[k] = st.closing_value(i);
  for (int r = k - 1; r >= 0; --r) {
    double zr = zhat[st.ranked(i, r)];
    double best = 0.0;
    int bq = k;
    bool first = true;
    for (int q = r + 1; q <= k; ++q) {
      double cost = (dp.v[r] - dp.v[q]) * zr + dp.C[q];
      if (first || cost < best) {
        best = cost;
        bq = q;
        first = false;
      }
    }
    dp.C[r] = best;
    dp.nxt[r] = bq;
  }
  return dp;
}

std::vector<int> chain_members(const DemandStats& st, int i, const ChainDP& dp,
                               int head) {
  std::vector<int> T;
  int k = st.k();
  for (int r = head; r != k; r = dp.nxt[r]) T.push_back(st.ranked(i, r));
  return T;
}

}  // namespace

SepResult separate_mixing_free(const DemandStats& st, int i,
                               const std::vector<double>& zhat, double xnext) {
  check_period(st, i);
  if (static_cast<int>(zhat.size()) != st.m())
    throw std::invalid_argument("separation: zhat length");
  SepResult out;  // empty set scores 0
  if (st.k() == 0) return out;
  ChainDP dp = chain_dp(st, i, zhat);
  int besthead = -1;
  for (int r = 0; r < st.k(); ++r) {
    double val = -dp.v[r] * xnext + dp.C[r];
    if (val < out.value) {
      out.value = val;
      besthead = r;
    }
  }
  if (besthead >= 0) out.subset = chain_members(st, i, dp, besthead);
  return out;
}

SepResult separate_mixing_anchored(const DemandStats& st, int i,
                                   const std::vector<double>& zhat) {
  check_period(st, i);
  if (static_cast<int>(zhat.size()) != st.m())
    throw std::invalid_argument("separation: zhat length");
  SepResult out;
  if (st.k() == 0) return out;  // base inequality stands in
  ChainDP dp = chain_dp(st, i, zhat);
  out.value = dp.C[0];
  out.subset = chain_members(st, i, dp, 0);
  return out;
}

std::vector<Cut> separate_mixing(const DemandStats& st,
                                 const std::vector<double>& yhat,
                                 const std::vector<double>& zhat) {
  if (static_cast<int>(yhat.size()) != st.n())
    throw std::invalid_argument("separation: yhat length");
  std::vector<Cut> out;
  double Y = 0.0;
  for (int ell = 0; ell < st.n(); ++ell) {
    Y += yhat[ell];
    double best_viol = st.closing_value(ell) - Y;  // empty chain: base row
    std::vector<int> best_T;
    if (st.k() > 0) {
      ChainDP dp = chain_dp(st, ell, zhat);
      for (int r = 0; r < st.k(); ++r) {
        double viol = dp.v[r] - dp.C[r] - Y;
        if (viol > best_viol) {
          best_viol = viol;
          best_T = chain_members(st, ell, dp, r);
        }
      }
    }
    Cut cut = mixing_cut(st, {ell, best_T});
    if (best_viol > violation_tol(cut.rhs)) {
      cut.violation = best_viol;
      out.push_back(std::move(cut));
    }
  }
  return out;
}

std::vector<Cut> separate_new(const DemandStats& st,
                              const std::vector<double>& xhat,
                              const std::vector<double>& yhat,
                              const std::vector<double>& zhat) {
  int n = st.n();
  if (static_cast<int>(xhat.size()) != n || static_cast<int>(yhat.size()) != n)
    throw std::invalid_argument("separation: xhat/yhat length");
  std::vector<Cut> out;
  // the free subproblem at period i-1 with multiplier xhat_i does not
  // depend on ell, so solve each once
  std::vector<SepResult> free_at(n);
  for (int i = 1; i < n; ++i)
    free_at[i] = separate_mixing_free(st, i - 1, zhat, xhat[i]);
  for (int ell = 1; ell < n; ++ell) {
    SepResult anchored = separate_mixing_anchored(st, ell, zhat);
    double head = st.ranked_value(ell, 0);
    NewCutSpec spec;
    spec.ell = ell;
    spec.S.push_back(0);
    spec.Tell = anchored.subset;
    for (int i = 1; i <= ell; ++i) {
      if (yhat[i] <= head * xhat[i] + free_at[i].value)
        spec.S.push_back(i);
      else
        spec.Tprev.push_back({i - 1, free_at[i].subset});
    }
    Cut cut = new_cut(st, spec);
    double viol = cut.rhs - cut_lhs(cut, xhat, yhat, zhat);
    if (viol > violation_tol(cut.rhs)) {
      cut.violation = viol;
      out.push_back(std::move(cut));
    }
  }
  return out;
}

std::vector<Cut> separate_stock(const DemandStats& st,
                                const std::vector<std::vector<double>>& shat,
                                const std::vector<double>& xhat,
                                const std::vector<double>& zhat) {
  int n = st.n();
  if (static_cast<int>(shat.size()) != st.m())
    throw std::invalid_argument("separation: shat shape");
  if (static_cast<int>(xhat.size()) != n)
    throw std::invalid_argument("separation: xhat length");
  std::vector<Cut> out;
  for (int ell = 1; ell < n; ++ell) {
    int j = st.ranked(ell - 1, 0);  // deepest scenario entering period ell
    SepResult anchored = separate_mixing_anchored(st, ell, zhat);
    double head = st.ranked_value(ell, 0);
    double c = head - st.cum(j, ell - 1);
    double viol = c - (shat[j][ell - 1] + c * xhat[ell] + anchored.value);
    if (viol > violation_tol(c)) {
      Cut cut = stock_cut(st, ell, j, {ell, anchored.subset});
      cut.violation = viol;
      out.push_back(std::move(cut));
    }
  }
  return out;
}

double cut_lhs(const Cut& cut, const std::vector<double>& x,
               const std::vector<double>& y, const std::vector<double>& z,
               const std::vector<std::vector<double>>& s) {
  double lhs = 0.0;
  for (const auto& [ref, a] : cut.terms) {
    switch (ref.kind) {
      case VarKind::X: lhs += a * x.at(ref.i); break;
      case VarKind::Y: lhs += a * y.at(ref.i); break;
      case VarKind::Z: lhs += a * z.at(ref.j); break;
      case VarKind::S: lhs += a * s.at(ref.j).at(ref.i); break;
      default:
        throw std::logic_error("cut_lhs: unsupported variable kind");
    }
  }
  return lhs;
}

std::string cut_log_line(const Cut& cut) {
  std::ostringstream os;
  os << family_name(cut.family) << ",";
  if (cut.ell >= 0) os << cut.ell + 1;
  os << ",";
  if (cut.scenario >= 0) os << cut.scenario + 1;
  os << ",";
  for (std::size_t i = 0; i < cut.S.size(); ++i)
    os << (i ? "|" : "") << cut.S[i] + 1;
  os << ",";
  for (std::size_t g = 0; g < cut.Tsets.size(); ++g) {
    if (g) os << ";";
    os << cut.Tsets[g].first + 1 << ":";
    const auto& T = cut.Tsets[g].second;
    for (std::size_t i = 0; i < T.size(); ++i) os << (i ? "|" : "") << T[i] + 1;
  }
  os << "," << fmt_double(cut.violation) << "," << fmt_double(cut.rhs);
  return os.str();
}

bool CutPool::insert(const Cut& cut) {
  auto key_of = [](const Cut& c) {
    std::vector<std::tuple<int, int, int, long long>> parts;
    parts.reserve(c.terms.size());
    for (const auto& [ref, a] : c.terms)
      parts.emplace_back(static_cast<int>(ref.kind), ref.i, ref.j,
                         std::llround(a * 1e9));
    std::sort(parts.begin(), parts.end());
    std::ostringstream os;
    for (const auto& [k, i, j, a] : parts)
      os << k << ":" << i << ":" << j << ":" << a << ";";
    os << "r" << std::llround(c.rhs * 1e9);
    return os.str();
  };
  std::string key = key_of(cut);
  if (keys_.count(key)) return false;
  keys_.insert(std::move(key));
  cuts_.push_back(cut);
  return true;
}

}  // namespace cclot::cuts
