#pragma once

#include <string>
#include <vector>

namespace cclot {

// One static lot-sizing instance under a joint chance constraint.
// Demand is scenario-based: m equiprobable demand paths over n periods,
// and at most a fraction epsilon of them may be left uncovered.
// All data is immutable after construction.
struct Instance {
  int n = 0;                               // number of periods
  int m = 0;                               // number of scenarios
  double epsilon = 0.0;                    // risk level, 0 <= epsilon < 1
  std::vector<double> f;                   // setup cost per period, size n
  std::vector<double> c;                   // unit production cost, size n
  std::vector<double> h;                   // unit holding cost, size n
  std::vector<std::vector<double>> d;      // demand, scenario-major, m x n

  // k = floor(m * epsilon): number of scenarios allowed to be violated.
  int k() const;

  // Throws std::invalid_argument on malformed data (sizes, signs, ranges).
  void validate() const;
};

// Sampling ranges for random instances. Discrete uniform, inclusive.
struct GenConfig {
  int f_lo = 50, f_hi = 100;
  int c_lo = 5, c_hi = 10;
  int d_lo = 10, d_hi = 30;
  int h_lo = 30, h_hi = 60;
};

Instance generate(int n, int m, double epsilon, unsigned long seed,
                  const GenConfig& cfg = GenConfig{});

Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
std::string to_json(const Instance& inst);
Instance from_json(const std::string& text);

// Cumulative demand matrix: out[j][i] = sum of d[j][0..i].
std::vector<std::vector<double>> cumulative_demands(const Instance& inst);

// Scenario rankings of one period's cumulative demands.
// desc: largest first; asc: smallest first. Ties in either direction are
// broken by ascending scenario index so cut coefficients are reproducible.
void rank_scenarios(const std::vector<std::vector<double>>& D, int period,
                    std::vector<int>& desc, std::vector<int>& asc);

// Production upper bounds: M[i] = max_j (D[j][n-1] - cumulative before i).
std::vector<double> big_m(const std::vector<std::vector<double>>& D);

// Precomputed scenario statistics shared by formulations, cuts and
// separation. Periods and scenarios are 0-based throughout; ranks are
// 0-based too (rank 0 = largest cumulative demand).
class DemandStats {
 public:
  explicit DemandStats(const Instance& inst);

  int n() const { return n_; }
  int m() const { return m_; }
  int k() const { return k_; }

  const std::vector<std::vector<double>>& D() const { return D_; }

  // Cumulative demand of scenario j over the first len periods; len in
  // 0..n and cumd(j, 0) == 0. Stock cuts and big-M need the empty prefix.
  double cumd(int j, int len) const { return len == 0 ? 0.0 : D_[j][len - 1]; }

  // Cumulative demand of scenario j through period i (0-based).
  double cum(int j, int i) const { return D_[j][i]; }

  const std::vector<int>& sigma_desc(int i) const { return desc_[i]; }
  const std::vector<int>& sigma_asc(int i) const { return asc_[i]; }

  // Scenario with the r-th largest cumulative demand at period i.
  int ranked(int i, int r) const { return desc_[i][r]; }
  // Its value.
  double ranked_value(int i, int r) const { return D_[desc_[i][r]][i]; }

  // T*_i: the k scenarios with largest cumulative demand at period i.
  const std::vector<int>& tstar(int i) const { return tstar_[i]; }

  // Closing scenario: (k+1)-th largest at period i (rank k, 0-based).
  int closing(int i) const { return desc_[i][k_]; }
  double closing_value(int i) const { return D_[desc_[i][k_]][i]; }

  double M(int i) const { return M_[i]; }
  const std::vector<double>& M() const { return M_; }

 private:
  int n_, m_, k_;
  std::vector<std::vector<double>> D_;
  std::vector<std::vector<int>> desc_, asc_, tstar_;
  std::vector<double> M_;
};

}  // namespace cclot
