// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LINKCODE_LP_HPP_
#define LINKCODE_LP_HPP_

// Timesharing among a library of codes:
//
//   maximize v'z  subject to  K z <= c,  L z <= s,  z >= 0
//
// where column k of K and L gives the link usage and message content of one
// unit of code k and v_k its expected payoff.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "linkcode/code.hpp"
#include "linkcode/error.hpp"
#include "linkcode/model.hpp"

namespace linkcode {

// Feasibility and reduced-cost tolerance, scaled by (1 + magnitude).
inline constexpr double kLpTolerance = 1e-9;
// Smallest pivot the simplex accepts.
inline constexpr double kPivotFloor = 1e-12;

struct CodeLibrary {
  FieldOrder field{2};
  std::vector<Code> entries;

  int size() const { return static_cast<int>(entries.size()); }
  int num_links() const { return entries.empty() ? 0 : entries[0].num_links(); }
};

inline CodeLibrary MakeCodeLibrary(FieldOrder field, std::vector<Code> codes) {
  if (codes.empty()) throw InputError("code library is empty");
  for (const Code& c : codes) {
    if (c.num_links() != codes[0].num_links()) {
      throw InputError("code \"" + FormatCode(c) + "\" has " +
                       std::to_string(c.num_links()) + " links; expected " +
                       std::to_string(codes[0].num_links()));
    }
    if (!(c.field() == field)) {
      throw InputError("code \"" + FormatCode(c) + "\" is over a different field");
    }
  }
  return CodeLibrary{field, std::move(codes)};
}

// The two-message, three-link library: for each of A and B the three
// single-link placements, the three two-link repetitions, the three-link
// repetition and (X1,X2,X1+X2); then (A,B,A+B).
inline CodeLibrary Build17CodeLibrary() {
  const FieldOrder f2(2);
  std::vector<Code> codes;
  for (const char* x : {"A", "B"}) {
    const std::string a(x);
    for (const std::string& text :
         {a + ",-,-", "-," + a + ",-", "-,-," + a, a + "," + a + ",-",
          a + ",-," + a, "-," + a + "," + a, a + "," + a + "," + a,
          a + "1," + a + "2," + a + "1+" + a + "2"}) {
      codes.push_back(ParseCode(text, f2));
    }
  }
  codes.push_back(ParseCode("A,B,A+B", f2));
  return MakeCodeLibrary(f2, std::move(codes));
}

using Matrix = std::vector<std::vector<double>>;

struct LPProblem {
  Matrix K;  // links x codes
  Matrix L;  // messages x codes
  std::vector<double> v;
  std::vector<double> c;
  std::vector<double> s;

  int num_codes() const { return static_cast<int>(v.size()); }
};

enum class LPStatus { kOptimal, kUnbounded, kInfeasible };

inline const char* LPStatusName(LPStatus s) {
  switch (s) {
    case LPStatus::kOptimal:
      return "optimal";
    case LPStatus::kUnbounded:
      return "unbounded-guard";
    case LPStatus::kInfeasible:
      return "infeasible-guard";
  }
  return "?";
}

struct LPSolution {
  LPStatus status = LPStatus::kOptimal;
  std::vector<double> z;
  double objective = 0.0;
  // Certificate: duals y for the rows of [K; L] and reduced costs
  // v_k - y'[K; L]_k, all <= tolerance at an optimum.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  int pivots = 0;
};

// One unit of code k uses one data unit on each link with a symbol and
// carries portion_count(j) units of message j.
inline LPProblem BuildLp(const CodeLibrary& library, const Scenario& scenario) {
  if (library.num_links() != scenario.num_links()) {
    throw InputError("library codes use " + std::to_string(library.num_links()) +
                     " links but the scenario has " +
                     std::to_string(scenario.num_links()));
  }
  const int n = scenario.num_links();
  const int m = scenario.num_messages();
  const int nc = library.size();
  Scenario unit = scenario;
  for (MessageSpec& msg : unit.messages) msg.size = 1.0;
  LPProblem lp;
  lp.K.assign(n, std::vector<double>(nc, 0.0));
  lp.L.assign(m, std::vector<double>(nc, 0.0));
  lp.v.resize(nc);
  for (int k = 0; k < nc; ++k) {
    const Code& code = library.entries[k];
    detail::CheckCodeFitsScenario(code, scenario);
    for (int i = 0; i < n; ++i) lp.K[i][k] = code.symbol(i).empty() ? 0.0 : 1.0;
    for (int j = 0; j < m; ++j) lp.L[j][k] = code.portion_count(j);
    lp.v[k] = CodePayoff(code, unit);
  }
  for (const LinkSpec& l : scenario.links) lp.c.push_back(l.capacity);
  for (const MessageSpec& msg : scenario.messages) lp.s.push_back(msg.size);
  return lp;
}

inline void ValidateLp(const LPProblem& lp) {
  const size_t nc = lp.v.size();
  if (lp.K.size() != lp.c.size() || lp.L.size() != lp.s.size()) {
    throw InputError("LP row counts do not match the bound vectors");
  }
  for (const auto* mat : {&lp.K, &lp.L}) {
    for (const auto& row : *mat) {
      if (row.size() != nc) throw InputError("LP matrix row has wrong length");
      for (double x : row) {
        if (!(x >= 0) || !std::isfinite(x)) {
          throw InputError("LP matrix entries must be finite and nonnegative");
        }
      }
    }
  }
  for (const auto* vec : {&lp.v, &lp.c, &lp.s}) {
    for (double x : *vec) {
      if (!(x >= 0) || !std::isfinite(x)) {
        throw InputError("LP vectors must be finite and nonnegative");
      }
    }
  }
}

namespace detail {

inline Matrix StackRows(const LPProblem& lp) {
  Matrix a = lp.K;
  a.insert(a.end(), lp.L.begin(), lp.L.end());
  return a;
}

inline double MaxAbs(const std::vector<double>& x) {
  double m = 0.0;
  for (double e : x) m = std::max(m, std::abs(e));
  return m;
}

}  // namespace detail

// Dense tableau simplex started from the slack basis (z = 0 is feasible
// because the bounds are nonnegative). Bland's rule prevents cycling.
inline LPSolution SolveLp(const LPProblem& lp) {
  ValidateLp(lp);
  const Matrix a = detail::StackRows(lp);
  std::vector<double> b = lp.c;
  b.insert(b.end(), lp.s.begin(), lp.s.end());
  const int rows = static_cast<int>(a.size());
  const int nc = lp.num_codes();
  const int cols = nc + rows;
  const double v_scale = 1.0 + detail::MaxAbs(lp.v);
  const double entering_tol = 1e-12 * v_scale;

  // tab[r] = [A | I | b]; basis[r] = column basic in row r.
  Matrix tab(rows, std::vector<double>(cols + 1, 0.0));
  std::vector<int> basis(rows);
  for (int r = 0; r < rows; ++r) {
    for (int k = 0; k < nc; ++k) tab[r][k] = a[r][k];
    tab[r][nc + r] = 1.0;
    tab[r][cols] = b[r];
    basis[r] = nc + r;
  }
  // Reduced costs of the objective, maximization form.
  std::vector<double> cost(cols, 0.0);
  for (int k = 0; k < nc; ++k) cost[k] = lp.v[k];
  std::vector<double> reduced = cost;

  LPSolution sol;
  const int max_pivots = 50 * (cols + 1) * (rows + 1) + 1000;
  while (true) {
    int enter = -1;
    for (int j = 0; j < cols; ++j) {
      if (reduced[j] > entering_tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;
    int leave = -1;
    double best_ratio = 0.0;
    for (int r = 0; r < rows; ++r) {
      const double piv = tab[r][enter];
      if (piv <= kPivotFloor) continue;
      const double ratio = tab[r][cols] / piv;
      if (leave < 0 || ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      bool tiny = false;
      for (int r = 0; r < rows; ++r) tiny = tiny || tab[r][enter] > 0.0;
      if (tiny) {
        throw NumericalError("simplex: all candidate pivots below " +
                             std::to_string(kPivotFloor));
      }
      sol.status = LPStatus::kUnbounded;
      break;
    }
    if (++sol.pivots > max_pivots) {
      throw NumericalError("simplex: pivot limit exceeded");
    }
    std::vector<double>& prow = tab[leave];
    const double piv = prow[enter];
    for (double& x : prow) x /= piv;
    prow[enter] = 1.0;
    for (int r = 0; r < rows; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      if (f == 0.0) continue;
      for (int j = 0; j <= cols; ++j) tab[r][j] -= f * prow[j];
      tab[r][enter] = 0.0;
      if (tab[r][cols] < 0.0 && tab[r][cols] > -1e-13) tab[r][cols] = 0.0;
    }
    const double f = reduced[enter];
    for (int j = 0; j < cols; ++j) reduced[j] -= f * prow[j];
    reduced[enter] = 0.0;
    basis[leave] = enter;
  }

  sol.z.assign(nc, 0.0);
  for (int r = 0; r < rows; ++r) {
    if (basis[r] < nc) sol.z[basis[r]] = std::max(0.0, tab[r][cols]);
  }
  sol.objective = 0.0;
  for (int k = 0; k < nc; ++k) sol.objective += lp.v[k] * sol.z[k];
  // Slack column r has cost 0 and column e_r, so its reduced cost is -y_r.
  sol.duals.resize(rows);
  for (int r = 0; r < rows; ++r) sol.duals[r] = -reduced[nc + r];
  sol.reduced_costs.resize(nc);
  for (int k = 0; k < nc; ++k) {
    double yk = 0.0;
    for (int r = 0; r < rows; ++r) yk += sol.duals[r] * a[r][k];
    sol.reduced_costs[k] = lp.v[k] - yk;
  }
  if (sol.status != LPStatus::kOptimal) return sol;

  // Certificate: primal feasibility, dual feasibility, zero duality gap.
  for (int r = 0; r < rows; ++r) {
    double lhs = 0.0;
    for (int k = 0; k < nc; ++k) lhs += a[r][k] * sol.z[k];
    if (lhs > b[r] + kLpTolerance * (1.0 + std::abs(b[r]))) {
      throw NumericalError("simplex: solution violates row " +
                           std::to_string(r));
    }
  }
  double dual_obj = 0.0;
  for (int r = 0; r < rows; ++r) {
    if (sol.duals[r] < -kLpTolerance * v_scale) {
      throw NumericalError("simplex: negative dual value");
    }
    dual_obj += sol.duals[r] * b[r];
  }
  for (double d : sol.reduced_costs) {
    if (d > kLpTolerance * v_scale) {
      throw NumericalError("simplex: positive reduced cost at termination");
    }
  }
  if (std::abs(dual_obj - sol.objective) >
      kLpTolerance * (1.0 + std::abs(sol.objective))) {
    throw NumericalError("simplex: duality gap at termination");
  }
  return sol;
}

// Codes with z_k > tol, largest z first.
inline std::vector<int> UsedCodes(const LPSolution& sol, double tol) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(sol.z.size()); ++k) {
    if (sol.z[k] > tol) out.push_back(k);
  }
  std::stable_sort(out.begin(), out.end(),
                   [&](int a, int b) { return sol.z[a] > sol.z[b]; });
  return out;
}

}  // namespace linkcode

#endif  // LINKCODE_LP_HPP_
