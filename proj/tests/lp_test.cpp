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

#include "linkcode/lp.hpp"

#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace linkcode {
namespace {

const FieldOrder kF2(2);

std::vector<double> Column(const Matrix& m, int k) {
  std::vector<double> out;
  for (const auto& row : m) out.push_back(row[k]);
  return out;
}

void ExpectCertified(const LPProblem& lp, const LPSolution& sol) {
  ASSERT_EQ(sol.status, LPStatus::kOptimal);
  const double vs = 1.0 +
                    *std::max_element(lp.v.begin(), lp.v.end());
  for (double z : sol.z) EXPECT_GE(z, -1e-12);
  for (size_t i = 0; i < lp.K.size(); ++i) {
    double lhs = 0;
    for (size_t k = 0; k < sol.z.size(); ++k) lhs += lp.K[i][k] * sol.z[k];
    EXPECT_LE(lhs, lp.c[i] + 1e-9 * (1 + std::abs(lp.c[i])));
  }
  for (size_t j = 0; j < lp.L.size(); ++j) {
    double lhs = 0;
    for (size_t k = 0; k < sol.z.size(); ++k) lhs += lp.L[j][k] * sol.z[k];
    EXPECT_LE(lhs, lp.s[j] + 1e-9 * (1 + std::abs(lp.s[j])));
  }
  double obj = 0;
  for (size_t k = 0; k < sol.z.size(); ++k) obj += lp.v[k] * sol.z[k];
  EXPECT_NEAR(obj, sol.objective, 1e-9 * (1 + std::abs(obj)));
  for (double d : sol.reduced_costs) EXPECT_LE(d, 1e-9 * vs);
}

LPProblem RandomSmallLp(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int nc = 1 + static_cast<int>(rng() % 3);
  const int rows = 1 + static_cast<int>(rng() % 4);
  const int n = 1 + static_cast<int>(rng() % rows);
  LPProblem lp;
  lp.K.assign(n, std::vector<double>(nc));
  lp.L.assign(rows - n, std::vector<double>(nc));
  for (auto* mat : {&lp.K, &lp.L}) {
    for (auto& row : *mat) {
      for (double& x : row) x = rng() % 4 == 0 ? 0.0 : 2.0 * u(rng);
    }
  }
  // Keep every column bounded by at least one row.
  for (int k = 0; k < nc; ++k) lp.K[0][k] = std::max(lp.K[0][k], 0.1);
  for (int k = 0; k < nc; ++k) lp.v.push_back(5.0 * u(rng));
  for (int i = 0; i < n; ++i) lp.c.push_back(rng() % 5 == 0 ? 0.0 : 2.0 * u(rng));
  for (int j = 0; j < rows - n; ++j) lp.s.push_back(2.0 * u(rng));
  return lp;
}

TEST(Library17Test, ContentsAndColumns) {
  const CodeLibrary lib = Build17CodeLibrary();
  ASSERT_EQ(lib.size(), 17);
  EXPECT_EQ(FormatCode(lib.entries[5]), "-,A,A");
  EXPECT_EQ(FormatCode(lib.entries[7]), "A1,A2,A1+A2");
  EXPECT_EQ(FormatCode(lib.entries[13]), "-,B,B");
  EXPECT_EQ(FormatCode(lib.entries[16]), "A,B,A+B");
  std::set<std::string> distinct;
  for (const Code& c : lib.entries) distinct.insert(FormatCode(c));
  EXPECT_EQ(distinct.size(), 17u);

  const Scenario s{{{1, 0.1}, {1, 0.2}, {1, 0.3}}, {{1, 1}, {1, 1}}};
  const LPProblem lp = BuildLp(lib, s);
  EXPECT_EQ(Column(lp.K, 16), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(Column(lp.L, 16), (std::vector<double>{1, 1}));
  EXPECT_EQ(Column(lp.K, 7), (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(Column(lp.L, 7), (std::vector<double>{2, 0}));
  EXPECT_EQ(Column(lp.K, 12), (std::vector<double>{1, 0, 1}));
  EXPECT_EQ(Column(lp.L, 12), (std::vector<double>{0, 1}));
  EXPECT_NEAR(lp.v[3], 0.9 + 0.8 - 0.9 * 0.8, 1e-15);
  EXPECT_NEAR(lp.v[5], 0.94, 1e-15);
}

TEST(Library17Test, ClosedFormPayoffs) {
  std::mt19937_64 rng(61);
  const CodeLibrary lib = Build17CodeLibrary();
  for (int trial = 0; trial < 100; ++trial) {
    const Scenario s = testing::RandomUnitScenario(rng, 2, 3);
    const LPProblem lp = BuildLp(lib, s);
    const std::vector<double> expect = testing::ClosedForm17(
        s.messages[0].worth_per_unit, s.messages[1].worth_per_unit,
        s.success_probs());
    for (int k = 0; k < 17; ++k) EXPECT_NEAR(lp.v[k], expect[k], 1e-12) << k;
  }
}

TEST(SolveLpTest, SingleLink) {
  const CodeLibrary lib = MakeCodeLibrary(kF2, {ParseCode("A", kF2)});
  const Scenario s{{{1, 0.4}}, {{2, 5}}};
  const LPSolution sol = SolveLp(BuildLp(lib, s));
  EXPECT_EQ(sol.status, LPStatus::kOptimal);
  EXPECT_NEAR(sol.z[0], 1.0, 1e-12);
  EXPECT_NEAR(sol.objective, 3.0, 1e-12);
}

TEST(SolveLpTest, ZeroCapacity) {
  const CodeLibrary lib = Build17CodeLibrary();
  const Scenario s{{{0, 0.1}, {0, 0.2}, {0, 0.3}}, {{1, 2}, {1, 1}}};
  const LPSolution sol = SolveLp(BuildLp(lib, s));
  EXPECT_EQ(sol.objective, 0.0);
  EXPECT_TRUE(UsedCodes(sol, 1e-12).empty());
}

TEST(SolveLpTest, OneWorkingCapacityLink) {
  const CodeLibrary lib = Build17CodeLibrary();
  const Scenario s{{{1, 0.1}, {0, 0.2}, {0, 0.3}}, {{1, 2}, {1, 1}}};
  const LPProblem lp = BuildLp(lib, s);
  // Oracle: only codes avoiding links 2 and 3 can be used, i.e. (A,-,-) and
  // (B,-,-); vertex enumeration on that two-column LP.
  LPProblem sub;
  sub.K = {{lp.K[0][0], lp.K[0][8]}, {lp.K[1][0], lp.K[1][8]},
           {lp.K[2][0], lp.K[2][8]}};
  sub.L = {{lp.L[0][0], lp.L[0][8]}, {lp.L[1][0], lp.L[1][8]}};
  sub.v = {lp.v[0], lp.v[8]};
  sub.c = lp.c;
  sub.s = lp.s;
  const double oracle = testing::VertexEnumerationOptimum(sub);
  EXPECT_NEAR(oracle, 1.8, 1e-12);
  const LPSolution sol = SolveLp(lp);
  EXPECT_NEAR(sol.objective, oracle, 1e-12);
  EXPECT_NEAR(sol.z[0], 1.0, 1e-12);
  EXPECT_EQ(UsedCodes(sol, 1e-6), (std::vector<int>{0}));
}

TEST(SolveLpTest, MatchesVertexEnumeration) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 1000; ++trial) {
    const LPProblem lp = RandomSmallLp(rng);
    const LPSolution sol = SolveLp(lp);
    const double oracle = testing::VertexEnumerationOptimum(lp);
    EXPECT_NEAR(sol.objective, oracle, 1e-9 * (1 + std::abs(oracle)));
    ExpectCertified(lp, sol);
  }
}

TEST(SolveLpTest, ScalingInvariance) {
  std::mt19937_64 rng(71);
  const CodeLibrary lib = Build17CodeLibrary();
  for (int trial = 0; trial < 100; ++trial) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Scenario s = testing::RandomUnitScenario(rng, 2, 3);
    for (LinkSpec& l : s.links) l.capacity = 2 * (1 - u(rng));
    for (MessageSpec& m : s.messages) m.size = 2 * (1 - u(rng));
    const LPProblem lp = BuildLp(lib, s);
    const LPSolution base = SolveLp(lp);
    ExpectCertified(lp, base);
    for (double gamma : {0.5, 2.0, 10.0}) {
      LPProblem scaled = lp;
      const int k = static_cast<int>(rng() % 17);
      for (auto& row : scaled.K) row[k] *= gamma;
      for (auto& row : scaled.L) row[k] *= gamma;
      scaled.v[k] *= gamma;
      const LPSolution sol = SolveLp(scaled);
      EXPECT_NEAR(sol.objective, base.objective,
                  1e-9 * (1 + std::abs(base.objective)));
      ExpectCertified(scaled, sol);
    }
  }
}

TEST(SolveLpTest, DuplicateColumnsAndGuards) {
  LPProblem lp;
  lp.K = {{1, 1}};
  lp.L = {{1, 1}};
  lp.v = {2, 2};
  lp.c = {1};
  lp.s = {3};
  const LPSolution sol = SolveLp(lp);
  EXPECT_NEAR(sol.objective, 2.0, 1e-12);

  LPProblem open;
  open.K = {{0}};
  open.L = {{0}};
  open.v = {1};
  open.c = {1};
  open.s = {1};
  EXPECT_EQ(SolveLp(open).status, LPStatus::kUnbounded);

  LPProblem bad = lp;
  bad.c = {-1};
  EXPECT_THROW(SolveLp(bad), InputError);
}

TEST(UsedCodesTest, Ordering) {
  LPSolution sol;
  sol.z = {0.1, 0.0, 0.7, 1e-8};
  EXPECT_EQ(UsedCodes(sol, 1e-6), (std::vector<int>{2, 0}));
  sol.z.assign(4, 0.0);
  EXPECT_TRUE(UsedCodes(sol, 1e-6).empty());
  sol.z = {1.0, 0.0};
  EXPECT_EQ(UsedCodes(sol, 1e-6), (std::vector<int>{0}));
}

TEST(BuildLpTest, DimensionMismatch) {
  const Scenario s{{{1, 0.1}, {1, 0.2}}, {{1, 1}, {1, 1}}};
  EXPECT_THROW(BuildLp(Build17CodeLibrary(), s), InputError);
  EXPECT_THROW(MakeCodeLibrary(kF2, {}), InputError);
  EXPECT_THROW(
      MakeCodeLibrary(kF2, {ParseCode("A,B", kF2), ParseCode("A", kF2)}),
      InputError);
}

}  // namespace
}  // namespace linkcode
