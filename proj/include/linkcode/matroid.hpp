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

#ifndef LINKCODE_MATROID_HPP_
#define LINKCODE_MATROID_HPP_

// Matroid rank functions on the ground set U = U1 ∪ U2, where U1 holds the
// message elements and U2 the link elements. A code induces such a function
// through the ranks of its columns; conversely every rank function fixes
// which link subsets decode which messages, hence the payoff.
//
// Subsets are bitmasks: messages occupy bits 0..m-1 and links m..m+n-1.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "linkcode/error.hpp"
#include "linkcode/model.hpp"

namespace linkcode {

inline constexpr int kMaxGroundSize = 16;

struct GroundSet {
  int m = 1;  // message elements
  int n = 1;  // link elements

  int size() const { return m + n; }
  uint32_t num_subsets() const { return uint32_t{1} << size(); }
  uint32_t messages_mask() const { return (uint32_t{1} << m) - 1u; }
  uint32_t links_mask() const { return ((uint32_t{1} << n) - 1u) << m; }
  uint32_t message_bit(int j) const { return uint32_t{1} << j; }
  uint32_t link_bit(int i) const { return uint32_t{1} << (m + i); }
  uint32_t links_of(UpSet s) const { return s.bits << m; }

  friend bool operator==(GroundSet, GroundSet) = default;
};

inline GroundSet MakeGroundSet(int m, int n) {
  if (m < 1 || n < 1 || m + n > kMaxGroundSize) {
    throw InputError("ground set needs m >= 1, n >= 1, m + n <= " +
                     std::to_string(kMaxGroundSize) + " (got m=" +
                     std::to_string(m) + ", n=" + std::to_string(n) + ")");
  }
  return GroundSet{m, n};
}

struct RankFunction {
  GroundSet ground;
  std::vector<uint8_t> ranks;  // indexed by subset bitmask

  int operator()(uint32_t subset) const { return ranks[subset]; }

  friend bool operator==(const RankFunction&, const RankFunction&) = default;
  friend auto operator<=>(const RankFunction& a, const RankFunction& b) {
    return a.ranks <=> b.ranks;
  }
};

struct RankViolation {
  std::string rule;  // "R1", "R2", "R3", "independent-messages", ...
  uint32_t first = 0;
  uint32_t second = 0;
};

struct RankReport {
  std::vector<RankViolation> violations;  // at most max_witnesses kept
  long long total_violations = 0;

  bool ok() const { return total_violations == 0; }
};

// Checks R1 (0 <= r(S) <= |S|), R2 on covering pairs, R3 on every pair of
// subsets, and the constraints tying the matroid to a code: messages are
// independent, each link has rank 1, and U1 spans everything.
inline RankReport ValidateRank(const RankFunction& rf,
                               size_t max_witnesses = 64) {
  const GroundSet g = rf.ground;
  const uint32_t total = g.num_subsets();
  if (rf.ranks.size() != total) {
    throw InputError("rank table has " + std::to_string(rf.ranks.size()) +
                     " entries; expected " + std::to_string(total));
  }
  RankReport report;
  auto flag = [&](const char* rule, uint32_t a, uint32_t b) {
    ++report.total_violations;
    if (report.violations.size() < max_witnesses) {
      report.violations.push_back({rule, a, b});
    }
  };

  for (uint32_t s = 0; s < total; ++s) {
    const int r = rf(s);
    if (r > std::popcount(s)) flag("R1", s, s);
    if (r > g.m) flag("max-rank", s, s);
    for (int e = 0; e < g.size(); ++e) {
      const uint32_t bit = uint32_t{1} << e;
      if (!(s & bit) && rf(s) > rf(s | bit)) flag("R2", s, s | bit);
    }
    if ((s & ~g.messages_mask()) == 0 && r != std::popcount(s)) {
      flag("independent-messages", s, s);
    }
    if ((s & g.messages_mask()) == g.messages_mask() && r != g.m) {
      flag("messages-span", s, s);
    }
  }
  for (int i = 0; i < g.n; ++i) {
    if (rf(g.link_bit(i)) != 1) flag("unit-link", g.link_bit(i), 0);
  }
  for (uint32_t a = 0; a < total; ++a) {
    for (uint32_t b = a + 1; b < total; ++b) {
      if (rf(a | b) + rf(a & b) > rf(a) + rf(b)) flag("R3", a, b);
    }
  }
  return report;
}

// Subsets in backtracking order: by cardinality, then by bitmask.
inline std::vector<uint32_t> SubsetOrder(GroundSet g) {
  std::vector<uint32_t> order(g.num_subsets());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(), [](uint32_t a, uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  return order;
}

// Relabels links: link i of the result is link perm[i] of rf.
inline RankFunction PermuteLinks(const RankFunction& rf,
                                 std::span<const int> perm) {
  const GroundSet g = rf.ground;
  RankFunction out{g, std::vector<uint8_t>(g.num_subsets())};
  for (uint32_t s = 0; s < g.num_subsets(); ++s) {
    uint32_t src = s & g.messages_mask();
    for (int i = 0; i < g.n; ++i) {
      if (s & g.link_bit(i)) src |= g.link_bit(perm[i]);
    }
    out.ranks[s] = rf.ranks[src];
  }
  return out;
}

// True if no link relabelling gives a lexicographically smaller table.
inline bool IsCanonicalUnderLinkPermutation(const RankFunction& rf) {
  std::vector<int> perm(rf.ground.n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    if (PermuteLinks(rf, perm).ranks < rf.ranks) return false;
  }
  return true;
}

inline RankFunction CanonicalUnderLinkPermutation(const RankFunction& rf) {
  RankFunction best = rf;
  std::vector<int> perm(rf.ground.n);
  std::iota(perm.begin(), perm.end(), 0);
  while (std::next_permutation(perm.begin(), perm.end())) {
    RankFunction p = PermuteLinks(rf, perm);
    if (p.ranks < best.ranks) best = std::move(p);
  }
  return best;
}

struct EnumerateOptions {
  bool dedup_link_permutations = false;
  bool verify = true;  // re-check every emitted function with ValidateRank
  int jobs = 1;
};

// Depth-first assignment of rank values in SubsetOrder. Values forced by the
// domain constraints are fixed; free values range over
// [max_x r(S-x), min(|S|, m, min_x r(S-x) + 1)], and each assignment is
// checked against r(S) + r(S-x-y) <= r(S-x) + r(S-y) for all x, y in S. That
// local inequality over all subsets is equivalent to R3, so every complete
// assignment reached is a valid rank function.
class RankEnumerator {
 public:
  using Sink = std::function<void(const RankFunction&)>;

  RankEnumerator(int m, int n, EnumerateOptions options = {})
      : ground_(MakeGroundSet(m, n)),
        options_(options),
        order_(SubsetOrder(ground_)),
        table_(ground_.num_subsets(), 0) {}

  const GroundSet& ground() const { return ground_; }

  // Streams every valid rank function in lexicographic order of the
  // assignment sequence. Returns the number emitted.
  long long Run(const Sink& sink) {
    if (options_.jobs <= 1) {
      emitted_ = 0;
      Assign(0, sink);
      return emitted_;
    }
    return RunParallel(sink);
  }

  std::vector<RankFunction> Collect() {
    std::vector<RankFunction> out;
    Run([&](const RankFunction& rf) { out.push_back(rf); });
    return out;
  }

 private:
  // Fixed value, or -1 if the subset is free.
  int Forced(uint32_t s) const {
    const uint32_t msgs = ground_.messages_mask();
    if ((s & ~msgs) == 0) return std::popcount(s);
    if ((s & msgs) == msgs) return ground_.m;
    if (std::popcount(s) == 1) return 1;
    return -1;
  }

  bool Consistent(uint32_t s, int r) const {
    for (int x = 0; x < ground_.size(); ++x) {
      const uint32_t bx = uint32_t{1} << x;
      if (!(s & bx)) continue;
      const int rx = table_[s ^ bx];
      if (r < rx || r > rx + 1) return false;
      for (int y = x + 1; y < ground_.size(); ++y) {
        const uint32_t by = uint32_t{1} << y;
        if (!(s & by)) continue;
        if (r + table_[s ^ bx ^ by] > rx + table_[s ^ by]) return false;
      }
    }
    return r <= std::popcount(s) && r <= ground_.m;
  }

  void Emit(const Sink& sink) {
    RankFunction rf{ground_, table_};
    if (options_.dedup_link_permutations &&
        !IsCanonicalUnderLinkPermutation(rf)) {
      return;
    }
    if (options_.verify && !ValidateRank(rf, 1).ok()) {
      throw std::logic_error("enumerator produced an invalid rank function");
    }
    ++emitted_;
    sink(rf);
  }

  void Assign(size_t pos, const Sink& sink) {
    if (pos == order_.size()) {
      Emit(sink);
      return;
    }
    const uint32_t s = order_[pos];
    const int forced = Forced(s);
    const int lo = forced >= 0 ? forced : 0;
    const int hi = forced >= 0 ? forced : ground_.m;
    for (int r = lo; r <= hi; ++r) {
      if (s != 0 && !Consistent(s, r)) continue;
      table_[s] = static_cast<uint8_t>(r);
      Assign(pos + 1, sink);
    }
  }

  // Collects the consistent partial assignments of the first `depth`
  // positions, in the order the serial search would visit them.
  void Prefixes(size_t pos, size_t depth,
                std::vector<std::vector<uint8_t>>& out) {
    if (pos == depth) {
      out.push_back(table_);
      return;
    }
    const uint32_t s = order_[pos];
    const int forced = Forced(s);
    const int lo = forced >= 0 ? forced : 0;
    const int hi = forced >= 0 ? forced : ground_.m;
    for (int r = lo; r <= hi; ++r) {
      if (s != 0 && !Consistent(s, r)) continue;
      table_[s] = static_cast<uint8_t>(r);
      Prefixes(pos + 1, depth, out);
    }
  }

  long long RunParallel(const Sink& sink) {
    // Splits after the singletons and pairs, which is where the free
    // choices start branching.
    const size_t depth =
        std::min(order_.size(),
                 size_t{1} + ground_.size() +
                     ground_.size() * (ground_.size() - 1) / 2);
    std::vector<std::vector<uint8_t>> prefixes;
    Prefixes(0, depth, prefixes);
    std::vector<std::vector<RankFunction>> results(prefixes.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
      RankEnumerator local(ground_.m, ground_.n, options_);
      for (size_t k = next++; k < prefixes.size(); k = next++) {
        local.table_ = prefixes[k];
        local.Assign(depth, [&](const RankFunction& rf) {
          results[k].push_back(rf);
        });
      }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < options_.jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    long long count = 0;
    for (const auto& part : results) {
      for (const RankFunction& rf : part) {
        ++count;
        sink(rf);
      }
    }
    return count;
  }

  GroundSet ground_;
  EnumerateOptions options_;
  std::vector<uint32_t> order_;
  std::vector<uint8_t> table_;
  long long emitted_ = 0;
};

inline std::vector<RankFunction> EnumerateRankFunctions(
    int m, int n, EnumerateOptions options = {}) {
  return RankEnumerator(m, n, options).Collect();
}

// Message j is decodable from the links in s iff adding it does not raise
// the rank.
inline bool Decodable(const RankFunction& rf, UpSet s, int j) {
  const uint32_t links = rf.ground.links_of(s);
  return rf(links) == rf(links | rf.ground.message_bit(j));
}

// Expected worth decoded, with element_worth[j] the worth of message
// element j and success[i] the success probability of link i.
inline double MatroidPayoff(const RankFunction& rf,
                            std::span<const double> success,
                            std::span<const double> element_worth) {
  const GroundSet g = rf.ground;
  if (static_cast<int>(success.size()) != g.n ||
      static_cast<int>(element_worth.size()) != g.m) {
    throw InputError("matroid on " + std::to_string(g.m) + " messages and " +
                     std::to_string(g.n) + " links does not match a scenario "
                     "with " + std::to_string(element_worth.size()) +
                     " messages and " + std::to_string(success.size()) +
                     " links");
  }
  const std::vector<double> dist = UpSetDistribution(success);
  double payoff = 0.0;
  for (uint32_t s = 1; s < (uint32_t{1} << g.n); ++s) {
    double worth = 0.0;
    for (int j = 0; j < g.m; ++j) {
      if (Decodable(rf, UpSet{s}, j)) worth += element_worth[j];
    }
    payoff += dist[s] * worth;
  }
  return payoff;
}

inline double MatroidPayoff(const RankFunction& rf, const Scenario& scenario) {
  const std::vector<double> success = scenario.success_probs();
  const std::vector<double> worth = scenario.worths();
  return MatroidPayoff(rf, success, worth);
}

// Messages whose element lies in the closure of all links.
inline std::vector<int> MessagesCovered(const RankFunction& rf) {
  std::vector<int> out;
  const uint32_t links = rf.ground.links_mask();
  for (int j = 0; j < rf.ground.m; ++j) {
    if (rf(links) == rf(links | rf.ground.message_bit(j))) out.push_back(j);
  }
  return out;
}

// Every covered message is parallel to some single link.
inline bool IsSystematicMatroid(const RankFunction& rf) {
  for (int j : MessagesCovered(rf)) {
    bool direct = false;
    for (int i = 0; i < rf.ground.n && !direct; ++i) {
      const uint32_t li = rf.ground.link_bit(i);
      direct = rf(li) == 1 && rf(li | rf.ground.message_bit(j)) == 1;
    }
    if (!direct) return false;
  }
  return true;
}

}  // namespace linkcode

#endif  // LINKCODE_MATROID_HPP_
