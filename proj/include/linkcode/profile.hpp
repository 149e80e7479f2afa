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

#ifndef LINKCODE_PROFILE_HPP_
#define LINKCODE_PROFILE_HPP_

// Decode profiles: for each message, the set of up-sets from which it can
// be decoded, packed as a bitmask over up-sets. Two candidates with the same
// profile have the same payoff in every scenario, so experiments evaluate
// profiles rather than codes or matroids. Limited to six links.

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "linkcode/code.hpp"
#include "linkcode/gf.hpp"
#include "linkcode/matroid.hpp"
#include "linkcode/model.hpp"

namespace linkcode {

inline constexpr int kMaxProfileLinks = 6;

struct DecodeProfile {
  int n = 0;
  std::vector<uint64_t> masks;  // one per message

  friend bool operator==(const DecodeProfile&, const DecodeProfile&) = default;
};

struct DecodeProfileHash {
  size_t operator()(const DecodeProfile& p) const {
    uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<uint64_t>(p.n);
    for (uint64_t m : p.masks) {
      h ^= m + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<size_t>(h);
  }
};

// For codes with at most one portion per message. Messages at or above
// code.num_messages() get an empty mask.
inline DecodeProfile ProfileOfCode(const Code& code, int num_messages) {
  const int n = code.num_links();
  if (n > kMaxProfileLinks) {
    throw InputError("decode profiles support at most " +
                     std::to_string(kMaxProfileLinks) + " links");
  }
  for (int j = 0; j < code.num_messages(); ++j) {
    if (code.portion_count(j) > 1) {
      throw InputError("decode profiles need single-portion messages");
    }
  }
  DecodeProfile p{n, std::vector<uint64_t>(num_messages, 0)};
  const PrimeField gf(code.field());
  std::vector<GfVector> columns;
  for (int i = 0; i < n; ++i) columns.push_back(code.column(i));
  for (uint32_t s = 1; s < (uint32_t{1} << n); ++s) {
    EchelonBasis basis(gf, code.total_portions());
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1u) basis.Insert(columns[i]);
    }
    for (int j = 0; j < code.num_messages(); ++j) {
      if (code.portion_count(j) == 1 && basis.UnitInSpan(code.coord({j, 1}))) {
        p.masks[j] |= uint64_t{1} << s;
      }
    }
  }
  return p;
}

inline DecodeProfile ProfileOfRank(const RankFunction& rf) {
  const GroundSet g = rf.ground;
  if (g.n > kMaxProfileLinks) {
    throw InputError("decode profiles support at most " +
                     std::to_string(kMaxProfileLinks) + " links");
  }
  DecodeProfile p{g.n, std::vector<uint64_t>(g.m, 0)};
  for (uint32_t s = 1; s < (uint32_t{1} << g.n); ++s) {
    for (int j = 0; j < g.m; ++j) {
      if (Decodable(rf, UpSet{s}, j)) p.masks[j] |= uint64_t{1} << s;
    }
  }
  return p;
}

// Link i of the result behaves like link perm[i] of p.
inline DecodeProfile PermuteProfileLinks(const DecodeProfile& p,
                                         std::span<const int> perm) {
  DecodeProfile out{p.n, std::vector<uint64_t>(p.masks.size(), 0)};
  for (uint32_t s = 1; s < (uint32_t{1} << p.n); ++s) {
    uint32_t src = 0;
    for (int i = 0; i < p.n; ++i) {
      if ((s >> i) & 1u) src |= uint32_t{1} << perm[i];
    }
    for (size_t j = 0; j < p.masks.size(); ++j) {
      if ((p.masks[j] >> src) & 1u) out.masks[j] |= uint64_t{1} << s;
    }
  }
  return out;
}

inline double MaskProbability(uint64_t mask, std::span<const double> dist) {
  double q = 0.0;
  while (mask) {
    q += dist[std::countr_zero(mask)];
    mask &= mask - 1;
  }
  return q;
}

inline double ProfilePayoff(const DecodeProfile& p,
                            std::span<const double> dist,
                            std::span<const double> worth) {
  double payoff = 0.0;
  for (size_t j = 0; j < p.masks.size(); ++j) {
    payoff += worth[j] * MaskProbability(p.masks[j], dist);
  }
  return payoff;
}

// Every message decodable from all links is decodable from a single link.
inline bool ProfileIsSystematic(const DecodeProfile& p) {
  const uint32_t full = (uint32_t{1} << p.n) - 1u;
  for (uint64_t mask : p.masks) {
    if (!((mask >> full) & 1u)) continue;
    bool direct = false;
    for (int i = 0; i < p.n && !direct; ++i) {
      direct = (mask >> (uint32_t{1} << i)) & 1u;
    }
    if (!direct) return false;
  }
  return true;
}

}  // namespace linkcode

#endif  // LINKCODE_PROFILE_HPP_
