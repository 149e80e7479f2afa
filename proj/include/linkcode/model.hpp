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

#ifndef LINKCODE_MODEL_HPP_
#define LINKCODE_MODEL_HPP_

// Problem instances: parallel links that are either up for the whole
// attempt or down, and messages with a size and a worth per unit size.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "linkcode/error.hpp"

namespace linkcode {

inline constexpr int kMaxLinks = 24;

struct LinkSpec {
  double capacity = 1.0;
  double outage_prob = 0.0;

  double success_prob() const { return 1.0 - outage_prob; }

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

struct MessageSpec {
  double size = 1.0;
  double worth_per_unit = 1.0;

  friend bool operator==(const MessageSpec&, const MessageSpec&) = default;
};

struct Scenario {
  std::vector<LinkSpec> links;
  std::vector<MessageSpec> messages;

  int num_links() const { return static_cast<int>(links.size()); }
  int num_messages() const { return static_cast<int>(messages.size()); }

  std::vector<double> success_probs() const {
    std::vector<double> out;
    out.reserve(links.size());
    for (const LinkSpec& l : links) out.push_back(l.success_prob());
    return out;
  }

  std::vector<double> worths() const {
    std::vector<double> out;
    out.reserve(messages.size());
    for (const MessageSpec& m : messages) out.push_back(m.worth_per_unit);
    return out;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// The exact set of links that are up during one attempt. Bit i set means
// link i is working.
struct UpSet {
  uint32_t bits = 0;

  bool contains(int link) const { return (bits >> link) & 1u; }
  int size() const { return std::popcount(bits); }
  bool subset_of(UpSet other) const { return (bits & ~other.bits) == 0; }

  static UpSet Full(int num_links) {
    return UpSet{num_links >= 32 ? ~0u : ((1u << num_links) - 1u)};
  }
  static UpSet Of(std::initializer_list<int> links) {
    UpSet s;
    for (int l : links) s.bits |= 1u << l;
    return s;
  }

  friend bool operator==(UpSet, UpSet) = default;
};

// Throws InputError describing the first violated invariant.
inline Scenario ValidateScenario(Scenario raw) {
  if (raw.links.empty()) throw InputError("scenario has no links");
  if (raw.messages.empty()) throw InputError("scenario has no messages");
  if (raw.num_links() > kMaxLinks) {
    throw InputError("scenario has " + std::to_string(raw.num_links()) +
                     " links; at most " + std::to_string(kMaxLinks) +
                     " are supported");
  }
  for (int i = 0; i < raw.num_links(); ++i) {
    const LinkSpec& l = raw.links[i];
    if (!std::isfinite(l.capacity) || l.capacity < 0) {
      throw InputError("link " + std::to_string(i) +
                       ": capacity must be a finite nonnegative number");
    }
    if (!(l.outage_prob >= 0.0 && l.outage_prob <= 1.0)) {
      throw InputError("link " + std::to_string(i) +
                       ": outage_prob must lie in [0, 1]");
    }
  }
  for (int j = 0; j < raw.num_messages(); ++j) {
    const MessageSpec& m = raw.messages[j];
    if (!std::isfinite(m.size) || m.size < 0) {
      throw InputError("message " + std::to_string(j) +
                       ": size must be a finite nonnegative number");
    }
    if (!std::isfinite(m.worth_per_unit) || m.worth_per_unit < 0) {
      throw InputError("message " + std::to_string(j) +
                       ": worth must be a finite nonnegative number");
    }
  }
  return raw;
}

// Probability that exactly the links in `up` are working, given
// per-link success probabilities and independent failures.
inline double UpSetProb(std::span<const double> success, UpSet up) {
  double p = 1.0;
  for (size_t i = 0; i < success.size(); ++i) {
    p *= up.contains(static_cast<int>(i)) ? success[i] : 1.0 - success[i];
  }
  return p;
}

inline double UpSetProb(const Scenario& scenario, UpSet up) {
  return UpSetProb(scenario.success_probs(), up);
}

// Probabilities of all 2^N up-sets, indexed by bitmask.
inline std::vector<double> UpSetDistribution(std::span<const double> success) {
  const size_t n = success.size();
  std::vector<double> dist(size_t{1} << n);
  dist[0] = 1.0;
  // Extends the distribution one link at a time.
  for (size_t i = 0; i < n; ++i) {
    const size_t half = size_t{1} << i;
    for (size_t s = 0; s < half; ++s) {
      dist[s | half] = dist[s] * success[i];
      dist[s] *= 1.0 - success[i];
    }
  }
  return dist;
}

struct CanonicalScenario {
  Scenario scenario;
  // link_order[k] is the original index of the link now at position k;
  // likewise for messages.
  std::vector<int> link_order;
  std::vector<int> message_order;
};

// Links by increasing outage probability, messages by decreasing worth.
// Ties keep their original relative order.
inline CanonicalScenario CanonicalOrder(const Scenario& scenario) {
  CanonicalScenario out;
  out.link_order.resize(scenario.links.size());
  std::iota(out.link_order.begin(), out.link_order.end(), 0);
  std::stable_sort(out.link_order.begin(), out.link_order.end(),
                   [&](int a, int b) {
                     return scenario.links[a].outage_prob <
                            scenario.links[b].outage_prob;
                   });
  out.message_order.resize(scenario.messages.size());
  std::iota(out.message_order.begin(), out.message_order.end(), 0);
  std::stable_sort(out.message_order.begin(), out.message_order.end(),
                   [&](int a, int b) {
                     return scenario.messages[a].worth_per_unit >
                            scenario.messages[b].worth_per_unit;
                   });
  for (int i : out.link_order) out.scenario.links.push_back(scenario.links[i]);
  for (int j : out.message_order) {
    out.scenario.messages.push_back(scenario.messages[j]);
  }
  return out;
}

// Keeps only the listed links, in the given order.
inline Scenario RestrictLinks(const Scenario& scenario,
                              std::span<const int> keep) {
  Scenario out;
  out.messages = scenario.messages;
  for (int i : keep) out.links.push_back(scenario.links.at(i));
  return out;
}

}  // namespace linkcode

#endif  // LINKCODE_MODEL_HPP_
