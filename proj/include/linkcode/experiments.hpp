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

#ifndef LINKCODE_EXPERIMENTS_HPP_
#define LINKCODE_EXPERIMENTS_HPP_

// Seeded randomized experiments: LP code coverage on the 17-code library,
// the systematic-code conjecture test, the non-systematic counterexample
// hunt, and Monte Carlo checks of the exact payoffs.
//
// Every trial draws from its own generator seeded by (seed, trial index),
// so results do not depend on how trials are spread over threads.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "linkcode/code.hpp"
#include "linkcode/error.hpp"
#include "linkcode/lp.hpp"
#include "linkcode/matroid.hpp"
#include "linkcode/model.hpp"
#include "linkcode/profile.hpp"

namespace linkcode {

// Relative tolerance for treating two payoffs as tied.
inline constexpr double kTieTolerance = 1e-9;

struct TrialConfig {
  int m = 3;
  int n = 4;
  long long trials = 1000;
  uint64_t seed = 1;
  double worth_low = 1.0;
  double worth_high = 100.0;
  std::vector<int> fields = {2};
  // Coverage experiment only: capacities and sizes uniform on (0, high].
  double capacity_high = 2.0;
  double size_high = 2.0;
  int jobs = 1;
};

inline void ValidateTrialConfig(const TrialConfig& c) {
  if (c.trials < 1) throw InputError("trials must be at least 1");
  if (!(c.worth_low <= c.worth_high) || c.worth_low < 0) {
    throw InputError("worth range must satisfy 0 <= low <= high");
  }
  if (c.m < 1 || c.n < 1) throw InputError("m and n must be positive");
  if (c.fields.empty()) throw InputError("at least one field is required");
  for (int q : c.fields) FieldOrder{q};
  if (c.capacity_high < 0 || c.size_high < 0) {
    throw InputError("capacity and size ranges must be nonnegative");
  }
  if (c.jobs < 1) throw InputError("jobs must be at least 1");
}

// SplitMix64 step, used to derive per-trial seeds.
inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::mt19937_64 TrialRng(uint64_t seed, uint64_t trial) {
  return std::mt19937_64(SplitMix64(SplitMix64(seed) ^ SplitMix64(~trial)));
}

namespace detail {

inline double Uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Uniform on (0, 1).
inline double UniformOpen(std::mt19937_64& rng) {
  double u = 0.0;
  while (u == 0.0) u = Uniform01(rng);
  return u;
}

// Runs body(trial) for every trial on `jobs` threads.
template <typename Body>
void ForEachTrial(long long trials, int jobs, Body&& body) {
  if (jobs <= 1) {
    for (long long t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<long long> next{0};
  std::vector<std::thread> threads;
  for (int k = 0; k < jobs; ++k) {
    threads.emplace_back([&] {
      for (long long t = next++; t < trials; t = next++) body(t);
    });
  }
  for (std::thread& th : threads) th.join();
}

}  // namespace detail

// Unit sizes and capacities; outage probabilities uniform on (0,1), worths
// uniform on [worth_low, worth_high].
inline Scenario RandomScenario(std::mt19937_64& rng, int m, int n,
                               const TrialConfig& config) {
  Scenario s;
  for (int i = 0; i < n; ++i) {
    s.links.push_back({1.0, detail::UniformOpen(rng)});
  }
  for (int j = 0; j < m; ++j) {
    const double u = detail::Uniform01(rng);
    s.messages.push_back(
        {1.0, config.worth_low + (config.worth_high - config.worth_low) * u});
  }
  return s;
}

// As RandomScenario, with capacities and sizes uniform on (0, high].
inline Scenario RandomGeneralScenario(std::mt19937_64& rng, int m, int n,
                                      const TrialConfig& config) {
  Scenario s = RandomScenario(rng, m, n, config);
  for (LinkSpec& l : s.links) {
    l.capacity = config.capacity_high * (1.0 - detail::Uniform01(rng));
  }
  for (MessageSpec& msg : s.messages) {
    msg.size = config.size_high * (1.0 - detail::Uniform01(rng));
  }
  return s;
}

// Nonzero vectors of GF(q)^m whose first nonzero coordinate is 1, one per
// projective point, as coefficient lists indexed by message.
inline std::vector<std::vector<int>> ProjectivePoints(int m, FieldOrder field) {
  const int q = field.value();
  long long total = 1;
  for (int j = 0; j < m; ++j) total *= q;
  std::vector<std::vector<int>> points;
  for (long long x = 1; x < total; ++x) {
    std::vector<int> coefs(m);
    long long y = x;
    for (int j = 0; j < m; ++j) {
      coefs[j] = static_cast<int>(y % q);
      y /= q;
    }
    const auto first = std::find_if(coefs.begin(), coefs.end(),
                                    [](int c) { return c != 0; });
    if (*first == 1) points.push_back(std::move(coefs));
  }
  return points;
}

inline CodeSymbol SymbolOfPoint(const std::vector<int>& coefs) {
  CodeSymbol sym;
  for (int j = 0; j < static_cast<int>(coefs.size()); ++j) {
    if (coefs[j] != 0) {
      sym.terms.push_back({PortionId{j, 1}, static_cast<uint16_t>(coefs[j])});
    }
  }
  return sym;
}

// All length-n multisets of projective points of GF(q)^m, each as a code
// with one portion per message; symbols appear in point order. With prune,
// codes that ReduceCode would change are dropped.
inline std::vector<Code> EnumerateCandidateCodes(int m, int n, FieldOrder field,
                                                 bool prune) {
  if (m < 1 || n < 1 || m > 3 || n > 5 || field.value() > 3) {
    throw InputError("candidate enumeration is limited to m <= 3, n <= 5, "
                     "q <= 3");
  }
  const std::vector<std::vector<int>> points = ProjectivePoints(m, field);
  const int np = static_cast<int>(points.size());
  std::vector<Code> out;
  std::vector<int> idx(n, 0);
  while (true) {
    std::vector<CodeSymbol> symbols;
    for (int k : idx) symbols.push_back(SymbolOfPoint(points[k]));
    Code code(field, std::move(symbols));
    if (!prune || ReduceCode(code) == code) out.push_back(std::move(code));
    // Next nondecreasing index sequence.
    int pos = n - 1;
    while (pos >= 0 && idx[pos] == np - 1) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int k = pos + 1; k < n; ++k) idx[k] = idx[pos];
  }
  return out;
}

// Candidates grouped by decode profile. Members of a class have identical
// payoffs in every scenario.
struct CandidateClass {
  DecodeProfile profile;
  bool systematic = true;
  std::string representative;  // first member, as code text or matroid id
  long long members = 0;
};

struct CandidatePool {
  int m = 0;
  int n = 0;
  std::string source;  // description for reports
  std::vector<CandidateClass> classes;
  std::unordered_map<DecodeProfile, int, DecodeProfileHash> index;

  // Adds a candidate; returns its class.
  int Add(DecodeProfile profile, const std::function<std::string()>& name) {
    auto [it, inserted] =
        index.emplace(profile, static_cast<int>(classes.size()));
    if (inserted) {
      CandidateClass c;
      c.systematic = ProfileIsSystematic(profile);
      c.profile = std::move(profile);
      c.representative = name();
      classes.push_back(std::move(c));
    }
    ++classes[it->second].members;
    return it->second;
  }

  long long total_members() const {
    long long t = 0;
    for (const CandidateClass& c : classes) t += c.members;
    return t;
  }
};

namespace detail {

inline std::string ArrangedCodeText(const Code& code,
                                    std::span<const int> perm) {
  std::vector<CodeSymbol> symbols;
  for (int i : perm) symbols.push_back(code.symbol(i));
  return FormatCode(Code(code.field(), std::move(symbols)));
}

}  // namespace detail

// Adds every distinct link arrangement of every candidate code, since which
// link carries which symbol matters once links differ in reliability.
inline void AddCodeArrangements(CandidatePool& pool,
                                const std::vector<Code>& codes) {
  for (const Code& code : codes) {
    const DecodeProfile base = ProfileOfCode(code, pool.m);
    // Sort link indices by symbol so next_permutation visits each distinct
    // arrangement once.
    std::vector<std::string> keys;
    for (const CodeSymbol& sym : code.symbols()) {
      keys.push_back(FormatSymbol(code, sym));
    }
    std::vector<int> perm(code.num_links());
    std::iota(perm.begin(), perm.end(), 0);
    auto less = [&](int a, int b) {
      return keys[a] != keys[b] ? keys[a] < keys[b] : false;
    };
    std::sort(perm.begin(), perm.end(), less);
    do {
      pool.Add(PermuteProfileLinks(base, perm),
               [&] { return detail::ArrangedCodeText(code, perm); });
    } while (std::next_permutation(perm.begin(), perm.end(), less));
  }
}

inline CandidatePool BuildCodePool(int m, int n, const std::vector<int>& fields,
                                   bool prune) {
  CandidatePool pool;
  pool.m = m;
  pool.n = n;
  pool.source = "projective codes over GF(";
  for (size_t k = 0; k < fields.size(); ++k) {
    if (k > 0) pool.source += ",";
    pool.source += std::to_string(fields[k]);
  }
  pool.source += prune ? "), pruned" : ")";
  for (int q : fields) {
    AddCodeArrangements(pool, EnumerateCandidateCodes(m, n, FieldOrder(q), prune));
  }
  return pool;
}

inline CandidatePool BuildMatroidPool(int m, int n, int jobs = 1) {
  CandidatePool pool;
  pool.m = m;
  pool.n = n;
  pool.source = "matroid rank functions";
  EnumerateOptions opts;
  opts.jobs = jobs;
  long long counter = 0;
  RankEnumerator(m, n, opts).Run([&](const RankFunction& rf) {
    const long long id = counter++;
    pool.Add(ProfileOfRank(rf), [&] { return "matroid#" + std::to_string(id); });
  });
  return pool;
}

struct BestResult {
  std::vector<int> best;  // every index within kTieTolerance of the max
  double payoff = 0.0;
};

inline BestResult TieSet(std::span<const double> payoffs) {
  if (payoffs.empty()) throw InputError("no candidates to compare");
  BestResult r;
  r.payoff = *std::max_element(payoffs.begin(), payoffs.end());
  for (int k = 0; k < static_cast<int>(payoffs.size()); ++k) {
    if (r.payoff - payoffs[k] <= kTieTolerance * std::abs(r.payoff)) {
      r.best.push_back(k);
    }
  }
  return r;
}

inline BestResult BestCandidate(const std::vector<Code>& candidates,
                                const Scenario& scenario) {
  std::vector<double> payoffs;
  for (const Code& c : candidates) payoffs.push_back(CodePayoff(c, scenario));
  return TieSet(payoffs);
}

inline BestResult BestCandidate(const std::vector<RankFunction>& candidates,
                                const Scenario& scenario) {
  std::vector<double> payoffs;
  for (const RankFunction& rf : candidates) {
    payoffs.push_back(MatroidPayoff(rf, scenario));
  }
  return TieSet(payoffs);
}

struct CoverageReport {
  TrialConfig config;
  std::vector<std::string> codes;
  std::vector<long long> counts;  // trials with z_k > 1e-6
  long long trials = 0;
  double use_tol = 1e-6;

  std::vector<int> never_used() const {
    std::vector<int> out;
    for (int k = 0; k < static_cast<int>(counts.size()); ++k) {
      if (counts[k] == 0) out.push_back(k);
    }
    return out;
  }
};

// Solves the 17-code LP on random general scenarios (put in canonical
// order first) and counts how often each code is used at the optimum.
inline CoverageReport CoverageExperiment(const TrialConfig& config) {
  ValidateTrialConfig(config);
  if (config.m != 2 || config.n != 3) {
    throw InputError("coverage experiment uses the 17-code library: m=2, n=3");
  }
  const CodeLibrary library = Build17CodeLibrary();
  CoverageReport report;
  report.config = config;
  report.trials = config.trials;
  for (const Code& c : library.entries) report.codes.push_back(FormatCode(c));
  std::vector<std::vector<int>> used(config.trials);
  detail::ForEachTrial(config.trials, config.jobs, [&](long long t) {
    std::mt19937_64 rng = TrialRng(config.seed, static_cast<uint64_t>(t));
    const Scenario s =
        CanonicalOrder(RandomGeneralScenario(rng, 2, 3, config)).scenario;
    used[t] = UsedCodes(SolveLp(BuildLp(library, s)), report.use_tol);
  });
  report.counts.assign(library.size(), 0);
  for (const auto& u : used) {
    for (int k : u) ++report.counts[k];
  }
  return report;
}

struct Counterexample {
  long long trial = 0;
  Scenario scenario;
  std::vector<std::string> best_codes;  // representatives of tied classes
  double best_payoff = 0.0;
  double margin = 0.0;  // over the best systematic candidate
  bool systematic = false;
  std::vector<std::string> matched_templates;  // names of matching groups
};

struct CounterexampleReport {
  TrialConfig config;
  std::string candidates;
  long long candidate_count = 0;
  long long class_count = 0;
  long long trials = 0;
  long long systematic_best = 0;
  long long counterexample_count = 0;
  // Per template group: counterexamples whose tie set contains a member.
  std::vector<std::pair<std::string, long long>> template_matches;
  std::vector<Counterexample> counterexamples;  // first max_recorded
};

// Named set of code shapes (as profiles of all their link arrangements)
// whose appearance among the best candidates is counted.
struct TemplateGroup {
  std::string name;
  std::vector<DecodeProfile> profiles;
};

struct ConjectureOptions {
  std::vector<TemplateGroup> templates;
  size_t max_recorded = 50;
};

// Per trial: a random unit scenario in canonical order, the tie set of best
// candidate classes, and a counterexample if every tied class is
// non-systematic.
inline CounterexampleReport ConjectureTrial(const TrialConfig& config,
                                            const CandidatePool& pool,
                                            const ConjectureOptions& options = {}) {
  ValidateTrialConfig(config);
  if (pool.classes.empty()) throw InputError("candidate pool is empty");
  if (pool.m != config.m || pool.n != config.n) {
    throw InputError("candidate pool dimensions do not match the trial config");
  }
  const int m = pool.m;
  const size_t nclasses = pool.classes.size();

  // Distinct masks are shared by many classes; evaluate each once per trial.
  std::unordered_map<uint64_t, int> mask_index;
  std::vector<uint64_t> masks;
  std::vector<int> class_masks(nclasses * m);
  for (size_t c = 0; c < nclasses; ++c) {
    for (int j = 0; j < m; ++j) {
      const uint64_t mk = pool.classes[c].profile.masks[j];
      auto [it, inserted] =
          mask_index.emplace(mk, static_cast<int>(masks.size()));
      if (inserted) masks.push_back(mk);
      class_masks[c * m + j] = it->second;
    }
  }
  std::vector<std::unordered_set<DecodeProfile, DecodeProfileHash>> templates;
  for (const TemplateGroup& g : options.templates) {
    templates.emplace_back(g.profiles.begin(), g.profiles.end());
  }

  struct Outcome {
    bool counterexample = false;
    bool systematic_best = false;
    std::vector<bool> template_match;
    std::optional<Counterexample> record;
  };
  std::vector<Outcome> outcomes(config.trials);
  detail::ForEachTrial(config.trials, config.jobs, [&](long long t) {
    std::mt19937_64 rng = TrialRng(config.seed, static_cast<uint64_t>(t));
    const Scenario s =
        CanonicalOrder(RandomScenario(rng, m, pool.n, config)).scenario;
    const std::vector<double> dist = UpSetDistribution(s.success_probs());
    const std::vector<double> worth = s.worths();
    std::vector<double> q(masks.size());
    for (size_t u = 0; u < masks.size(); ++u) {
      q[u] = MaskProbability(masks[u], dist);
    }
    std::vector<double> payoff(nclasses);
    for (size_t c = 0; c < nclasses; ++c) {
      double p = 0.0;
      for (int j = 0; j < m; ++j) p += worth[j] * q[class_masks[c * m + j]];
      payoff[c] = p;
    }
    const BestResult best = TieSet(payoff);
    Outcome& out = outcomes[t];
    bool any_systematic = false;
    for (int c : best.best) {
      any_systematic = any_systematic || pool.classes[c].systematic;
    }
    out.systematic_best = any_systematic;
    if (any_systematic) return;
    out.counterexample = true;
    out.template_match.assign(templates.size(), false);
    for (size_t g = 0; g < templates.size(); ++g) {
      for (int c : best.best) {
        if (templates[g].contains(pool.classes[c].profile)) {
          out.template_match[g] = true;
        }
      }
    }
    double best_sys = 0.0;
    for (size_t c = 0; c < nclasses; ++c) {
      if (pool.classes[c].systematic) best_sys = std::max(best_sys, payoff[c]);
    }
    Counterexample ce;
    ce.trial = t;
    ce.scenario = s;
    for (int c : best.best) {
      ce.best_codes.push_back(pool.classes[c].representative);
    }
    ce.best_payoff = best.payoff;
    ce.margin = best.payoff - best_sys;
    ce.systematic = false;
    for (size_t g = 0; g < templates.size(); ++g) {
      if (out.template_match[g]) {
        ce.matched_templates.push_back(options.templates[g].name);
      }
    }
    out.record = std::move(ce);
  });

  CounterexampleReport report;
  report.config = config;
  report.candidates = pool.source;
  report.candidate_count = pool.total_members();
  report.class_count = static_cast<long long>(nclasses);
  report.trials = config.trials;
  for (const TemplateGroup& g : options.templates) {
    report.template_matches.emplace_back(g.name, 0);
  }
  for (Outcome& o : outcomes) {
    report.systematic_best += o.systematic_best ? 1 : 0;
    if (!o.counterexample) continue;
    ++report.counterexample_count;
    for (size_t g = 0; g < templates.size(); ++g) {
      if (o.template_match[g]) ++report.template_matches[g].second;
    }
    if (report.counterexamples.size() < options.max_recorded) {
      report.counterexamples.push_back(std::move(*o.record));
    }
  }
  return report;
}

// The non-systematic shapes (A,B,A+B,A+C,B+aC) and (A,C,A+B,A+C,B+aC) for
// three messages on five links, with a = 2 over GF(3).
inline std::vector<std::string> HuntTemplateCodes() {
  return {"A,B,A+B,A+C,B+2C", "A,C,A+B,A+C,B+2C"};
}

// The same shapes with a = 1. Over GF(3), a = 2 = -1 makes
// {A+B, A+C, B+aC} dependent; a = 1 keeps those three independent.
inline std::vector<std::string> HuntTemplateCodesIndependentTriple() {
  return {"A,B,A+B,A+C,B+C", "A,C,A+B,A+C,B+C"};
}

// Profiles of every link arrangement of the given codes.
inline std::vector<DecodeProfile> TemplateProfiles(
    const std::vector<std::string>& texts, FieldOrder field, int m) {
  std::vector<DecodeProfile> out;
  for (const std::string& text : texts) {
    const Code code = ParseCode(text, field);
    const DecodeProfile base = ProfileOfCode(code, m);
    std::vector<int> perm(code.num_links());
    std::iota(perm.begin(), perm.end(), 0);
    do {
      out.push_back(PermuteProfileLinks(base, perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return out;
}

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long samples = 0;
  bool degenerate = false;  // one sample: no spread estimate
};

// Samples link states independently and averages the recovered worth.
inline McEstimate McEstimatePayoff(const Code& code, const Scenario& scenario,
                                   long long samples, uint64_t seed) {
  if (samples < 1) throw InputError("samples must be at least 1");
  detail::CheckCodeFitsScenario(code, scenario);
  const std::vector<double> worth = scenario.worths();
  const std::vector<double> table = RecoveredWorthTable(code, worth);
  const std::vector<double> success = scenario.success_probs();
  std::mt19937_64 rng(SplitMix64(seed));
  double mean = 0.0;
  double m2 = 0.0;
  for (long long k = 0; k < samples; ++k) {
    uint32_t up = 0;
    for (size_t i = 0; i < success.size(); ++i) {
      if (detail::Uniform01(rng) < success[i]) up |= uint32_t{1} << i;
    }
    const double x = table[up];
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  McEstimate est;
  est.mean = mean;
  est.samples = samples;
  if (samples == 1) {
    est.degenerate = true;
  } else {
    const double var = m2 / static_cast<double>(samples - 1);
    est.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(samples));
  }
  return est;
}

}  // namespace linkcode

#endif  // LINKCODE_EXPERIMENTS_HPP_
