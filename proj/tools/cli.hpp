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

#ifndef LINKCODE_TOOLS_CLI_HPP_
#define LINKCODE_TOOLS_CLI_HPP_

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 invalid
// input, 3 numerical failure.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "linkcode/code.hpp"
#include "linkcode/error.hpp"
#include "linkcode/experiments.hpp"
#include "linkcode/io.hpp"
#include "linkcode/lp.hpp"
#include "linkcode/matroid.hpp"
#include "linkcode/model.hpp"

namespace linkcode::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;

namespace detail {

inline std::string LinkList(UpSet s, int n) {
  std::string out = "{";
  bool first = true;
  for (int i = 0; i < n; ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out + "}";
}

inline std::string PortionList(const Code& code,
                               const std::vector<PortionId>& ids) {
  std::string out = "{";
  for (size_t k = 0; k < ids.size(); ++k) {
    if (k > 0) out += ",";
    out += Code::PortionName(ids[k], code.portion_count(ids[k].message));
  }
  return out + "}";
}

inline int EvalCode(const std::string& scenario_path, const std::string& text,
                    int field, bool breakdown, std::ostream& out) {
  const Scenario s = LoadScenario(scenario_path);
  const Code code = ParseCode(text, FieldOrder(field));
  out << Format12(CodePayoff(code, s)) << "\n";
  if (breakdown) {
    const std::vector<double> success = s.success_probs();
    out << "# upset\tlinks\tprob\tworth\trecovered\n";
    for (uint32_t b = 0; b < (uint32_t{1} << s.num_links()); ++b) {
      const UpSet up{b};
      const std::vector<PortionId> rec = RecoverablePortions(code, up);
      double worth = 0.0;
      for (const PortionId& id : rec) {
        worth += s.messages[id.message].worth_per_unit;
      }
      out << b << "\t" << LinkList(up, s.num_links()) << "\t"
          << Format12(UpSetProb(success, up)) << "\t" << Format12(worth)
          << "\t" << PortionList(code, rec) << "\n";
    }
  }
  return kExitOk;
}

inline int Optimize(const std::string& scenario_path,
                    const std::string& codes_path, std::ostream& out) {
  const Scenario s = LoadScenario(scenario_path);
  CodeLibrary lib;
  if (!codes_path.empty()) {
    lib = LoadCodeLibrary(codes_path);
  } else if (s.num_links() == 3 && s.num_messages() == 2) {
    lib = Build17CodeLibrary();
  } else {
    throw InputError("--codes is required unless the scenario has 3 links "
                     "and 2 messages");
  }
  const LPSolution sol = SolveLp(BuildLp(lib, s));
  out << LpResultToJson(lib, sol).dump() << "\n";
  return kExitOk;
}

inline int EnumMatroids(int m, int n, bool dedup, bool verify, int jobs,
                        const std::string& out_path, std::ostream& out,
                        std::ostream& err) {
  std::unique_ptr<std::ofstream> file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path);
    if (!*file) throw InputError("cannot write " + out_path);
    sink = file.get();
  }
  EnumerateOptions opts;
  opts.dedup_link_permutations = dedup;
  opts.verify = verify;
  opts.jobs = jobs;
  const long long count = RankEnumerator(m, n, opts).Run(
      [&](const RankFunction& rf) { *sink << RankFunctionToJson(rf).dump() << "\n"; });
  err << "enumerated " << count << " rank functions (m=" << m << ", n=" << n
      << (dedup ? ", one per link-permutation orbit" : "") << ")\n";
  return kExitOk;
}

inline int McValidate(long long samples, uint64_t seed,
                      const std::string& scenario_path, const std::string& text,
                      int field, std::ostream& out) {
  Json report;
  report["samples"] = samples;
  report["seed"] = seed;
  report["pairs"] = Json::array();
  auto add = [&](const Code& code, const Scenario& s, uint64_t pair_seed) {
    const McEstimate est = McEstimatePayoff(code, s, samples, pair_seed);
    const double exact = CodePayoff(code, s);
    Json j;
    j["code"] = FormatCode(code);
    j["scenario"] = ScenarioToJson(s);
    j["analytic"] = Round12(exact);
    j["estimate"] = McEstimateToJson(est);
    const double z = est.std_error > 0 ? (est.mean - exact) / est.std_error
                                       : (est.mean == exact ? 0.0 : INFINITY);
    j["z_score"] = std::isfinite(z) ? Json(Round12(z)) : Json("inf");
    j["within_4_stderr"] = std::abs(z) <= 4.0;
    report["pairs"].push_back(std::move(j));
  };
  if (!scenario_path.empty() || !text.empty()) {
    if (scenario_path.empty() || text.empty()) {
      throw InputError("--scenario and --code must be given together");
    }
    add(ParseCode(text, FieldOrder(field)), LoadScenario(scenario_path), seed);
  } else {
    // Ten random (code, scenario) pairs drawn from the 17-code library.
    const CodeLibrary lib = Build17CodeLibrary();
    TrialConfig cfg;
    for (uint64_t k = 0; k < 10; ++k) {
      std::mt19937_64 rng = TrialRng(seed, k);
      const Scenario s = RandomScenario(rng, 2, 3, cfg);
      const Code& code = lib.entries[rng() % lib.entries.size()];
      add(code, s, SplitMix64(seed + k));
    }
  }
  out << report.dump(2) << "\n";
  return kExitOk;
}

inline int CheckSystematic(const std::string& text, int field,
                           std::ostream& out) {
  const Code code = ParseCode(text, FieldOrder(field));
  const bool systematic = IsSystematicCode(code);
  out << (systematic ? "true" : "false") << "\n";
  const std::vector<PortionId> missing = NonSystematicPortions(code);
  for (const PortionId& id : missing) {
    out << "never sent alone: "
        << Code::PortionName(id, code.portion_count(id.message)) << "\n";
  }
  if (code.UsedLinks().size() == static_cast<size_t>(code.num_links())) {
    const CodeMatroid cm = MatroidOfCode(code);
    out << "matroid criterion: "
        << (IsSystematicMatroid(cm.rank) ? "true" : "false") << "\n";
  }
  return kExitOk;
}

}  // namespace detail

// Parses argv and runs one subcommand, writing results to `out` and
// diagnostics to `err`.
inline int Run(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Timesharing and coding for prioritized messages over "
               "parallel unreliable links"};
  app.require_subcommand(1);

  std::string scenario_path, code_text, codes_path, out_path;
  int field = 2;
  bool breakdown = false;

  auto* eval = app.add_subcommand("eval-code", "Exact payoff of one code");
  eval->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  eval->add_option("--code", code_text, "Code text, e.g. A,B,A+B")->required();
  eval->add_option("--field", field, "Prime field order")->capture_default_str();
  eval->add_flag("--breakdown", breakdown, "Per-up-set table");

  auto* optimize = app.add_subcommand("optimize", "Optimal timesharing LP");
  optimize->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  optimize->add_option("--codes", codes_path, "Code library JSON");

  int m = 1, n = 1, jobs = 1;
  bool dedup = false, no_verify = false;
  auto* enumerate = app.add_subcommand("enum-matroids",
                                       "Stream all rank functions as JSONL");
  enumerate->add_option("-m", m, "Messages")->required();
  enumerate->add_option("-n", n, "Links")->required();
  enumerate->add_flag("--dedup", dedup, "One per link-permutation orbit");
  enumerate->add_flag("--no-verify", no_verify, "Skip the final re-validation");
  enumerate->add_option("--out", out_path, "Output file (default stdout)");
  enumerate->add_option("--jobs", jobs, "Worker threads")->capture_default_str();

  long long trials = 1000;
  uint64_t seed = 1;
  double worth_low = 1.0, worth_high = 100.0;
  std::vector<int> fields;
  bool use_matroids = false, prune = false;
  size_t max_recorded = 50;
  auto add_trial_flags = [&](CLI::App* sub) {
    sub->add_option("--trials", trials, "Number of trials")->capture_default_str();
    sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    sub->add_option("--worth-low", worth_low)->capture_default_str();
    sub->add_option("--worth-high", worth_high)->capture_default_str();
    sub->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
  };
  auto* coverage = app.add_subcommand(
      "coverage", "How often each of the 17 codes is used at the LP optimum");
  add_trial_flags(coverage);
  double capacity_high = 2.0, size_high = 2.0;
  coverage->add_option("--capacity-high", capacity_high)->capture_default_str();
  coverage->add_option("--size-high", size_high)->capture_default_str();

  auto* conjecture = app.add_subcommand(
      "conjecture", "Is the best candidate code always systematic?");
  add_trial_flags(conjecture);
  int cm = 3, cn = 4;
  conjecture->add_option("-m", cm, "Messages")->capture_default_str();
  conjecture->add_option("-n", cn, "Links")->capture_default_str();
  conjecture->add_option("--field", fields, "Field orders (default 2 3)");
  conjecture->add_flag("--matroids", use_matroids,
                       "Use enumerated rank functions as candidates");
  conjecture->add_flag("--prune", prune, "Drop reducible codes");
  conjecture->add_option("--max-recorded", max_recorded)->capture_default_str();

  auto* hunt = app.add_subcommand(
      "hunt", "Search for non-systematic optima with 3 messages on 5 links");
  add_trial_flags(hunt);
  hunt->add_option("--max-recorded", max_recorded)->capture_default_str();

  long long samples = 1000000;
  auto* mc = app.add_subcommand("mc-validate",
                                "Monte Carlo estimate versus exact payoff");
  mc->add_option("--samples", samples)->capture_default_str();
  mc->add_option("--seed", seed)->capture_default_str();
  mc->add_option("--scenario", scenario_path, "Scenario JSON");
  mc->add_option("--code", code_text, "Code text");
  mc->add_option("--field", field)->capture_default_str();

  auto* check = app.add_subcommand("check-systematic",
                                   "Whether every portion is sent alone");
  check->add_option("--code", code_text, "Code text")->required();
  check->add_option("--field", field)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  auto trial_config = [&](int tm, int tn, std::vector<int> flds) {
    TrialConfig c;
    c.m = tm;
    c.n = tn;
    c.trials = trials;
    c.seed = seed;
    c.worth_low = worth_low;
    c.worth_high = worth_high;
    c.fields = std::move(flds);
    c.jobs = jobs;
    c.capacity_high = capacity_high;
    c.size_high = size_high;
    return c;
  };

  try {
    if (eval->parsed()) {
      return detail::EvalCode(scenario_path, code_text, field, breakdown, out);
    }
    if (optimize->parsed()) return detail::Optimize(scenario_path, codes_path, out);
    if (enumerate->parsed()) {
      return detail::EnumMatroids(m, n, dedup, !no_verify, jobs, out_path, out,
                                  err);
    }
    if (coverage->parsed()) {
      const CoverageReport r = CoverageExperiment(trial_config(2, 3, {2}));
      out << CoverageReportToJson(r).dump(2) << "\n";
      for (int k : r.never_used()) {
        err << "code " << r.codes[k] << " never used in " << r.trials
            << " trials (seed " << seed << ")\n";
      }
      return kExitOk;
    }
    if (conjecture->parsed()) {
      if (fields.empty()) fields = {2, 3};
      const TrialConfig c = trial_config(cm, cn, fields);
      ValidateTrialConfig(c);
      const CandidatePool pool = use_matroids
                                     ? BuildMatroidPool(cm, cn, jobs)
                                     : BuildCodePool(cm, cn, fields, prune);
      ConjectureOptions opts;
      opts.max_recorded = max_recorded;
      out << CounterexampleReportToJson(ConjectureTrial(c, pool, opts),
                                        "conjecture")
                 .dump(2)
          << "\n";
      return kExitOk;
    }
    if (hunt->parsed()) {
      const TrialConfig c = trial_config(3, 5, {3});
      ValidateTrialConfig(c);
      const FieldOrder f3(3);
      const CandidatePool pool = BuildCodePool(3, 5, {3}, false);
      ConjectureOptions opts;
      opts.max_recorded = max_recorded;
      opts.templates = {
          {"alpha=2", TemplateProfiles(HuntTemplateCodes(), f3, 3)},
          {"alpha=1", TemplateProfiles(HuntTemplateCodesIndependentTriple(),
                                       f3, 3)}};
      out << CounterexampleReportToJson(ConjectureTrial(c, pool, opts), "hunt")
                 .dump(2)
          << "\n";
      return kExitOk;
    }
    if (mc->parsed()) {
      return detail::McValidate(samples, seed, scenario_path, code_text, field,
                                out);
    }
    if (check->parsed()) return detail::CheckSystematic(code_text, field, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace linkcode::cli

#endif  // LINKCODE_TOOLS_CLI_HPP_
