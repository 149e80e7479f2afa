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

#ifndef LINKCODE_IO_HPP_
#define LINKCODE_IO_HPP_

// JSON file formats: scenarios, code libraries, LP results, rank-function
// JSONL streams and experiment reports.

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "linkcode/code.hpp"
#include "linkcode/error.hpp"
#include "linkcode/experiments.hpp"
#include "linkcode/lp.hpp"
#include "linkcode/matroid.hpp"
#include "linkcode/model.hpp"

namespace linkcode {

using Json = nlohmann::ordered_json;

// Rounds to 12 significant digits so printed values are stable text.
inline double Round12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::stod(buf);
}

inline std::string Format12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

namespace detail {

inline void RejectUnknownFields(const Json& obj, const std::string& where,
                                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw InputError(where + ": expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.contains(key)) {
      throw InputError(where + ": unknown field \"" + key + "\"");
    }
  }
}

inline double RequireNumber(const Json& obj, const char* key,
                            const std::string& where) {
  if (!obj.contains(key)) {
    throw InputError(where + ": missing field \"" + key + "\"");
  }
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    throw InputError(where + "." + key + ": expected a number");
  }
  return v.get<double>();
}

inline Json ParseJsonText(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    size_t line = 1;
    for (size_t k = 0; k < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') ++line;
    }
    throw InputError(origin + ":" + std::to_string(line) +
                     ": malformed JSON: " + e.what());
  }
}

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline Scenario ScenarioFromJson(const Json& j) {
  detail::RejectUnknownFields(j, "scenario", {"links", "messages"});
  Scenario s;
  if (!j.contains("links") || !j.at("links").is_array()) {
    throw InputError("scenario: \"links\" must be an array");
  }
  if (!j.contains("messages") || !j.at("messages").is_array()) {
    throw InputError("scenario: \"messages\" must be an array");
  }
  int i = 0;
  for (const Json& l : j.at("links")) {
    const std::string where = "links[" + std::to_string(i++) + "]";
    detail::RejectUnknownFields(l, where, {"capacity", "outage_prob"});
    s.links.push_back({detail::RequireNumber(l, "capacity", where),
                       detail::RequireNumber(l, "outage_prob", where)});
  }
  i = 0;
  for (const Json& m : j.at("messages")) {
    const std::string where = "messages[" + std::to_string(i++) + "]";
    detail::RejectUnknownFields(m, where, {"size", "worth"});
    s.messages.push_back({detail::RequireNumber(m, "size", where),
                          detail::RequireNumber(m, "worth", where)});
  }
  return ValidateScenario(std::move(s));
}

inline Scenario ParseScenario(const std::string& text,
                              const std::string& origin = "scenario") {
  return ScenarioFromJson(detail::ParseJsonText(text, origin));
}

inline Scenario LoadScenario(const std::string& path) {
  return ParseScenario(detail::ReadFile(path), path);
}

inline Json ScenarioToJson(const Scenario& s) {
  Json j;
  j["links"] = Json::array();
  for (const LinkSpec& l : s.links) {
    j["links"].push_back({{"capacity", l.capacity}, {"outage_prob", l.outage_prob}});
  }
  j["messages"] = Json::array();
  for (const MessageSpec& m : s.messages) {
    j["messages"].push_back({{"size", m.size}, {"worth", m.worth_per_unit}});
  }
  return j;
}

inline CodeLibrary CodeLibraryFromJson(const Json& j) {
  detail::RejectUnknownFields(j, "code library", {"field", "codes"});
  if (!j.contains("field") || !j.at("field").is_number_integer()) {
    throw InputError("code library: \"field\" must be an integer");
  }
  const FieldOrder field(j.at("field").get<int>());
  if (!j.contains("codes") || !j.at("codes").is_array()) {
    throw InputError("code library: \"codes\" must be an array of strings");
  }
  std::vector<Code> codes;
  for (const Json& c : j.at("codes")) {
    if (!c.is_string()) {
      throw InputError("code library: \"codes\" must be an array of strings");
    }
    codes.push_back(ParseCode(c.get<std::string>(), field));
  }
  return MakeCodeLibrary(field, std::move(codes));
}

inline CodeLibrary LoadCodeLibrary(const std::string& path) {
  return CodeLibraryFromJson(detail::ParseJsonText(detail::ReadFile(path), path));
}

inline Json CodeLibraryToJson(const CodeLibrary& lib) {
  Json j;
  j["field"] = lib.field.value();
  j["codes"] = Json::array();
  for (const Code& c : lib.entries) j["codes"].push_back(FormatCode(c));
  return j;
}

inline Json LpResultToJson(const CodeLibrary& lib, const LPSolution& sol,
                           double used_tol = 1e-9) {
  Json j;
  j["objective"] = Round12(sol.objective);
  j["z"] = Json::array();
  for (double z : sol.z) j["z"].push_back(Round12(z));
  j["used"] = Json::array();
  for (int k : UsedCodes(sol, used_tol)) {
    j["used"].push_back({{"code", FormatCode(lib.entries[k])},
                         {"z", Round12(sol.z[k])}});
  }
  j["status"] = LPStatusName(sol.status);
  return j;
}

inline Json RankFunctionToJson(const RankFunction& rf,
                               const char* representability = "unknown") {
  Json j;
  j["m"] = rf.ground.m;
  j["n"] = rf.ground.n;
  j["ranks"] = Json::array();
  for (uint8_t r : rf.ranks) j["ranks"].push_back(static_cast<int>(r));
  j["systematic"] = IsSystematicMatroid(rf);
  j["representability"] = representability;
  return j;
}

inline RankFunction RankFunctionFromJson(const Json& j) {
  detail::RejectUnknownFields(j, "rank function",
                              {"m", "n", "ranks", "systematic", "representability"});
  const GroundSet g = MakeGroundSet(j.at("m").get<int>(), j.at("n").get<int>());
  RankFunction rf{g, {}};
  for (const Json& r : j.at("ranks")) {
    const int v = r.get<int>();
    if (v < 0 || v > g.m) throw InputError("rank value out of range");
    rf.ranks.push_back(static_cast<uint8_t>(v));
  }
  if (rf.ranks.size() != g.num_subsets()) {
    throw InputError("rank table has wrong length");
  }
  return rf;
}

inline Json TrialConfigToJson(const TrialConfig& c) {
  Json j;
  j["m"] = c.m;
  j["n"] = c.n;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["worth_range"] = {c.worth_low, c.worth_high};
  j["outage_prob_distribution"] = "uniform(0,1)";
  j["fields"] = c.fields;
  return j;
}

inline Json CoverageReportToJson(const CoverageReport& r) {
  Json j;
  j["experiment"] = "coverage";
  j["config"] = TrialConfigToJson(r.config);
  j["config"]["capacity_distribution"] =
      "uniform(0," + Format12(r.config.capacity_high) + "]";
  j["config"]["size_distribution"] =
      "uniform(0," + Format12(r.config.size_high) + "]";
  j["use_tolerance"] = r.use_tol;
  j["codes"] = Json::array();
  for (size_t k = 0; k < r.codes.size(); ++k) {
    j["codes"].push_back({{"code", r.codes[k]}, {"used_in", r.counts[k]}});
  }
  j["never_used"] = Json::array();
  for (int k : r.never_used()) j["never_used"].push_back(r.codes[k]);
  return j;
}

inline Json CounterexampleReportToJson(const CounterexampleReport& r,
                                       const std::string& experiment) {
  Json j;
  j["experiment"] = experiment;
  j["config"] = TrialConfigToJson(r.config);
  j["candidates"] = {{"source", r.candidates},
                     {"count", r.candidate_count},
                     {"payoff_classes", r.class_count}};
  j["trials"] = r.trials;
  j["systematic_best"] = r.systematic_best;
  j["counterexample_count"] = r.counterexample_count;
  j["template_matches"] = Json::object();
  for (const auto& [name, count] : r.template_matches) {
    j["template_matches"][name] = count;
  }
  j["counterexamples"] = Json::array();
  for (const Counterexample& ce : r.counterexamples) {
    Json c;
    c["trial"] = ce.trial;
    c["scenario"] = ScenarioToJson(ce.scenario);
    c["best_codes"] = ce.best_codes;
    c["best_payoff"] = Round12(ce.best_payoff);
    c["margin"] = ce.margin;
    c["systematic"] = ce.systematic;
    c["matched_templates"] = ce.matched_templates;
    j["counterexamples"].push_back(std::move(c));
  }
  return j;
}

inline Json McEstimateToJson(const McEstimate& e) {
  Json j;
  j["mean"] = Round12(e.mean);
  j["stderr"] = Round12(e.std_error);
  j["samples"] = e.samples;
  if (e.degenerate) j["stderr_degenerate"] = true;
  return j;
}

}  // namespace linkcode

#endif  // LINKCODE_IO_HPP_
