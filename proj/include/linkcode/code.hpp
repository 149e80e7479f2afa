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

#ifndef LINKCODE_CODE_HPP_
#define LINKCODE_CODE_HPP_

// Inter-link codes: each link carries one GF(q)-linear combination of
// unit-size message portions, or nothing. Written as tuples such as
// "A,B,A+B", "A1,A2,A1+A2" or "A,B,A+B,A+C,B+2C".

#include <algorithm>
#include <cctype>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "linkcode/error.hpp"
#include "linkcode/gf.hpp"
#include "linkcode/matroid.hpp"
#include "linkcode/model.hpp"

namespace linkcode {

inline constexpr int kMaxMessagesInCode = 26;

struct PortionId {
  int message = 0;  // 0-based, A = 0
  int portion = 1;  // 1-based

  friend auto operator<=>(const PortionId&, const PortionId&) = default;
};

struct Term {
  PortionId id;
  uint16_t coef = 1;

  friend bool operator==(const Term&, const Term&) = default;
};

// Terms sorted by portion; no portion twice. Empty means the link is unused.
struct CodeSymbol {
  std::vector<Term> terms;

  bool empty() const { return terms.empty(); }
  bool direct() const { return terms.size() == 1; }
  bool uses(PortionId id) const {
    return std::any_of(terms.begin(), terms.end(),
                       [&](const Term& t) { return t.id == id; });
  }

  friend bool operator==(const CodeSymbol&, const CodeSymbol&) = default;
};

class Code {
 public:
  // Validates coefficients, duplicate portions and portion ranges.
  Code(FieldOrder field, std::vector<CodeSymbol> symbols)
      : field_(field), symbols_(std::move(symbols)) {
    bool any = false;
    std::map<int, std::vector<int>> seen;
    for (CodeSymbol& sym : symbols_) {
      std::sort(sym.terms.begin(), sym.terms.end(),
                [](const Term& a, const Term& b) { return a.id < b.id; });
      for (size_t k = 0; k < sym.terms.size(); ++k) {
        const Term& t = sym.terms[k];
        if (t.coef == 0 || t.coef >= field_.value()) {
          throw InputError("coefficient " + std::to_string(t.coef) +
                           " is not a nonzero element of GF(" +
                           std::to_string(field_.value()) + ")");
        }
        if (t.id.message < 0 || t.id.message >= kMaxMessagesInCode ||
            t.id.portion < 1) {
          throw InputError("invalid portion reference");
        }
        if (k > 0 && sym.terms[k - 1].id == t.id) {
          throw InputError("portion " + PortionName(t.id, 2) +
                           " appears twice in one symbol");
        }
        seen[t.id.message].push_back(t.id.portion);
      }
      any = any || !sym.empty();
    }
    if (!any) throw InputError("code has no non-empty symbol");
    int num_messages = seen.empty() ? 0 : seen.rbegin()->first + 1;
    portion_counts_.assign(num_messages, 0);
    for (auto& [message, portions] : seen) {
      std::sort(portions.begin(), portions.end());
      portions.erase(std::unique(portions.begin(), portions.end()),
                     portions.end());
      if (portions.back() != static_cast<int>(portions.size())) {
        throw InputError("portions of message " +
                         std::string(1, static_cast<char>('A' + message)) +
                         " do not form a contiguous range starting at 1");
      }
      portion_counts_[message] = static_cast<int>(portions.size());
    }
    offsets_.assign(num_messages + 1, 0);
    for (int j = 0; j < num_messages; ++j) {
      offsets_[j + 1] = offsets_[j] + portion_counts_[j];
    }
  }

  FieldOrder field() const { return field_; }
  const std::vector<CodeSymbol>& symbols() const { return symbols_; }
  const CodeSymbol& symbol(int link) const { return symbols_[link]; }
  int num_links() const { return static_cast<int>(symbols_.size()); }
  // One past the highest message index used.
  int num_messages() const { return static_cast<int>(portion_counts_.size()); }
  int portion_count(int message) const {
    return message < num_messages() ? portion_counts_[message] : 0;
  }
  int total_portions() const { return offsets_.back(); }

  // Coordinate of a portion in column vectors; portions ordered by
  // (message, portion).
  int coord(PortionId id) const { return offsets_[id.message] + id.portion - 1; }

  std::vector<PortionId> portions() const {
    std::vector<PortionId> out;
    for (int j = 0; j < num_messages(); ++j) {
      for (int t = 1; t <= portion_counts_[j]; ++t) out.push_back({j, t});
    }
    return out;
  }

  GfVector column(int link, int dim = -1) const {
    GfVector v(dim < 0 ? total_portions() : dim, 0);
    for (const Term& t : symbols_[link].terms) v[coord(t.id)] = t.coef;
    return v;
  }

  std::vector<int> UsedLinks() const {
    std::vector<int> out;
    for (int i = 0; i < num_links(); ++i) {
      if (!symbols_[i].empty()) out.push_back(i);
    }
    return out;
  }

  // Symbol i of the result is symbol links[i] of this code.
  Code SelectLinks(std::span<const int> links) const {
    std::vector<CodeSymbol> out;
    for (int i : links) out.push_back(symbols_.at(i));
    return Code(field_, std::move(out));
  }

  static std::string PortionName(PortionId id, int portion_count) {
    std::string s(1, static_cast<char>('A' + id.message));
    if (portion_count >= 2) s += std::to_string(id.portion);
    return s;
  }

  friend bool operator==(const Code& a, const Code& b) {
    return a.field_ == b.field_ && a.symbols_ == b.symbols_;
  }

 private:
  FieldOrder field_;
  std::vector<CodeSymbol> symbols_;
  std::vector<int> portion_counts_;
  std::vector<int> offsets_;
};

namespace detail {

inline std::string CodeSyntaxError(std::string_view text, size_t pos,
                                   const std::string& msg) {
  return "code \"" + std::string(text) + "\": " + msg + " at offset " +
         std::to_string(pos);
}

}  // namespace detail

// code   := symbol ("," symbol)*
// symbol := "-" | term ("+" term)*
// term   := [coefficient] letter [portion]
// Whitespace is ignored. Coefficients are reduced mod q.
inline Code ParseCode(std::string_view text, FieldOrder field) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  const PrimeField gf(field);
  std::vector<CodeSymbol> symbols;
  size_t pos = 0;
  auto read_int = [&](long long& out) {
    const size_t start = pos;
    out = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      out = out * 10 + (s[pos] - '0');
      if (out > 1'000'000'000) {
        throw InputError(detail::CodeSyntaxError(text, start, "number too large"));
      }
      ++pos;
    }
    return pos > start;
  };
  while (true) {
    CodeSymbol sym;
    if (pos < s.size() && s[pos] == '-') {
      ++pos;
    } else {
      while (true) {
        const size_t term_start = pos;
        long long coef = 1;
        long long raw = 0;
        if (read_int(raw)) coef = raw;
        if (pos >= s.size() || s[pos] < 'A' || s[pos] > 'Z') {
          throw InputError(detail::CodeSyntaxError(
              text, pos, "expected a message letter A-Z"));
        }
        const int message = s[pos++] - 'A';
        long long portion = 1;
        if (read_int(raw)) portion = raw;
        if (portion < 1) {
          throw InputError(detail::CodeSyntaxError(
              text, term_start, "portion index must be at least 1"));
        }
        const uint16_t c = gf.reduce(coef);
        if (c == 0) {
          throw InputError(detail::CodeSyntaxError(
              text, term_start,
              "coefficient is zero in GF(" + std::to_string(field.value()) +
                  ")"));
        }
        const PortionId id{message, static_cast<int>(portion)};
        if (sym.uses(id)) {
          throw InputError(detail::CodeSyntaxError(
              text, term_start, "duplicate term in one symbol"));
        }
        sym.terms.push_back({id, c});
        if (pos < s.size() && s[pos] == '+') {
          ++pos;
          continue;
        }
        break;
      }
    }
    symbols.push_back(std::move(sym));
    if (pos == s.size()) break;
    if (s[pos] != ',') {
      throw InputError(detail::CodeSyntaxError(text, pos, "expected ','"));
    }
    ++pos;
  }
  return Code(field, std::move(symbols));
}

inline std::string FormatSymbol(const Code& code, const CodeSymbol& sym) {
  if (sym.empty()) return "-";
  std::string out;
  for (size_t k = 0; k < sym.terms.size(); ++k) {
    const Term& t = sym.terms[k];
    if (k > 0) out += '+';
    if (t.coef != 1) out += std::to_string(t.coef);
    out += Code::PortionName(t.id, code.portion_count(t.id.message));
  }
  return out;
}

// Canonical text; portion numbers are shown only for messages split into
// two or more portions.
inline std::string FormatCode(const Code& code) {
  std::string out;
  for (int i = 0; i < code.num_links(); ++i) {
    if (i > 0) out += ',';
    out += FormatSymbol(code, code.symbol(i));
  }
  return out;
}

// Portions whose unit vector lies in the span of the columns of the up
// links.
inline std::vector<PortionId> RecoverablePortions(const Code& code, UpSet up) {
  const PrimeField gf(code.field());
  EchelonBasis basis(gf, code.total_portions());
  for (int i = 0; i < code.num_links(); ++i) {
    if (up.contains(i)) basis.Insert(code.column(i));
  }
  std::vector<PortionId> out;
  for (const PortionId& id : code.portions()) {
    if (basis.UnitInSpan(code.coord(id))) out.push_back(id);
  }
  return out;
}

namespace detail {

inline void CheckCodeFitsScenario(const Code& code, const Scenario& scenario) {
  if (code.num_links() != scenario.num_links()) {
    throw InputError("code \"" + FormatCode(code) + "\" has " +
                     std::to_string(code.num_links()) +
                     " links but the scenario has " +
                     std::to_string(scenario.num_links()));
  }
  if (code.num_messages() > scenario.num_messages()) {
    throw InputError("code \"" + FormatCode(code) + "\" uses message " +
                     std::string(1, static_cast<char>('A' + code.num_messages() - 1)) +
                     " but the scenario has only " +
                     std::to_string(scenario.num_messages()) + " messages");
  }
}

}  // namespace detail

// Worth recovered for every up-set, indexed by bitmask, when each portion
// has unit size. Portions are worth their message's worth per unit.
inline std::vector<double> RecoveredWorthTable(const Code& code,
                                               std::span<const double> worth) {
  const PrimeField gf(code.field());
  const std::vector<PortionId> portions = code.portions();
  std::vector<GfVector> columns;
  for (int i = 0; i < code.num_links(); ++i) columns.push_back(code.column(i));
  std::vector<double> table(size_t{1} << code.num_links(), 0.0);
  for (uint32_t s = 1; s < table.size(); ++s) {
    EchelonBasis basis(gf, code.total_portions());
    for (int i = 0; i < code.num_links(); ++i) {
      if ((s >> i) & 1u) basis.Insert(columns[i]);
    }
    double w = 0.0;
    for (const PortionId& id : portions) {
      if (basis.UnitInSpan(code.coord(id))) w += worth[id.message];
    }
    table[s] = w;
  }
  return table;
}

// Expected recovered worth of one code unit: each used link carries one
// data unit and every portion has unit size.
inline double CodePayoff(const Code& code, const Scenario& scenario) {
  detail::CheckCodeFitsScenario(code, scenario);
  const std::vector<double> worth = scenario.worths();
  const std::vector<double> table = RecoveredWorthTable(code, worth);
  const std::vector<double> dist = UpSetDistribution(scenario.success_probs());
  double payoff = 0.0;
  for (size_t s = 1; s < table.size(); ++s) payoff += dist[s] * table[s];
  return payoff;
}

// Every portion used anywhere is also sent alone on some link.
inline bool IsSystematicCode(const Code& code) {
  for (const PortionId& id : code.portions()) {
    bool direct = false;
    for (const CodeSymbol& sym : code.symbols()) {
      if (sym.direct() && sym.terms[0].id == id) {
        direct = true;
        break;
      }
    }
    if (!direct) return false;
  }
  return true;
}

// Portions that never appear alone.
inline std::vector<PortionId> NonSystematicPortions(const Code& code) {
  std::vector<PortionId> out;
  for (const PortionId& id : code.portions()) {
    bool direct = false;
    for (const CodeSymbol& sym : code.symbols()) {
      direct = direct || (sym.direct() && sym.terms[0].id == id);
    }
    if (!direct) out.push_back(id);
  }
  return out;
}

namespace detail {

// Renumbers each message's portions to 1..t in order of first use.
inline Code CompactPortions(FieldOrder field, std::vector<CodeSymbol> symbols) {
  std::map<PortionId, int> used;
  for (const CodeSymbol& sym : symbols) {
    for (const Term& t : sym.terms) used.emplace(t.id, 0);
  }
  std::map<int, int> next;
  for (auto& [id, renumbered] : used) renumbered = ++next[id.message];
  for (CodeSymbol& sym : symbols) {
    for (Term& t : sym.terms) t.id.portion = used[t.id];
  }
  return Code(field, std::move(symbols));
}

}  // namespace detail

// A portion that occurs in exactly one symbol, combined with other portions
// there, can only be recovered when that link is up and never helps recover
// anything else; sending it alone instead cannot lower the payoff. Applies
// that replacement until nothing changes. When several such portions share
// a symbol, the one from the most valuable message is kept if worths are
// given, otherwise the lowest (message, portion).
inline Code ReduceCode(const Code& code,
                       std::optional<std::span<const double>> worth = {}) {
  Code current = code;
  while (true) {
    std::map<PortionId, int> occurrences;
    for (const CodeSymbol& sym : current.symbols()) {
      for (const Term& t : sym.terms) ++occurrences[t.id];
    }
    std::vector<CodeSymbol> symbols = current.symbols();
    bool changed = false;
    for (CodeSymbol& sym : symbols) {
      if (sym.terms.size() < 2) continue;
      std::optional<PortionId> keep;
      for (const Term& t : sym.terms) {
        if (occurrences[t.id] != 1) continue;
        if (!keep) {
          keep = t.id;
        } else if (worth && (*worth)[t.id.message] > (*worth)[keep->message]) {
          keep = t.id;
        }
      }
      if (!keep) continue;
      sym.terms = {Term{*keep, 1}};
      changed = true;
      break;
    }
    if (!changed) return current;
    current = detail::CompactPortions(current.field(), std::move(symbols));
  }
}

// Rank function of a code together with the message each matroid message
// element belongs to.
struct CodeMatroid {
  RankFunction rank;
  std::vector<int> element_message;
};

// Message elements are the code's portions, followed by one element for
// each message below num_messages that the code does not use. Links must
// all carry a symbol.
inline CodeMatroid MatroidOfCode(const Code& code, int num_messages = -1) {
  if (num_messages < code.num_messages()) num_messages = code.num_messages();
  for (int i = 0; i < code.num_links(); ++i) {
    if (code.symbol(i).empty()) {
      throw InputError("code \"" + FormatCode(code) + "\" leaves link " +
                       std::to_string(i + 1) +
                       " unused; unused links have no matroid element");
    }
  }
  CodeMatroid out;
  for (const PortionId& id : code.portions()) {
    out.element_message.push_back(id.message);
  }
  for (int j = 0; j < num_messages; ++j) {
    if (code.portion_count(j) == 0) out.element_message.push_back(j);
  }
  const int m = static_cast<int>(out.element_message.size());
  const GroundSet g = MakeGroundSet(m, code.num_links());
  std::vector<GfVector> elements;
  for (int e = 0; e < m; ++e) {
    GfVector v(m, 0);
    v[e] = 1;
    elements.push_back(std::move(v));
  }
  for (int i = 0; i < code.num_links(); ++i) {
    elements.push_back(code.column(i, m));
  }
  const PrimeField gf(code.field());
  out.rank = RankFunction{g, std::vector<uint8_t>(g.num_subsets(), 0)};
  std::vector<GfVector> picked;
  for (uint32_t s = 1; s < g.num_subsets(); ++s) {
    picked.clear();
    for (int e = 0; e < g.size(); ++e) {
      if ((s >> e) & 1u) picked.push_back(elements[e]);
    }
    out.rank.ranks[s] = static_cast<uint8_t>(GfRank(gf, m, picked));
  }
  return out;
}

// Matroid payoff with each element worth its message's worth.
inline double CodeMatroidPayoff(const CodeMatroid& cm,
                                const Scenario& scenario) {
  std::vector<double> worth;
  for (int j : cm.element_message) {
    worth.push_back(scenario.messages.at(j).worth_per_unit);
  }
  const std::vector<double> success = scenario.success_probs();
  return MatroidPayoff(cm.rank, success, worth);
}

}  // namespace linkcode

#endif  // LINKCODE_CODE_HPP_
