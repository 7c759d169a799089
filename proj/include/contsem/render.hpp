// Copyright 2026 The contsem Authors.
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

// Text output for readings, derivation trees, rules and lexicons. All of it
// is line based so golden files diff cleanly.

#ifndef CONTSEM_RENDER_HPP
#define CONTSEM_RENDER_HPP

#include <string>
#include <vector>

#include "contsem/derive.hpp"
#include "contsem/lexicon.hpp"
#include "contsem/rules.hpp"

namespace contsem {

enum class OutputFormat { Terms, Types, Trees, All };

/// One line per node, children indented two spaces under their parent:
///
///   Love(Bob)(Alice) : t  FA
///     Alice : e  'alice'
///     Love(Bob) : e -> t  FA
inline std::string render_tree(const DerivationNode& root, std::size_t indent = 0) {
  std::string out;
  auto go = [&](auto&& self, const DerivationNode& n, std::size_t depth) -> void {
    out.append(depth * 2, ' ');
    out += print_term(tidy_binders(n.term)) + " : " + print_type(n.type, true);
    if (n.children.empty())
      out += "  '" + n.word + "'";
    else
      out += "  " + n.decoration;
    out += "\n";
    for (const auto& c : n.children) self(self, c, depth + 1);
  };
  go(go, root, indent);
  return out;
}

inline std::string render_reading(const Reading& r, OutputFormat format, bool trees) {
  std::string out;
  switch (format) {
    case OutputFormat::Terms:
      out += print_term(r.term) + "\n";
      break;
    case OutputFormat::Types:
      out += print_type(r.type, true) + "\n";
      break;
    case OutputFormat::Trees:
    case OutputFormat::All:
      out += r.text() + "\n";
      break;
  }
  if (trees || format == OutputFormat::Trees) {
    for (const auto& d : r.derivations) out += render_tree(d, 1);
  }
  return out;
}

inline std::string render_readings(const std::vector<Reading>& readings, OutputFormat format,
                                   bool trees) {
  std::string out;
  for (const auto& r : readings) out += render_reading(r, format, trees);
  if (format == OutputFormat::All || format == OutputFormat::Trees)
    out += std::to_string(readings.size()) + (readings.size() == 1 ? " reading\n" : " readings\n");
  return out;
}

/// `name  decoration : P1, P2 => C  = \p1 p2. combinator`
inline std::string render_rule(const Rule& r) {
  std::string out = r.name + "  " + r.decoration + " : ";
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) out += ", ";
    out += print_type(r.premises[i], true);
  }
  out += " => " + print_type(r.conclusion, true);
  out += "  = " + print_term(r.closed_combinator());
  return out;
}

inline std::string render_tower(const GrammarTower& g) {
  std::string out;
  auto u = g.unary();
  auto b = g.binary();
  for (const Rule* r : g.ordered()) out += render_rule(*r) + "\n";
  out += std::to_string(u.size() + b.size()) + " rules (" + std::to_string(u.size()) + " unary, " +
         std::to_string(b.size()) + " binary)\n";
  return out;
}

inline std::string render_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& w : lex.words())
    for (const auto& e : lex.lookup(w))
      out += w + " : " + print_type(e.scheme.body, true) + " = " + print_term(e.term) + "\n";
  return out;
}

}  // namespace contsem

#endif  // CONTSEM_RENDER_HPP
