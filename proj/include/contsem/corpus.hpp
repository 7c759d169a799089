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

// Golden cases. A case file looks like
//
//   # optional comment lines
//   input: (Alice (loves Bob))
//   order: 0
//   goal: t
//   --- readings
//   Love(Bob)(Alice) : t
//
// Other option lines: `max-unary: N`, `bracketings: all`. An empty
// readings section expects no derivation.

#ifndef CONTSEM_CORPUS_HPP
#define CONTSEM_CORPUS_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "contsem/derive.hpp"
#include "contsem/error.hpp"
#include "contsem/lexicon.hpp"

namespace contsem {

struct CorpusCase {
  std::string name;
  std::string input;
  int order = 2;
  int max_unary = 3;
  std::optional<std::string> goal;
  bool all_bracketings = false;
  std::vector<std::string> comments;
  std::vector<std::string> expected;
};

struct CaseOutcome {
  std::string name;
  bool passed = false;
  std::vector<std::string> actual;
  std::string error;
};

inline CorpusCase parse_case(const std::string& text, const std::string& name) {
  CorpusCase c;
  c.name = name;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool readings = false;
  auto value = [&](std::string_view key) {
    return std::string(detail::trim(std::string_view(line).substr(key.size())));
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (readings) {
      auto t = detail::trim(line);
      if (!t.empty()) c.expected.emplace_back(t);
      continue;
    }
    if (detail::trim(line).empty()) continue;
    if (line.rfind("#", 0) == 0) {
      c.comments.push_back(line);
    } else if (line.rfind("--- readings", 0) == 0) {
      readings = true;
    } else if (line.rfind("input:", 0) == 0) {
      c.input = value("input:");
    } else if (line.rfind("order:", 0) == 0) {
      c.order = std::stoi(value("order:"));
    } else if (line.rfind("max-unary:", 0) == 0) {
      c.max_unary = std::stoi(value("max-unary:"));
    } else if (line.rfind("goal:", 0) == 0) {
      c.goal = value("goal:");
    } else if (line.rfind("bracketings:", 0) == 0) {
      c.all_bracketings = value("bracketings:") == "all";
    } else {
      throw ParseError(name + ": unrecognized line", lineno, 1);
    }
  }
  if (c.input.empty()) throw ParseError(name + ": missing input line", lineno, 1);
  if (!readings) throw ParseError(name + ": missing '--- readings' section", lineno, 1);
  return c;
}

inline std::string write_case(const CorpusCase& c, const std::vector<std::string>& readings) {
  std::string out;
  for (const auto& l : c.comments) out += l + "\n";
  out += "input: " + c.input + "\n";
  out += "order: " + std::to_string(c.order) + "\n";
  if (c.max_unary != 3) out += "max-unary: " + std::to_string(c.max_unary) + "\n";
  if (c.goal) out += "goal: " + *c.goal + "\n";
  if (c.all_bracketings) out += "bracketings: all\n";
  out += "--- readings\n";
  for (const auto& r : readings) out += r + "\n";
  return out;
}

inline SearchOptions case_options(const CorpusCase& c) {
  SearchOptions opts;
  opts.order = c.order;
  opts.max_unary = c.max_unary;
  if (c.goal) opts.goal = parse_type(*c.goal);
  opts.enumerate_bracketings = c.all_bracketings;
  return opts;
}

inline CaseOutcome run_case(const CorpusCase& c, const Lexicon& lex) {
  CaseOutcome out;
  out.name = c.name;
  try {
    SearchOptions opts = case_options(c);
    DeriveResult res = derive(parse_tree(c.input), tower(c.order), lex, opts);
    for (const auto& r : res.readings) out.actual.push_back(r.text());
    out.passed = out.actual == c.expected;
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

/// `*.case` files under `dir`, sorted by name.
inline std::vector<std::filesystem::path> corpus_files(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".case") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw Error("cannot open " + p.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace contsem

#endif  // CONTSEM_CORPUS_HPP
