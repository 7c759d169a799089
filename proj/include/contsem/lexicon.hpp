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

// Words and their denotations.
//
// Lexicon file format, one item per line:
//
//   # comment
//   const Name                 declare an untyped constant
//   const Name : TYPE          declare (or overload) a typed constant
//   word : TYPE = TERM         entry; `w1/w2 : ...` keys one entry to both
//
// Every entry's term is checked against its type on load. Words match
// case-insensitively.

#ifndef CONTSEM_LEXICON_HPP
#define CONTSEM_LEXICON_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "contsem/check.hpp"
#include "contsem/error.hpp"
#include "contsem/term.hpp"
#include "contsem/type.hpp"

namespace contsem {

struct LexEntry {
  std::string word;
  TypeScheme scheme;
  Term term;
};

inline std::string lowercase(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

class Lexicon {
 public:
  const Signature& signature() const { return signature_; }
  Signature& signature() { return signature_; }

  void add(LexEntry entry) {
    std::string key = lowercase(entry.word);
    auto& slot = entries_[key];
    if (slot.empty()) words_.push_back(key);
    slot.push_back(std::move(entry));
  }

  bool contains(std::string_view word) const {
    return entries_.count(lowercase(word)) != 0;
  }

  /// Entries for `word` in load order; empty when unknown.
  const std::vector<LexEntry>& lookup(std::string_view word) const {
    static const std::vector<LexEntry> kNone;
    auto it = entries_.find(lowercase(word));
    return it == entries_.end() ? kNone : it->second;
  }

  /// Words in first-load order.
  const std::vector<std::string>& words() const { return words_; }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& [_, v] : entries_) n += v.size();
    return n;
  }

 private:
  std::map<std::string, std::vector<LexEntry>> entries_;
  std::vector<std::string> words_;
  Signature signature_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::size_t offset_in(std::string_view whole, std::string_view part) {
  return static_cast<std::size_t>(part.data() - whole.data());
}

inline void load_line(std::string_view raw, std::size_t line, Lexicon& lex) {
  std::string_view text = raw;
  if (auto hash = text.find('#'); hash != std::string_view::npos) {
    // '#' also occurs in the continuation arrow `#>`.
    std::size_t p = hash;
    while (p != std::string_view::npos && p + 1 < text.size() && text[p + 1] == '>')
      p = text.find('#', p + 1);
    if (p != std::string_view::npos) text = text.substr(0, p);
  }
  text = trim(text);
  if (text.empty()) return;

  if (text.rfind("const", 0) == 0 && text.size() > 5 &&
      std::isspace(static_cast<unsigned char>(text[5]))) {
    std::string_view rest = trim(text.substr(5));
    std::string_view name = rest;
    std::string_view type_src;
    if (auto colon = rest.find(':'); colon != std::string_view::npos) {
      name = trim(rest.substr(0, colon));
      type_src = trim(rest.substr(colon + 1));
    }
    if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0])))
      throw ParseError("constant names must be capitalized", line, offset_in(raw, rest) + 1);
    lex.signature().declare(std::string(name));
    if (!type_src.empty())
      lex.signature().declare(std::string(name),
                              parse_type(type_src, line, offset_in(raw, type_src)));
    return;
  }

  auto colon = text.find(':');
  auto equals = text.find('=', colon == std::string_view::npos ? 0 : colon);
  if (colon == std::string_view::npos || equals == std::string_view::npos)
    throw ParseError("expected `word : TYPE = TERM`", line, offset_in(raw, text) + 1);
  std::string_view words = trim(text.substr(0, colon));
  std::string_view type_src = trim(text.substr(colon + 1, equals - colon - 1));
  std::string_view term_src = trim(text.substr(equals + 1));
  if (words.empty()) throw ParseError("missing word", line, offset_in(raw, text) + 1);

  Type type = parse_type(type_src, line, offset_in(raw, type_src));
  Term term = parse_term(term_src, line, offset_in(raw, term_src));
  for (const auto& c : constants_of(term))
    if (!lex.signature().contains(c))
      throw UnknownConstant(c + " (line " + std::to_string(line) + ")");
  try {
    check_term(term, type, lex.signature());
  } catch (const IllTyped& e) {
    throw LexiconTypeMismatch(std::string(words),
                              "declared " + print_type(type, true) + "; " + e.what() +
                                  " (line " + std::to_string(line) + ")");
  }
  TypeScheme scheme = TypeScheme::generalize(type);
  std::size_t start = 0;
  while (start <= words.size()) {
    std::size_t slash = words.find('/', start);
    std::string_view w = trim(words.substr(start, slash == std::string_view::npos
                                                       ? std::string_view::npos
                                                       : slash - start));
    if (w.empty()) throw ParseError("empty word", line, offset_in(raw, words) + 1);
    lex.add(LexEntry{std::string(w), scheme, term});
    if (slash == std::string_view::npos) break;
    start = slash + 1;
  }
}

}  // namespace detail

/// Parses lexicon text into `lex`, after whatever it already holds.
inline void load_lexicon_text(std::string_view text, Lexicon& lex) {
  std::size_t line = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line;
    detail::load_line(text.substr(start, end - start), line, lex);
    start = end + 1;
  }
}

/// The fragment's lexicon, in the order the denotations are introduced.
inline const char* default_lexicon_text() {
  return R"(# Constants
const Alice : e
const Bob : e
const Carol : e
const We : e
const You : e
const Smoke : e -> t
const Love : e -> e -> t
const Buy : e -> e -> t
const For : e -> (e -> t) -> e -> t
const Remember : (e ?> t) -> e -> t
const Remember : (e ?> e ?> t) -> e -> t
const Think : t -> e -> t
const Animate : e -> t
const Not : t -> t

# Proper names and quantificational NPs
alice : e = Alice
bob : e = Bob
everyone : e{t|t} = \c. forall x. c x
someone : e{t|t} = \c. exists x. c x

# Verbs
smoke/smokes : e -> t = Smoke
love/loves : e -> e -> t = Love

# Extraction gap
_ : (e #> g) -> (e #> g) = \c. c
we : e = We
buy/bought : e -> e -> t = Buy

# Wh-phrases
what : (e #> g) -> (e ?> g) = \c. \x. [Not (Animate x)] c x
who/whom : (e #> g) -> (e ?> g) = \c. \x. [Animate x] c x

for : e -> (e -> t) -> e -> t = For
remember/remembers : (e ?> t) -> e -> t = Remember
remember/remembers : (e ?> e ?> t) -> e -> t = Remember

you : e = You
think/thinks : t -> e -> t = Think
)";
}

/// The built-in lexicon. Every entry is type-checked while loading.
inline Lexicon default_lexicon() {
  Lexicon lex;
  load_lexicon_text(default_lexicon_text(), lex);
  return lex;
}

/// Loads a lexicon file. With `extend`, entries are added to the built-in
/// ones; otherwise only the file's words are present. The built-in
/// constants are declared either way.
inline Lexicon load_lexicon(const std::string& path, bool extend) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  Lexicon lex;
  if (extend) {
    lex = default_lexicon();
  } else {
    lex.signature() = default_lexicon().signature();
  }
  load_lexicon_text(buf.str(), lex);
  return lex;
}

}  // namespace contsem

#endif  // CONTSEM_LEXICON_HPP
