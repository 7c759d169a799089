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

// Chart-based enumeration of typed derivations.
//
// Every node of the input tree gets a cell of items. An item is a
// beta-normal term paired with its most general type; variables in item
// types are implicitly quantified, so each rule application puts its inputs
// apart before unifying them with the rule's premises. Leaves hold the
// lexical entries, inner nodes every binary rule applied in both
// orientations, and each cell is then closed under the unary rules up to
// SearchOptions::max_unary steps.
//
// A node with more than two daughters is parsed CKY-style over all of its
// binary bracketings, sharing one cell per span.

#ifndef CONTSEM_DERIVE_HPP
#define CONTSEM_DERIVE_HPP

#include <algorithm>
#include <atomic>
#include <climits>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contsem/error.hpp"
#include "contsem/lexicon.hpp"
#include "contsem/rules.hpp"
#include "contsem/term.hpp"
#include "contsem/type.hpp"

namespace contsem {

// ---------------------------------------------------------------------------
// Input trees

struct SyntaxTree {
  std::string token;
  std::vector<SyntaxTree> children;

  bool leaf() const { return children.empty(); }

  static SyntaxTree word(std::string w) { return SyntaxTree{std::move(w), {}}; }
  static SyntaxTree node(std::vector<SyntaxTree> kids) { return SyntaxTree{{}, std::move(kids)}; }
};

namespace detail {

class TreeParser {
 public:
  explicit TreeParser(std::string_view src) : src_(src) {}

  SyntaxTree parse() {
    skip();
    if (pos_ == src_.size()) fail("empty input");
    SyntaxTree t = item();
    skip();
    if (pos_ != src_.size()) fail("unexpected text after the tree");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, pos_ + 1); }

  void skip() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  SyntaxTree item() {
    skip();
    if (pos_ == src_.size()) fail("unbalanced parentheses");
    if (src_[pos_] == ')') fail("unexpected ')'");
    if (src_[pos_] != '(') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && src_[pos_] != '(' && src_[pos_] != ')' &&
             !std::isspace(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      return SyntaxTree::word(std::string(src_.substr(start, pos_ - start)));
    }
    std::size_t open = pos_++;
    std::vector<SyntaxTree> kids;
    for (;;) {
      skip();
      if (pos_ == src_.size()) {
        pos_ = open;
        fail("unbalanced parentheses");
      }
      if (src_[pos_] == ')') break;
      kids.push_back(item());
    }
    ++pos_;
    if (kids.empty()) {
      pos_ = open;
      fail("empty constituent");
    }
    // A constituent with one daughter is that daughter.
    if (kids.size() == 1) return std::move(kids.front());
    return SyntaxTree::node(std::move(kids));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses a parenthesized tree such as `(Alice (loves Bob))`. A bare token
/// list without parentheses is one flat constituent.
inline SyntaxTree parse_tree(std::string_view src) {
  std::string_view s = src;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  if (!s.empty() && s.front() != '(') return detail::TreeParser("(" + std::string(src) + ")").parse();
  return detail::TreeParser(src).parse();
}

inline std::string print_tree(const SyntaxTree& t) {
  if (t.leaf()) return t.token;
  std::string out = "(";
  for (std::size_t i = 0; i < t.children.size(); ++i) {
    if (i) out += " ";
    out += print_tree(t.children[i]);
  }
  return out + ")";
}

inline std::vector<std::string> tree_leaves(const SyntaxTree& t) {
  std::vector<std::string> out;
  auto go = [&](auto&& self, const SyntaxTree& u) -> void {
    if (u.leaf()) {
      out.push_back(u.token);
      return;
    }
    for (const auto& c : u.children) self(self, c);
  };
  go(go, t);
  return out;
}

/// The flat constituent over `tokens`.
inline SyntaxTree flat_tree(const std::vector<std::string>& tokens) {
  if (tokens.size() == 1) return SyntaxTree::word(tokens.front());
  std::vector<SyntaxTree> kids;
  for (const auto& t : tokens) kids.push_back(SyntaxTree::word(t));
  return SyntaxTree::node(std::move(kids));
}

// ---------------------------------------------------------------------------
// Options and results

inline constexpr std::size_t kDefaultMaxTokens = 12;

struct SearchOptions {
  int order = 2;
  int max_unary = 3;
  int max_type_depth = 12;
  std::optional<Type> goal;
  bool enumerate_bracketings = false;
  bool prefer_ltr = false;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::size_t max_derivations = 8;
  unsigned threads = 1;
  std::size_t fuel = kDefaultFuel;
  /// Forbid function application (at any lifting level) from applying a
  /// value of type (a #> g) -> g, the shape value lifting produces, to a
  /// continuation. Without it any lifted constituent can fill a gap.
  bool continuation_hygiene = true;
  /// Lowering (any level) refuses a question value type. Lowering one makes
  /// a raised wh-phrase's ⇝ part of an outgoing answer type.
  bool lower_questions = false;
  /// Shuffles the order in which rules are tried; output must not change.
  std::optional<std::uint64_t> rule_order_seed;
};

struct DerivationNode {
  Term term;
  Type type;
  std::string rule;        // rule name; "lex" at leaves
  std::string decoration;  // as displayed, relative to surface order
  std::string word;        // leaves only
  bool function_right = false;
  int unary_chain_length = 0;
  std::vector<DerivationNode> children;
};

struct Reading {
  /// Beta-eta normal, binders given distinct readable names.
  Term term;
  Term canonical_term;
  Type type;
  std::vector<DerivationNode> derivations;
  std::vector<std::string> bracketings;
  /// Fewest right-to-left evaluations over all derivations.
  int ltr_rank = 0;

  std::string text() const { return print_term(term) + " : " + print_type(type, true); }
};

struct CellStats {
  std::size_t binary_attempts = 0;
  std::size_t depth_pruned = 0;
  std::size_t fuel_exhausted = 0;
  std::size_t hygiene_blocked = 0;
  std::size_t subsumed = 0;
  /// Items left at the unary bound with rules still applicable.
  std::size_t unary_frontier = 0;
};

struct CellReport {
  std::string label;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t items = 0;
  std::vector<std::string> types;
  CellStats stats;
};

struct Diagnostics {
  std::vector<CellReport> cells;
  std::size_t root_items = 0;
  std::size_t goal_rejected = 0;

  std::size_t depth_pruned() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.stats.depth_pruned;
    return n;
  }

  std::string render(std::size_t max_types = 8) const {
    std::string out;
    for (const auto& c : cells) {
      out += "  " + c.label + ": " + std::to_string(c.items) + " items";
      if (c.stats.depth_pruned) out += ", " + std::to_string(c.stats.depth_pruned) + " pruned by type depth";
      if (!c.types.empty()) {
        out += "; types";
        for (std::size_t i = 0; i < c.types.size() && i < max_types; ++i) out += " [" + c.types[i] + "]";
        if (c.types.size() > max_types)
          out += " ... (" + std::to_string(c.types.size() - max_types) + " more)";
      }
      out += "\n";
    }
    out += "  root: " + std::to_string(root_items) + " items, " + std::to_string(goal_rejected) +
           " rejected by goal\n";
    return out;
  }
};

struct DeriveResult {
  std::vector<Reading> readings;
  Diagnostics diagnostics;

  bool no_derivation() const { return readings.empty(); }
};

// ---------------------------------------------------------------------------
// Chart

namespace detail {

struct Cell;

struct Origin {
  enum class Kind { Lexical, Unary, Binary };
  Kind kind = Kind::Lexical;
  int rule = -1;
  bool function_right = false;
  const Cell* left_cell = nullptr;  // unary: the cell itself
  std::size_t left = 0;
  const Cell* right_cell = nullptr;
  std::size_t right = 0;
  std::size_t entry = 0;

  bool operator==(const Origin& o) const {
    return kind == o.kind && rule == o.rule && function_right == o.function_right &&
           left_cell == o.left_cell && left == o.left && right_cell == o.right_cell &&
           right == o.right && entry == o.entry;
  }
};

struct Item {
  Term term;
  Type type;
  std::string term_key;
  std::string key;
  int unary_depth = 0;
  std::vector<Origin> origins;
  bool hidden = false;
  int rank = INT_MAX;
};

struct Cell {
  std::string label;
  std::string token;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<Item> items;
  std::unordered_map<std::string, std::size_t> index;
  CellStats stats;
};

class Chart {
 public:
  Chart(const GrammarTower& grammar, const Lexicon& lex, const SearchOptions& opts)
      : grammar_(grammar), lex_(lex), opts_(opts) {
    for (std::size_t i = 0; i < grammar.rules().size(); ++i) {
      const Rule& r = grammar.rules()[i];
      var_counts_.push_back(r.var_count());
      (r.unary() ? unary_ : binary_).push_back(static_cast<int>(i));
    }
    if (opts.rule_order_seed) {
      std::mt19937_64 rng(*opts.rule_order_seed);
      std::shuffle(unary_.begin(), unary_.end(), rng);
      std::shuffle(binary_.begin(), binary_.end(), rng);
    }
    spare_threads_ = opts.threads > 1 ? static_cast<int>(opts.threads) - 1 : 0;
  }

  const Cell* build(const SyntaxTree& t) { return build_at(t, 0); }

  std::vector<const Cell*> cells() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::vector<const Cell*> out;
    for (const auto& c : cells_) out.push_back(c.get());
    std::sort(out.begin(), out.end(), [](const Cell* a, const Cell* b) {
      return std::make_pair(a->begin, b->end) < std::make_pair(b->begin, a->end);
    });
    return out;
  }

  const GrammarTower& grammar() const { return grammar_; }

 private:
  Cell* new_cell(std::string label, std::size_t begin, std::size_t end) {
    auto c = std::make_unique<Cell>();
    c->label = std::move(label);
    c->begin = begin;
    c->end = end;
    std::lock_guard<std::mutex> lock(mu_);
    cells_.push_back(std::move(c));
    return cells_.back().get();
  }

  const Cell* build_at(const SyntaxTree& t, std::size_t begin) {
    if (t.leaf()) return leaf(t.token, begin);
    if (t.children.size() == 2) {
      std::size_t mid = begin + tree_leaves(t.children[0]).size();
      const Cell* left = nullptr;
      const Cell* right = nullptr;
      if (take_thread()) {
        auto fut = std::async(std::launch::async, [&] { return build_at(t.children[0], begin); });
        right = build_at(t.children[1], mid);
        left = fut.get();
        ++spare_threads_;
      } else {
        left = build_at(t.children[0], begin);
        right = build_at(t.children[1], mid);
      }
      Cell* cell = new_cell(print_tree(t), begin, right->end);
      combine(*cell, *left, *right);
      close(*cell);
      return cell;
    }
    if (t.children.size() > opts_.max_tokens)
      throw TooManyBracketings(t.children.size(), opts_.max_tokens);
    std::vector<const Cell*> units;
    std::size_t pos = begin;
    for (const auto& c : t.children) {
      units.push_back(build_at(c, pos));
      pos = units.back()->end;
    }
    return cky(units);
  }

  bool take_thread() {
    int n = spare_threads_.load();
    while (n > 0)
      if (spare_threads_.compare_exchange_weak(n, n - 1)) return true;
    return false;
  }

  const Cell* cky(const std::vector<const Cell*>& units) {
    const std::size_t n = units.size();
    std::vector<std::vector<const Cell*>> span(n, std::vector<const Cell*>(n + 1, nullptr));
    for (std::size_t i = 0; i < n; ++i) span[i][i + 1] = units[i];
    for (std::size_t len = 2; len <= n; ++len) {
      for (std::size_t i = 0; i + len <= n; ++i) {
        std::size_t j = i + len;
        std::string label = "[";
        for (std::size_t k = i; k < j; ++k) label += (k > i ? " " : "") + units[k]->label;
        Cell* cell = new_cell(label + "]", units[i]->begin, units[j - 1]->end);
        for (std::size_t k = i + 1; k < j; ++k) combine(*cell, *span[i][k], *span[k][j]);
        close(*cell);
        span[i][j] = cell;
      }
    }
    return span[0][n];
  }

  const Cell* leaf(const std::string& token, std::size_t begin) {
    Cell* cell = new_cell(token, begin, begin + 1);
    cell->token = token;
    const auto& entries = lex_.lookup(token);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      Origin o;
      o.kind = Origin::Kind::Lexical;
      o.entry = i;
      Term term = beta_normalize(entries[i].term, opts_.fuel);
      add(*cell, std::move(term), canonical_type(entries[i].scheme.body), 0, o);
    }
    close(*cell);
    return cell;
  }

  // Applies rule `ri` to `args` (in premise order). nullopt when the types do
  // not unify or the result is pruned.
  std::optional<std::pair<Term, Type>> apply(int ri, const std::vector<const Item*>& args,
                                             CellStats& stats) const {
    const Rule& r = grammar_.rules()[static_cast<std::size_t>(ri)];
    Substitution s;
    int offset = var_counts_[static_cast<std::size_t>(ri)];
    for (std::size_t i = 0; i < args.size(); ++i) {
      const Type& a = args[i]->type;
      if (!unify_into(r.premises[i], shift_vars(a, offset), s)) return std::nullopt;
      offset += max_var_id(a) + 1;
    }
    if (opts_.continuation_hygiene && r.arity() == 2 && redeems_lifted_value(s)) {
      ++stats.hygiene_blocked;
      return std::nullopt;
    }
    if (!opts_.lower_questions && r.name.rfind("lower", 0) == 0 &&
        s.apply(Type::var(0)).is(TypeKind::Ques)) {
      ++stats.hygiene_blocked;
      return std::nullopt;
    }
    Type conclusion = canonical_type(s.apply(r.conclusion));
    if (type_depth(conclusion) > opts_.max_type_depth) {
      ++stats.depth_pruned;
      return std::nullopt;
    }
    Term term = r.combinator;
    for (std::size_t i = 0; i < args.size(); ++i) term = substitute(term, r.params[i], args[i]->term);
    try {
      term = beta_normalize(term, opts_.fuel);
    } catch (const FuelExhausted&) {
      ++stats.fuel_exhausted;
      return std::nullopt;
    }
    return std::make_pair(std::move(term), std::move(conclusion));
  }

  // Every binary rule is function application, possibly lifted; lifting
  // keeps its variables 0 (argument) and 1 (result).
  static bool redeems_lifted_value(const Substitution& s) {
    Type arg = s.apply(Type::var(0));
    return arg.is(TypeKind::Cont) && arg.cod() == s.apply(Type::var(1));
  }

  // Returns the index of a newly created item, or nullopt when the item
  // already existed (its origins are extended instead).
  std::optional<std::size_t> add(Cell& cell, Term term, Type type, int depth, const Origin& o) {
    std::string term_key = print_term(canonicalize(term, opts_.fuel));
    std::string key = term_key + " : " + print_type(type);
    auto it = cell.index.find(key);
    if (it != cell.index.end()) {
      Item& item = cell.items[it->second];
      // Unary origins are only recorded from the item's own level, which
      // keeps the origin graph acyclic.
      if (o.kind != Origin::Kind::Unary || item.unary_depth == depth)
        if (std::find(item.origins.begin(), item.origins.end(), o) == item.origins.end())
          item.origins.push_back(o);
      // Alpha variants arrive in rule order; keep the same one whatever that
      // order is. Items at this level are not yet used by the closure.
      if (item.unary_depth == depth && print_term(term) < print_term(item.term)) item.term = std::move(term);
      return std::nullopt;
    }
    Item item;
    item.term = std::move(term);
    item.type = std::move(type);
    item.term_key = std::move(term_key);
    item.key = key;
    item.unary_depth = depth;
    item.origins.push_back(o);
    cell.index.emplace(std::move(key), cell.items.size());
    cell.items.push_back(std::move(item));
    return cell.items.size() - 1;
  }

  void combine(Cell& cell, const Cell& left, const Cell& right) {
    std::vector<const Item*> args(2);
    for (int ri : binary_) {
      for (bool function_right : {false, true}) {
        for (std::size_t a = 0; a < left.items.size(); ++a) {
          if (left.items[a].hidden) continue;
          for (std::size_t b = 0; b < right.items.size(); ++b) {
            if (right.items[b].hidden) continue;
            args[0] = function_right ? &right.items[b] : &left.items[a];
            args[1] = function_right ? &left.items[a] : &right.items[b];
            ++cell.stats.binary_attempts;
            auto out = apply(ri, args, cell.stats);
            if (!out) continue;
            Origin o;
            o.kind = Origin::Kind::Binary;
            o.rule = ri;
            o.function_right = function_right;
            o.left_cell = &left;
            o.left = a;
            o.right_cell = &right;
            o.right = b;
            add(cell, std::move(out->first), std::move(out->second), 0, o);
          }
        }
      }
    }
  }

  // Unary closure, breadth first by chain length, then subsumption and
  // ranking.
  void close(Cell& cell) {
    std::vector<std::size_t> frontier(cell.items.size());
    std::iota(frontier.begin(), frontier.end(), 0);
    std::vector<const Item*> args(1);
    for (int level = 1; level <= opts_.max_unary && !frontier.empty(); ++level) {
      std::vector<std::size_t> next;
      for (std::size_t idx : frontier) {
        for (int ri : unary_) {
          Item source = cell.items[idx];
          args[0] = &source;
          auto out = apply(ri, args, cell.stats);
          if (!out) continue;
          Origin o;
          o.kind = Origin::Kind::Unary;
          o.rule = ri;
          o.left_cell = &cell;
          o.left = idx;
          if (auto fresh = add(cell, std::move(out->first), std::move(out->second), level, o))
            next.push_back(*fresh);
        }
      }
      frontier = std::move(next);
    }
    cell.stats.unary_frontier = opts_.max_unary > 0 ? frontier.size() : 0;
    hide_subsumed(cell);
    rank(cell);
  }

  // An item whose type is a proper instance of another item's type with the
  // same term, reached in no fewer unary steps, adds nothing new upstream.
  void hide_subsumed(Cell& cell) {
    std::map<std::string, std::vector<std::size_t>> by_term;
    for (std::size_t i = 0; i < cell.items.size(); ++i) by_term[cell.items[i].term_key].push_back(i);
    for (const auto& [_, group] : by_term) {
      if (group.size() < 2) continue;
      for (std::size_t j : group) {
        for (std::size_t i : group) {
          if (i == j) continue;
          const Item& general = cell.items[i];
          Item& specific = cell.items[j];
          if (general.unary_depth <= specific.unary_depth && match_type(general.type, specific.type)) {
            specific.hidden = true;
            ++cell.stats.subsumed;
            break;
          }
        }
      }
    }
  }

  void rank(Cell& cell) const {
    // Unary origins point to lower indices, so one pass in order suffices.
    for (auto& item : cell.items) {
      for (const auto& o : item.origins) item.rank = std::min(item.rank, origin_rank(cell, o));
    }
  }

 public:
  int origin_rank(const Cell& cell, const Origin& o) const {
    switch (o.kind) {
      case Origin::Kind::Lexical:
        return 0;
      case Origin::Kind::Unary:
        return cell.items[o.left].rank;
      case Origin::Kind::Binary: {
        int l = o.left_cell->items[o.left].rank;
        int r = o.right_cell->items[o.right].rank;
        if (l == INT_MAX || r == INT_MAX) return INT_MAX;
        const Rule& rule = grammar_.rules()[static_cast<std::size_t>(o.rule)];
        return l + r + right_to_left_count(display_decoration(rule, o.function_right));
      }
    }
    return INT_MAX;
  }

 private:
  const GrammarTower& grammar_;
  const Lexicon& lex_;
  const SearchOptions& opts_;
  std::vector<int> var_counts_;
  std::vector<int> unary_;
  std::vector<int> binary_;
  std::atomic<int> spare_threads_{0};
  mutable std::mutex mu_;
  std::deque<std::unique_ptr<Cell>> cells_;
};

// Derivation trees for an item, best-ranked first, at most `limit`.
class Extractor {
 public:
  Extractor(const Chart& chart, const Lexicon& lex, std::size_t limit)
      : chart_(chart), lex_(lex), limit_(limit) {}

  const std::vector<DerivationNode>& trees(const Cell& cell, std::size_t idx) {
    auto key = std::make_pair(&cell, idx);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Item& item = cell.items[idx];
    std::vector<const Origin*> origins;
    for (const auto& o : item.origins) origins.push_back(&o);
    // Discovery order depends on rule order; sort on content instead.
    auto order_key = [&](const Origin* o) {
      std::string l, r;
      if (o->kind == Origin::Kind::Unary) l = cell.items[o->left].key;
      if (o->kind == Origin::Kind::Binary) {
        l = o->left_cell->items[o->left].key;
        r = o->right_cell->items[o->right].key;
      }
      return std::make_tuple(chart_.origin_rank(cell, *o), o->rule, o->function_right, o->entry, l, r);
    };
    std::sort(origins.begin(), origins.end(),
              [&](const Origin* a, const Origin* b) { return order_key(a) < order_key(b); });
    std::vector<DerivationNode> out;
    for (const Origin* o : origins) {
      if (out.size() >= limit_) break;
      switch (o->kind) {
        case Origin::Kind::Lexical: {
          DerivationNode n = node(item, "lex", "");
          n.word = cell.token;
          out.push_back(std::move(n));
          break;
        }
        case Origin::Kind::Unary: {
          const Rule& r = rule(o->rule);
          for (const auto& child : trees(cell, o->left)) {
            if (out.size() >= limit_) break;
            DerivationNode n = node(item, r.name, r.decoration);
            n.children.push_back(child);
            out.push_back(std::move(n));
          }
          break;
        }
        case Origin::Kind::Binary: {
          const Rule& r = rule(o->rule);
          const auto& ls = trees(*o->left_cell, o->left);
          const auto& rs = trees(*o->right_cell, o->right);
          for (const auto& l : ls) {
            for (const auto& rt : rs) {
              if (out.size() >= limit_) break;
              DerivationNode n = node(item, r.name, display_decoration(r, o->function_right));
              n.function_right = o->function_right;
              n.children = {l, rt};
              out.push_back(std::move(n));
            }
          }
          break;
        }
      }
    }
    return memo_.emplace(key, std::move(out)).first->second;
  }

  // Surface bracketings under which the item is derivable.
  std::set<std::string> bracketings(const Cell& cell, std::size_t idx) {
    std::set<std::string> out;
    std::vector<std::size_t> stack{idx};
    std::set<std::size_t> seen{idx};
    while (!stack.empty()) {
      std::size_t i = stack.back();
      stack.pop_back();
      for (const auto& o : cell.items[i].origins) {
        if (o.kind == Origin::Kind::Unary) {
          if (seen.insert(o.left).second) stack.push_back(o.left);
        } else if (o.kind == Origin::Kind::Lexical) {
          out.insert(cell.token);
        } else {
          const auto& ls = direct(*o.left_cell, o.left);
          const auto& rs = direct(*o.right_cell, o.right);
          for (const auto& l : ls)
            for (const auto& r : rs) out.insert("(" + l + " " + r + ")");
        }
      }
    }
    return out;
  }

 private:
  const std::set<std::string>& direct(const Cell& cell, std::size_t idx) {
    auto key = std::make_pair(&cell, idx);
    if (auto it = brackets_.find(key); it != brackets_.end()) return it->second;
    auto set = bracketings(cell, idx);
    return brackets_.emplace(key, std::move(set)).first->second;
  }

  const Rule& rule(int i) const { return chart_.grammar().rules()[static_cast<std::size_t>(i)]; }

  static DerivationNode node(const Item& item, std::string rule, std::string decoration) {
    DerivationNode n;
    n.term = item.term;
    n.type = item.type;
    n.rule = std::move(rule);
    n.decoration = std::move(decoration);
    n.unary_chain_length = item.unary_depth;
    return n;
  }

  const Chart& chart_;
  const Lexicon& lex_;
  std::size_t limit_;
  std::map<std::pair<const Cell*, std::size_t>, std::vector<DerivationNode>> memo_;
  std::map<std::pair<const Cell*, std::size_t>, std::set<std::string>> brackets_;
};

inline const Rule* find_rule(const GrammarTower& g, const std::string& name) {
  for (const auto& r : g.rules())
    if (r.name == name) return &r;
  return nullptr;
}

}  // namespace detail

/// Instantiates the node types of a derivation jointly, so each shows the
/// type it has in context rather than its most general one. Variables left
/// open are renamed in order of first appearance from the root.
inline void specialize(DerivationNode& root, const GrammarTower& grammar) {
  Substitution s;
  int next = 0;
  auto fresh = [&](const Type& t) {
    Type u = shift_vars(t, next);
    next += max_var_id(t) + 1;
    return u;
  };
  std::vector<std::pair<DerivationNode*, Type>> assigned;
  auto go = [&](auto&& self, DerivationNode& n, const Type& here) -> void {
    assigned.emplace_back(&n, here);
    if (n.children.empty()) return;
    const Rule* r = detail::find_rule(grammar, n.rule);
    if (!r) return;
    int base = next;
    next += r->var_count();
    unify_into(shift_vars(r->conclusion, base), here, s);
    // Children are stored in surface order; premises in function-first order.
    const bool function_right = r->arity() == 2 && n.function_right;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      std::size_t premise = function_right ? 1 - i : i;
      Type child = fresh(n.children[i].type);
      unify_into(shift_vars(r->premises[premise], base), child, s);
      self(self, n.children[i], child);
    }
  };
  go(go, root, fresh(root.type));
  std::vector<Type> resolved;
  for (auto& [node, t] : assigned) resolved.push_back(s.apply(t));
  std::map<int, int> names;
  for (const auto& t : resolved)
    for (int v : type_vars(t)) names.emplace(v, static_cast<int>(names.size()));
  for (std::size_t i = 0; i < assigned.size(); ++i)
    assigned[i].first->type = map_vars(resolved[i], [&](int v) { return names.at(v); });
}

/// Stable sort by the fewest right-to-left evaluations.
inline std::vector<Reading> rank_ltr(std::vector<Reading> readings) {
  std::stable_sort(readings.begin(), readings.end(),
                   [](const Reading& a, const Reading& b) { return a.ltr_rank < b.ltr_rank; });
  return readings;
}

namespace detail {

inline void check_words(const SyntaxTree& tree, const Lexicon& lex) {
  for (const auto& w : tree_leaves(tree))
    if (!lex.contains(w)) throw UnknownWord(w);
}

inline DeriveResult collect(const Chart& chart, const Cell& root, const Lexicon& lex,
                            const SearchOptions& opts, bool record_bracketings) {
  DeriveResult result;
  for (const Cell* c : chart.cells()) {
    CellReport rep;
    rep.label = c->label;
    rep.begin = c->begin;
    rep.end = c->end;
    rep.stats = c->stats;
    std::set<std::string> types;
    for (const auto& item : c->items) {
      if (item.hidden) continue;
      ++rep.items;
      types.insert(print_type(item.type, true));
    }
    rep.types.assign(types.begin(), types.end());
    result.diagnostics.cells.push_back(std::move(rep));
  }

  std::vector<std::size_t> matching;
  for (std::size_t i = 0; i < root.items.size(); ++i) {
    ++result.diagnostics.root_items;
    if (opts.goal && !match_type(*opts.goal, root.items[i].type)) {
      ++result.diagnostics.goal_rejected;
      continue;
    }
    matching.push_back(i);
  }
  // Among the accepted items, a type instance of another item with the same
  // term is the same reading.
  std::vector<std::size_t> chosen;
  for (std::size_t j : matching) {
    bool subsumed = false;
    for (std::size_t i : matching) {
      if (i == j || root.items[i].term_key != root.items[j].term_key) continue;
      if (match_type(root.items[i].type, root.items[j].type)) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) chosen.push_back(j);
  }

  Extractor extractor(chart, lex, opts.max_derivations);
  for (std::size_t i : chosen) {
    const Item& item = root.items[i];
    Reading r;
    r.term = tidy_binders(eta_normalize(item.term));
    r.canonical_term = canonicalize(item.term, opts.fuel);
    r.type = item.type;
    r.ltr_rank = item.rank;
    r.derivations = extractor.trees(root, i);
    for (auto& d : r.derivations) specialize(d, chart.grammar());
    if (record_bracketings) {
      auto b = extractor.bracketings(root, i);
      r.bracketings.assign(b.begin(), b.end());
    }
    result.readings.push_back(std::move(r));
  }
  std::sort(result.readings.begin(), result.readings.end(), [](const Reading& a, const Reading& b) {
    std::string ta = print_type(a.type, true), tb = print_type(b.type, true);
    if (ta != tb) return ta < tb;
    return print_term(a.term) < print_term(b.term);
  });
  if (opts.prefer_ltr) result.readings = rank_ltr(std::move(result.readings));
  return result;
}

}  // namespace detail

/// Union of derive() over every binary bracketing of `tokens`.
inline DeriveResult derive_sentence(const std::vector<std::string>& tokens, const GrammarTower& grammar,
                                    const Lexicon& lex, const SearchOptions& opts) {
  if (tokens.empty()) throw ParseError("empty input", 1, 1);
  if (tokens.size() > opts.max_tokens) throw TooManyBracketings(tokens.size(), opts.max_tokens);
  SyntaxTree flat = flat_tree(tokens);
  detail::check_words(flat, lex);
  detail::Chart chart(grammar, lex, opts);
  const detail::Cell* root = chart.build(flat);
  return detail::collect(chart, *root, lex, opts, true);
}

/// All readings of `tree`. With opts.enumerate_bracketings the tree's own
/// structure is ignored and every bracketing of its leaves is tried.
inline DeriveResult derive(const SyntaxTree& tree, const GrammarTower& grammar, const Lexicon& lex,
                           const SearchOptions& opts) {
  if (opts.enumerate_bracketings) return derive_sentence(tree_leaves(tree), grammar, lex, opts);
  detail::check_words(tree, lex);
  detail::Chart chart(grammar, lex, opts);
  const detail::Cell* root = chart.build(tree);
  bool flat = false;
  auto scan = [&](auto&& self, const SyntaxTree& t) -> void {
    if (t.children.size() > 2) flat = true;
    for (const auto& c : t.children) self(self, c);
  };
  scan(scan, tree);
  DeriveResult result = detail::collect(chart, *root, lex, opts, flat);
  if (!flat)
    for (auto& r : result.readings) r.bracketings = {print_tree(tree)};
  return result;
}

/// Convenience overload building the tower from opts.order.
inline DeriveResult derive(const SyntaxTree& tree, const Lexicon& lex, const SearchOptions& opts) {
  return derive(tree, tower(opts.order), lex, opts);
}

}  // namespace contsem

#endif  // CONTSEM_DERIVE_HPP
