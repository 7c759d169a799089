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

// Symbolic lambda terms: the carrier of every denotation.
//
// Terms are immutable trees shared through reference counting. Binders are
// named; alpha-equivalence and canonical renaming decide when two terms are
// the same reading.
//
// Surface syntax (parse_term / print_term):
//
//   \x. body          lambda (also `\x y. body`)
//   forall x. body    universal quantifier
//   exists x. body    existential quantifier
//   [cond] body       presupposition guard
//   f x  /  f(x)      application, left associative
//
// Capitalized identifiers are constants, lowercase ones are variables.
// The printer always parenthesizes arguments, so `Love(Bob)(Alice)` is both
// the printed form and valid input.

#ifndef CONTSEM_TERM_HPP
#define CONTSEM_TERM_HPP

#include <cctype>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "contsem/error.hpp"

namespace contsem {

enum class TermKind { Var, Const, Lam, App, Forall, Exists, Guard };

class Term {
 public:
  Term() = default;

  static Term var(std::string name) { return make(TermKind::Var, std::move(name), {}, {}); }
  static Term constant(std::string name) {
    return make(TermKind::Const, std::move(name), {}, {});
  }
  static Term lam(std::string bound, Term body) {
    return make(TermKind::Lam, std::move(bound), std::move(body), {});
  }
  static Term app(Term fun, Term arg) {
    return make(TermKind::App, {}, std::move(fun), std::move(arg));
  }
  static Term forall(std::string bound, Term body) {
    return make(TermKind::Forall, std::move(bound), std::move(body), {});
  }
  static Term exists(std::string bound, Term body) {
    return make(TermKind::Exists, std::move(bound), std::move(body), {});
  }
  static Term guard(Term condition, Term body) {
    return make(TermKind::Guard, {}, std::move(condition), std::move(body));
  }
  static Term binder(TermKind kind, std::string bound, Term body) {
    return make(kind, std::move(bound), std::move(body), {});
  }

  /// Left-nested application `f a1 a2 ...`.
  static Term apply(Term fun, std::initializer_list<Term> args) {
    for (const Term& a : args) fun = app(std::move(fun), a);
    return fun;
  }

  bool valid() const { return node_ != nullptr; }
  inline TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }
  bool is_binder() const {
    return is(TermKind::Lam) || is(TermKind::Forall) || is(TermKind::Exists);
  }

  /// Variable/constant name, or the bound identifier of a binder.
  inline const std::string& name() const;
  inline const Term& body() const;
  inline const Term& fun() const;
  inline const Term& arg() const;
  inline const Term& condition() const;

  /// Pointer identity; used to avoid rebuilding unchanged subtrees.
  bool same(const Term& other) const { return node_ == other.node_; }

  /// Structural equality, bound names included.
  friend inline bool operator==(const Term& a, const Term& b);

 private:
  struct Node;

  static inline Term make(TermKind kind, std::string name, Term first, Term second);

  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  std::string name;
  Term first;
  Term second;
};

inline Term Term::make(TermKind kind, std::string name, Term first, Term second) {
  Term t;
  t.node_ = std::make_shared<const Node>(
      Node{kind, std::move(name), std::move(first), std::move(second)});
  return t;
}

inline TermKind Term::kind() const { return node_->kind; }
inline const std::string& Term::name() const { return node_->name; }
inline const Term& Term::body() const {
  return is(TermKind::Guard) ? node_->second : node_->first;
}
inline const Term& Term::fun() const { return node_->first; }
inline const Term& Term::arg() const { return node_->second; }
inline const Term& Term::condition() const { return node_->first; }

inline bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind() || a.node_->name != b.node_->name) return false;
  auto eq = [](const Term& x, const Term& y) {
    return x.valid() == y.valid() && (!x.valid() || x == y);
  };
  return eq(a.node_->first, b.node_->first) && eq(a.node_->second, b.node_->second);
}

namespace detail {

inline void collect_free(const Term& t, std::vector<std::string>& bound,
                         std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Var:
      for (const auto& b : bound)
        if (b == t.name()) return;
      out.insert(t.name());
      return;
    case TermKind::Const:
      return;
    case TermKind::App:
      collect_free(t.fun(), bound, out);
      collect_free(t.arg(), bound, out);
      return;
    case TermKind::Guard:
      collect_free(t.condition(), bound, out);
      collect_free(t.body(), bound, out);
      return;
    default:
      bound.push_back(t.name());
      collect_free(t.body(), bound, out);
      bound.pop_back();
  }
}

inline bool occurs_free(const Term& t, const std::string& v) {
  switch (t.kind()) {
    case TermKind::Var:
      return t.name() == v;
    case TermKind::Const:
      return false;
    case TermKind::App:
      return occurs_free(t.fun(), v) || occurs_free(t.arg(), v);
    case TermKind::Guard:
      return occurs_free(t.condition(), v) || occurs_free(t.body(), v);
    default:
      return t.name() != v && occurs_free(t.body(), v);
  }
}

inline void collect_names(const Term& t, std::set<std::string>& out) {
  if (!t.is(TermKind::Const)) {
    if (!t.name().empty()) out.insert(t.name());
  }
  if (t.is(TermKind::Var) || t.is(TermKind::Const)) return;
  if (t.is(TermKind::App)) {
    collect_names(t.fun(), out);
    collect_names(t.arg(), out);
  } else if (t.is(TermKind::Guard)) {
    collect_names(t.condition(), out);
    collect_names(t.body(), out);
  } else {
    collect_names(t.body(), out);
  }
}

}  // namespace detail

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::collect_free(t, bound, out);
  return out;
}

inline bool is_free_in(const std::string& v, const Term& t) {
  return detail::occurs_free(t, v);
}

/// Number of nodes in the tree.
inline std::size_t term_size(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return 1;
    case TermKind::App:
      return 1 + term_size(t.fun()) + term_size(t.arg());
    case TermKind::Guard:
      return 1 + term_size(t.condition()) + term_size(t.body());
    default:
      return 1 + term_size(t.body());
  }
}

inline std::size_t count_guards(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return 0;
    case TermKind::App:
      return count_guards(t.fun()) + count_guards(t.arg());
    case TermKind::Guard:
      return 1 + count_guards(t.condition()) + count_guards(t.body());
    default:
      return count_guards(t.body());
  }
}

namespace detail {

class Substituter {
 public:
  Substituter(const std::string& v, const Term& s)
      : v_(v), s_(s), fv_s_(free_vars(s)) {}

  Term run(const Term& t) { return go(t); }

 private:
  Term go(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        return t.name() == v_ ? s_ : t;
      case TermKind::Const:
        return t;
      case TermKind::App: {
        Term f = go(t.fun());
        Term a = go(t.arg());
        if (f.same(t.fun()) && a.same(t.arg())) return t;
        return Term::app(std::move(f), std::move(a));
      }
      case TermKind::Guard: {
        Term c = go(t.condition());
        Term b = go(t.body());
        if (c.same(t.condition()) && b.same(t.body())) return t;
        return Term::guard(std::move(c), std::move(b));
      }
      default:
        break;
    }
    const std::string& y = t.name();
    if (y == v_ || !occurs_free(t.body(), v_)) return t;
    if (!fv_s_.count(y)) {
      Term b = go(t.body());
      return Term::binder(t.kind(), y, std::move(b));
    }
    // y would capture a free variable of s: rename the binder first.
    std::set<std::string> avoid = fv_s_;
    detail::collect_names(t.body(), avoid);
    avoid.insert(v_);
    std::string fresh = y + "'";
    while (avoid.count(fresh)) fresh += "'";
    Term renamed = Substituter(y, Term::var(fresh)).run(t.body());
    return Term::binder(t.kind(), fresh, go(renamed));
  }

  const std::string& v_;
  const Term& s_;
  std::set<std::string> fv_s_;
};

}  // namespace detail

/// Capture-avoiding substitution t[v := s].
inline Term substitute(const Term& t, const std::string& v, const Term& s) {
  return detail::Substituter(v, s).run(t);
}

inline constexpr std::size_t kDefaultFuel = 10000;

namespace detail {

// Leftmost-outermost reduction. A guard found in head position is floated
// outward, ([c] f) a => [c] (f a), so that guards never block a redex.
class Normalizer {
 public:
  explicit Normalizer(std::size_t fuel) : fuel_(fuel) {}

  Term norm(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
      case TermKind::Const:
        return t;
      case TermKind::Lam:
      case TermKind::Forall:
      case TermKind::Exists: {
        Term b = norm(t.body());
        return b.same(t.body()) ? t : Term::binder(t.kind(), t.name(), b);
      }
      case TermKind::Guard: {
        Term c = norm(t.condition());
        Term b = norm(t.body());
        if (c.same(t.condition()) && b.same(t.body())) return t;
        return Term::guard(std::move(c), std::move(b));
      }
      case TermKind::App: {
        Term w = whnf(t);
        if (!w.is(TermKind::App)) return norm(w);
        Term f = norm(w.fun());
        Term a = norm(w.arg());
        if (f.same(w.fun()) && a.same(w.arg())) return w;
        return Term::app(std::move(f), std::move(a));
      }
    }
    return t;
  }

 private:
  Term whnf(Term t) {
    while (t.is(TermKind::App)) {
      Term head = whnf(t.fun());
      if (head.is(TermKind::Lam)) {
        tick();
        t = substitute(head.body(), head.name(), t.arg());
      } else if (head.is(TermKind::Guard)) {
        tick();
        t = Term::guard(head.condition(), Term::app(head.body(), t.arg()));
      } else {
        return head.same(t.fun()) ? t : Term::app(head, t.arg());
      }
    }
    return t;
  }

  void tick() {
    if (++steps_ > fuel_) throw FuelExhausted(fuel_);
  }

  std::size_t fuel_;
  std::size_t steps_ = 0;
};

}  // namespace detail

/// Beta normal form by leftmost-outermost reduction.
/// Throws FuelExhausted when more than `fuel` steps are needed.
inline Term beta_normalize(const Term& t, std::size_t fuel = kDefaultFuel) {
  return detail::Normalizer(fuel).norm(t);
}

/// Contracts every eta redex \x. f x with x not free in f.
inline Term eta_normalize(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      return t;
    case TermKind::App: {
      Term f = eta_normalize(t.fun());
      Term a = eta_normalize(t.arg());
      if (f.same(t.fun()) && a.same(t.arg())) return t;
      return Term::app(std::move(f), std::move(a));
    }
    case TermKind::Guard: {
      Term c = eta_normalize(t.condition());
      Term b = eta_normalize(t.body());
      if (c.same(t.condition()) && b.same(t.body())) return t;
      return Term::guard(std::move(c), std::move(b));
    }
    case TermKind::Lam: {
      Term b = eta_normalize(t.body());
      if (b.is(TermKind::App) && b.arg().is(TermKind::Var) &&
          b.arg().name() == t.name() && !is_free_in(t.name(), b.fun()))
        return b.fun();
      return b.same(t.body()) ? t : Term::lam(t.name(), std::move(b));
    }
    default: {
      Term b = eta_normalize(t.body());
      return b.same(t.body()) ? t : Term::binder(t.kind(), t.name(), b);
    }
  }
}

namespace detail {

inline bool alpha_eq(const Term& a, const Term& b,
                     std::vector<std::pair<std::string, std::string>>& env) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case TermKind::Var: {
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        bool hit_a = it->first == a.name();
        bool hit_b = it->second == b.name();
        if (hit_a || hit_b) return hit_a && hit_b;
      }
      return a.name() == b.name();
    }
    case TermKind::Const:
      return a.name() == b.name();
    case TermKind::App:
      return alpha_eq(a.fun(), b.fun(), env) && alpha_eq(a.arg(), b.arg(), env);
    case TermKind::Guard:
      return alpha_eq(a.condition(), b.condition(), env) &&
             alpha_eq(a.body(), b.body(), env);
    default: {
      env.emplace_back(a.name(), b.name());
      bool r = alpha_eq(a.body(), b.body(), env);
      env.pop_back();
      return r;
    }
  }
}

class Renamer {
 public:
  explicit Renamer(std::set<std::string> avoid) : avoid_(std::move(avoid)) {}

  Term go(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var: {
        auto it = scope_.find(t.name());
        if (it == scope_.end() || it->second.empty()) return t;
        return Term::var(it->second.back());
      }
      case TermKind::Const:
        return t;
      case TermKind::App:
        return Term::app(go(t.fun()), go(t.arg()));
      case TermKind::Guard:
        return Term::guard(go(t.condition()), go(t.body()));
      default: {
        std::string fresh = next();
        scope_[t.name()].push_back(fresh);
        Term b = go(t.body());
        scope_[t.name()].pop_back();
        return Term::binder(t.kind(), fresh, std::move(b));
      }
    }
  }

 private:
  std::string next() {
    for (;;) {
      std::string n = "v" + std::to_string(counter_++);
      if (!avoid_.count(n)) return n;
    }
  }

  std::set<std::string> avoid_;
  std::unordered_map<std::string, std::vector<std::string>> scope_;
  std::size_t counter_ = 0;
};

}  // namespace detail

inline bool alpha_equal(const Term& a, const Term& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return detail::alpha_eq(a, b, env);
}

/// Renames binders to v0, v1, ... in pre-order without normalizing.
inline Term rename_binders(const Term& t) {
  return detail::Renamer(free_vars(t)).go(t);
}

/// Gives every binder a distinct, readable name: its own base name when
/// still free to use, otherwise the next unused of x, y, z, w, ...
inline Term tidy_binders(const Term& t) {
  std::set<std::string> used = free_vars(t);
  std::unordered_map<std::string, std::vector<std::string>> scope;
  auto pick = [&](const std::string& original) {
    std::string base = original;
    while (base.size() > 1 && (base.back() == '\'' ||
                               std::isdigit(static_cast<unsigned char>(base.back()))))
      base.pop_back();
    if (!used.count(base)) return base;
    for (const char* c : {"x", "y", "z", "w", "u", "v", "s", "r", "q", "p", "n", "m"})
      if (!used.count(c)) return std::string(c);
    for (std::size_t i = 1;; ++i)
      if (!used.count(base + std::to_string(i))) return base + std::to_string(i);
  };
  auto go = [&](auto&& self, const Term& u) -> Term {
    switch (u.kind()) {
      case TermKind::Var: {
        auto it = scope.find(u.name());
        if (it == scope.end() || it->second.empty()) return u;
        return Term::var(it->second.back());
      }
      case TermKind::Const:
        return u;
      case TermKind::App:
        return Term::app(self(self, u.fun()), self(self, u.arg()));
      case TermKind::Guard:
        return Term::guard(self(self, u.condition()), self(self, u.body()));
      default: {
        std::string fresh = pick(u.name());
        used.insert(fresh);
        scope[u.name()].push_back(fresh);
        Term b = self(self, u.body());
        scope[u.name()].pop_back();
        return Term::binder(u.kind(), fresh, std::move(b));
      }
    }
  };
  return go(go, t);
}

/// Beta, then eta, then deterministic binder renaming. Two terms denote the
/// same reading iff their canonical forms are structurally equal.
inline Term canonicalize(const Term& t, std::size_t fuel = kDefaultFuel) {
  return rename_binders(eta_normalize(beta_normalize(t, fuel)));
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline void print_term_to(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Const:
      out += t.name();
      return;
    case TermKind::Lam:
      out += "\\" + t.name() + ". ";
      print_term_to(t.body(), out);
      return;
    case TermKind::Forall:
      out += "forall " + t.name() + ". ";
      print_term_to(t.body(), out);
      return;
    case TermKind::Exists:
      out += "exists " + t.name() + ". ";
      print_term_to(t.body(), out);
      return;
    case TermKind::Guard:
      out += "[";
      print_term_to(t.condition(), out);
      out += "] ";
      print_term_to(t.body(), out);
      return;
    case TermKind::App: {
      const Term& f = t.fun();
      bool wrap = !(f.is(TermKind::Var) || f.is(TermKind::Const) ||
                    f.is(TermKind::App));
      if (wrap) out += "(";
      print_term_to(f, out);
      if (wrap) out += ")";
      out += "(";
      print_term_to(t.arg(), out);
      out += ")";
      return;
    }
  }
}

}  // namespace detail

inline std::string print_term(const Term& t) {
  std::string out;
  detail::print_term_to(t, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class TermParser {
 public:
  TermParser(std::string_view src, std::size_t line, std::size_t column0)
      : src_(src), line_(line), column0_(column0) {}

  Term parse_all() {
    Term t = term();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("term: " + what, line_, column0_ + pos_ + 1);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  bool peek(std::string_view s) {
    skip_ws();
    return src_.substr(pos_, s.size()) == s;
  }

  void expect(std::string_view s) {
    if (!peek(s)) fail("expected '" + std::string(s) + "'");
    pos_ += s.size();
  }

  bool peek_ident() {
    skip_ws();
    return pos_ < src_.size() && ident_start(src_[pos_]);
  }

  std::string ident() {
    skip_ws();
    if (pos_ >= src_.size() || !ident_start(src_[pos_])) fail("expected identifier");
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  bool peek_keyword(std::string_view kw) {
    skip_ws();
    if (src_.substr(pos_, kw.size()) != kw) return false;
    std::size_t end = pos_ + kw.size();
    return end >= src_.size() || !ident_char(src_[end]);
  }

  std::string variable() {
    std::string v = ident();
    if (std::isupper(static_cast<unsigned char>(v[0])))
      fail("binder '" + v + "' must be a lowercase variable");
    return v;
  }

  Term term() {
    if (peek("\\") || peek("\xCE\xBB")) {  // backslash or UTF-8 lambda
      pos_ += src_[pos_] == '\\' ? 1 : 2;
      std::vector<std::string> vars{variable()};
      while (peek_ident()) vars.push_back(variable());
      expect(".");
      Term body = term();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = Term::lam(*it, std::move(body));
      return body;
    }
    if (peek_keyword("forall") || peek_keyword("exists")) {
      bool all = peek_keyword("forall");
      pos_ += 6;
      std::vector<std::string> vars{variable()};
      while (peek_ident()) vars.push_back(variable());
      expect(".");
      Term body = term();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it)
        body = all ? Term::forall(*it, std::move(body))
                   : Term::exists(*it, std::move(body));
      return body;
    }
    if (peek("[")) {
      ++pos_;
      Term cond = term();
      expect("]");
      return Term::guard(std::move(cond), term());
    }
    return application();
  }

  bool at_atom() {
    skip_ws();
    if (pos_ >= src_.size()) return false;
    if (src_[pos_] == '(') return true;
    return ident_start(src_[pos_]) && !peek_keyword("forall") &&
           !peek_keyword("exists");
  }

  Term application() {
    if (!at_atom()) {
      // Binders and guards may close an application: f \x. x
      if (peek("\\") || peek("[") || peek_keyword("forall") || peek_keyword("exists"))
        return term();
      fail(pos_ < src_.size() ? "unexpected '" + std::string(1, src_[pos_]) + "'"
                              : "unexpected end of input");
    }
    Term t = atom();
    for (;;) {
      if (at_atom()) {
        t = Term::app(std::move(t), atom());
      } else if (peek("\\") || peek("[") || peek_keyword("forall") ||
                 peek_keyword("exists")) {
        t = Term::app(std::move(t), term());
      } else {
        return t;
      }
    }
  }

  Term atom() {
    skip_ws();
    if (src_[pos_] == '(') {
      ++pos_;
      Term t = term();
      expect(")");
      return t;
    }
    std::string name = ident();
    if (std::isupper(static_cast<unsigned char>(name[0]))) return Term::constant(name);
    return Term::var(name);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column0_;
};

}  // namespace detail

/// Parses the term surface syntax. `line`/`column0` only position errors.
inline Term parse_term(std::string_view src, std::size_t line = 0,
                       std::size_t column0 = 0) {
  return detail::TermParser(src, line, column0).parse_all();
}

/// Constants occurring in t, in first-occurrence order.
inline std::vector<std::string> constants_of(const Term& t) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Term& u) -> void {
    switch (u.kind()) {
      case TermKind::Const:
        for (const auto& c : out)
          if (c == u.name()) return;
        out.push_back(u.name());
        return;
      case TermKind::Var:
        return;
      case TermKind::App:
        self(self, u.fun());
        self(self, u.arg());
        return;
      case TermKind::Guard:
        self(self, u.condition());
        self(self, u.body());
        return;
      default:
        self(self, u.body());
    }
  };
  walk(walk, t);
  return out;
}

}  // namespace contsem

#endif  // CONTSEM_TERM_HPP
