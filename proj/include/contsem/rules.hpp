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

// Semantic composition rules and the grammar tower.
//
// A rule is a typed combinator: premise types, a conclusion type over the
// same variables, and a term whose free variables (`params`) stand for the
// premise denotations. Lifting an n-ary rule along a permutation threads a
// continuation through the premises in the permuted evaluation order; doing
// that to every rule of a grammar, and adding value lifting and lowering,
// lifts the grammar. The tower G0, G1, G2, ... starts from plain function
// application.

#ifndef CONTSEM_RULES_HPP
#define CONTSEM_RULES_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contsem/check.hpp"
#include "contsem/error.hpp"
#include "contsem/term.hpp"
#include "contsem/type.hpp"

namespace contsem {

struct Rule {
  std::string name;
  /// Short display tag: FA, ∧, ∨, >, <, ∧*, ∨*, >^>, ... For binary rules the
  /// first premise is the function side and the tag assumes it stands on the
  /// left; see display_decoration().
  std::string decoration;
  std::vector<Type> premises;
  Type conclusion;
  Term combinator;
  std::vector<std::string> params;
  /// How many times the rule has been lifted from a base rule.
  int lifts = 0;
  /// Number of continuation levels its combinator already binds.
  int cont_depth = 0;

  std::size_t arity() const { return premises.size(); }
  bool unary() const { return premises.size() == 1; }

  /// Variable ids used by the rule are 0 .. var_count() - 1.
  int var_count() const {
    int m = max_var_id(conclusion);
    for (const auto& p : premises) m = std::max(m, max_var_id(p));
    return m + 1;
  }

  /// \p1 ... \pn. combinator
  Term closed_combinator() const {
    Term t = combinator;
    for (auto it = params.rbegin(); it != params.rend(); ++it) t = Term::lam(*it, t);
    return t;
  }

  /// p1 -> ... -> pn -> conclusion, the type of closed_combinator().
  Type combinator_type() const {
    Type t = conclusion;
    for (auto it = premises.rbegin(); it != premises.rend(); ++it) t = Type::fun(*it, t);
    return t;
  }
};

/// The decoration shown in a derivation: evaluation-order marks are relative
/// to surface position, so they flip when the function daughter is on the
/// right.
inline std::string display_decoration(const Rule& r, bool function_right) {
  if (!function_right || r.arity() != 2) return r.decoration;
  std::string out = r.decoration;
  for (char& c : out) {
    if (c == '>')
      c = '<';
    else if (c == '<')
      c = '>';
  }
  return out;
}

/// Applications that evaluate the right daughter before the left one.
inline int right_to_left_count(const std::string& decoration) {
  return static_cast<int>(std::count(decoration.begin(), decoration.end(), '<'));
}

namespace detail {

inline std::string continuation_name(int level) {
  if (level == 1) return "c";
  if (level == 2) return "d";
  return "k" + std::to_string(level);
}

inline std::string param_base(const std::string& p) {
  std::size_t end = p.size();
  while (end > 1 && std::isdigit(static_cast<unsigned char>(p[end - 1]))) --end;
  return p.substr(0, end);
}

}  // namespace detail

/// Function application: f : a -> b, x : a  gives  f(x) : b.
inline Rule function_application() {
  Rule r;
  r.name = "FA";
  r.decoration = "FA";
  r.premises = {Type::fun(Type::var(0), Type::var(1)), Type::var(0)};
  r.conclusion = Type::var(1);
  r.params = {"f", "x"};
  r.combinator = Term::app(Term::var("f"), Term::var("x"));
  return r;
}

/// Value lifting: x : a  gives  \c. c(x) : a{g|g}.
inline Rule value_lift() {
  Rule r;
  r.name = "lift";
  r.decoration = "∧";
  r.premises = {Type::var(0)};
  r.conclusion = Type::lifted(Type::var(0), Type::var(1), Type::var(1));
  r.params = {"x"};
  r.combinator = Term::lam("c", Term::app(Term::var("c"), Term::var("x")));
  r.cont_depth = 1;
  return r;
}

/// Value lowering: x : a{a|g}  gives  x(\y. y) : g.
inline Rule value_lower() {
  Rule r;
  r.name = "lower";
  r.decoration = "∨";
  r.premises = {Type::lifted(Type::var(0), Type::var(0), Type::var(1))};
  r.conclusion = Type::var(1);
  r.params = {"x"};
  r.combinator = Term::app(Term::var("x"), Term::lam("y", Term::var("y")));
  r.cont_depth = 1;
  return r;
}

/// FA plus value lifting and lowering.
inline std::vector<Rule> base_rules() {
  return {function_application(), value_lift(), value_lower()};
}

/// Lifts `r` along `sigma` (a permutation of 1..n, sigma[i-1] = position of
/// premise i in evaluation order). Premise i gets type
/// a_i{g_sigma(i) | g_sigma(i)-1}, the conclusion b{g_n|g_0}, and the
/// combinator evaluates the premises in sigma order before passing r's
/// result to the continuation.
inline Rule lift_rule(const Rule& r, const std::vector<int>& sigma) {
  const std::size_t n = r.arity();
  if (sigma.size() != n) throw InvalidPermutation("permutation size does not match arity");
  std::vector<std::size_t> inverse(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    int s = sigma[i];
    if (s < 1 || static_cast<std::size_t>(s) > n || inverse[static_cast<std::size_t>(s - 1)] != n)
      throw InvalidPermutation("not a bijection on 1.." + std::to_string(n));
    inverse[static_cast<std::size_t>(s - 1)] = i;
  }

  Rule out;
  out.lifts = r.lifts + 1;
  out.cont_depth = r.cont_depth + 1;
  const int g0 = r.var_count();
  auto gamma = [g0](int j) { return Type::var(g0 + j); };

  for (std::size_t i = 0; i < n; ++i)
    out.premises.push_back(Type::lifted(r.premises[i], gamma(sigma[i]), gamma(sigma[i] - 1)));
  out.conclusion = Type::lifted(r.conclusion, gamma(static_cast<int>(n)), gamma(0));

  for (const auto& p : r.params)
    out.params.push_back(detail::param_base(p) + std::to_string(out.lifts));

  // Innermost first: c(y), then wrap premises in reverse evaluation order.
  const std::string k = detail::continuation_name(out.cont_depth);
  Term body = Term::app(Term::var(k), r.combinator);
  for (std::size_t step = n; step-- > 0;) {
    std::size_t i = inverse[step];
    body = Term::app(Term::var(out.params[i]), Term::lam(r.params[i], body));
  }
  out.combinator = Term::lam(k, body);

  bool identity = true;
  for (std::size_t i = 0; i < n; ++i)
    if (sigma[i] != static_cast<int>(i) + 1) identity = false;

  if (n == 1) {
    out.name = r.name + "*";
    out.decoration = r.decoration + "*";
  } else if (n == 2) {
    std::string order = identity ? ">" : "<";
    out.name = r.name + (identity ? "/f>x" : "/x>f");
    out.decoration = r.decoration == "FA" ? order : r.decoration + "^" + order;
  } else {
    std::string perm;
    for (int s : sigma) perm += std::to_string(s);
    out.name = r.name + "/" + perm;
    out.decoration = r.decoration + "^[" + perm + "]";
  }
  return out;
}

/// All permutations of 1..n in lexicographic order.
inline std::vector<std::vector<int>> permutations(std::size_t n) {
  std::vector<int> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<int>(i) + 1;
  std::vector<std::vector<int>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Identity of a rule: premise and conclusion types up to a joint renaming
/// of type variables, and the combinator up to beta-eta and alpha, with
/// parameters compared by position.
inline std::string rule_key(const Rule& r) {
  Type joint = r.combinator_type();
  std::string key = std::to_string(r.arity()) + "|" + print_type(canonical_type(joint));
  Term comb = r.combinator;
  for (std::size_t i = 0; i < r.params.size(); ++i)
    comb = substitute(comb, r.params[i], Term::var("p#" + std::to_string(i)));
  return key + "|" + print_term(canonicalize(comb));
}

inline constexpr int kDefaultMaxOrder = 3;

class GrammarTower {
 public:
  int order() const { return order_; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::vector<const Rule*> unary() const { return select(1); }
  std::vector<const Rule*> binary() const { return select(2); }

  /// Rules in dump order: unary, then binary, each in construction order.
  std::vector<const Rule*> ordered() const {
    auto out = unary();
    auto b = binary();
    out.insert(out.end(), b.begin(), b.end());
    return out;
  }

  bool contains(const Rule& r) const { return keys_.count(rule_key(r)) != 0; }

  /// One round of grammar lifting.
  GrammarTower lifted() const {
    GrammarTower next;
    next.order_ = order_ + 1;
    next.add(value_lift());
    next.add(value_lower());
    for (const auto& r : rules_) next.add(r);
    for (const auto& r : rules_)
      for (const auto& sigma : permutations(r.arity())) next.add(lift_rule(r, sigma));
    return next;
  }

  static GrammarTower base() {
    GrammarTower g;
    g.add(function_application());
    return g;
  }

 private:
  std::vector<const Rule*> select(std::size_t arity) const {
    std::vector<const Rule*> out;
    for (const auto& r : rules_)
      if (r.arity() == arity) out.push_back(&r);
    return out;
  }

  void add(Rule r) {
    if (keys_.insert(rule_key(r)).second) rules_.push_back(std::move(r));
  }

  int order_ = 0;
  std::vector<Rule> rules_;
  std::set<std::string> keys_;
};

/// G_k: k rounds of lifting starting from function application alone.
inline GrammarTower tower(int k, int max_order = kDefaultMaxOrder) {
  if (k < 0 || k > max_order) throw OrderTooLarge(k, max_order);
  GrammarTower g = GrammarTower::base();
  for (int i = 0; i < k; ++i) g = g.lifted();
  return g;
}

/// Verifies that the rule's combinator has its advertised type.
inline bool rule_is_sound(const Rule& r) {
  return checks_against(r.closed_combinator(), r.combinator_type(), Signature{});
}

}  // namespace contsem

#endif  // CONTSEM_RULES_HPP
