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

// Types with three distinct arrows:
//
//   a -> b   function         (Fun)
//   a #> b   continuation     (Cont)
//   a ?> b   question         (Ques)
//
// All three associate to the right and never unify with one another.
// `a{g|h}` abbreviates (a #> g) -> h: a value that acts locally like an `a`
// while turning the incoming answer type g into the outgoing answer type h.
//
// Type variables are small integers. Their printed names form a bijection
// with ids (a, b, c, d, f, g, ... skipping e and t, then a1, b1, ...), so
// printing and parsing round-trip exactly.

#ifndef CONTSEM_TYPE_HPP
#define CONTSEM_TYPE_HPP

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "contsem/error.hpp"

namespace contsem {

enum class TypeKind { E, T, Var, Fun, Cont, Ques };

class Type {
 public:
  Type() = default;

  static Type e() { return make(TypeKind::E, 0, {}, {}); }
  static Type t() { return make(TypeKind::T, 0, {}, {}); }
  static Type var(int id) { return make(TypeKind::Var, id, {}, {}); }
  static Type fun(Type a, Type b) { return make(TypeKind::Fun, 0, std::move(a), std::move(b)); }
  static Type cont(Type a, Type b) { return make(TypeKind::Cont, 0, std::move(a), std::move(b)); }
  static Type ques(Type a, Type b) { return make(TypeKind::Ques, 0, std::move(a), std::move(b)); }
  static Type arrow(TypeKind kind, Type a, Type b) {
    return make(kind, 0, std::move(a), std::move(b));
  }
  /// value{incoming|outgoing} = (value #> incoming) -> outgoing
  static Type lifted(Type value, Type incoming, Type outgoing) {
    return fun(cont(std::move(value), std::move(incoming)), std::move(outgoing));
  }

  bool valid() const { return node_ != nullptr; }
  inline TypeKind kind() const;
  bool is(TypeKind k) const { return kind() == k; }
  bool is_var() const { return is(TypeKind::Var); }
  bool is_arrow() const {
    return is(TypeKind::Fun) || is(TypeKind::Cont) || is(TypeKind::Ques);
  }
  inline int var_id() const;
  inline const Type& dom() const;
  inline const Type& cod() const;

  /// True for (a #> g) -> h.
  bool is_lifted() const { return is(TypeKind::Fun) && dom().is(TypeKind::Cont); }

  bool same(const Type& o) const { return node_ == o.node_; }

  friend inline bool operator==(const Type& a, const Type& b);

 private:
  struct Node;

  static inline Type make(TypeKind kind, int var, Type l, Type r);

  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  TypeKind kind;
  int var;
  Type left;
  Type right;
};

inline Type Type::make(TypeKind kind, int var, Type l, Type r) {
  Type t;
  t.node_ = std::make_shared<const Node>(Node{kind, var, std::move(l), std::move(r)});
  return t;
}

inline TypeKind Type::kind() const { return node_->kind; }
inline int Type::var_id() const { return node_->var; }
inline const Type& Type::dom() const { return node_->left; }
inline const Type& Type::cod() const { return node_->right; }

inline bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  if (a.is_var()) return a.var_id() == b.var_id();
  if (!a.is_arrow()) return true;
  return a.dom() == b.dom() && a.cod() == b.cod();
}

/// Depth of the type tree; atoms have depth 1.
inline int type_depth(const Type& t) {
  if (!t.is_arrow()) return 1;
  return 1 + std::max(type_depth(t.dom()), type_depth(t.cod()));
}

/// Type variables in first-occurrence (pre-order, left to right) order.
inline std::vector<int> type_vars(const Type& t) {
  std::vector<int> out;
  auto walk = [&](auto&& self, const Type& u) -> void {
    if (u.is_var()) {
      if (std::find(out.begin(), out.end(), u.var_id()) == out.end())
        out.push_back(u.var_id());
    } else if (u.is_arrow()) {
      self(self, u.dom());
      self(self, u.cod());
    }
  };
  walk(walk, t);
  return out;
}

inline int max_var_id(const Type& t) {
  if (t.is_var()) return t.var_id();
  if (!t.is_arrow()) return -1;
  return std::max(max_var_id(t.dom()), max_var_id(t.cod()));
}

inline bool occurs_in(int var, const Type& t) {
  if (t.is_var()) return t.var_id() == var;
  if (!t.is_arrow()) return false;
  return occurs_in(var, t.dom()) || occurs_in(var, t.cod());
}

/// Applies `f` to every variable id.
template <typename F>
Type map_vars(const Type& t, F&& f) {
  if (t.is_var()) return Type::var(f(t.var_id()));
  if (!t.is_arrow()) return t;
  return Type::arrow(t.kind(), map_vars(t.dom(), f), map_vars(t.cod(), f));
}

inline Type shift_vars(const Type& t, int offset) {
  if (offset == 0) return t;
  return map_vars(t, [offset](int v) { return v + offset; });
}

// ---------------------------------------------------------------------------
// Variable names

namespace detail {
inline constexpr std::string_view kVarLetters = "abcdfghijklmnopqrsuvwxyz";
}

inline std::string type_var_name(int id) {
  const int n = static_cast<int>(detail::kVarLetters.size());
  std::string name(1, detail::kVarLetters[static_cast<std::size_t>(id % n)]);
  if (id >= n) name += std::to_string(id / n);
  return name;
}

/// Inverse of type_var_name; nullopt for names outside the canonical scheme.
inline std::optional<int> type_var_id(std::string_view name) {
  if (name.empty()) return std::nullopt;
  auto pos = detail::kVarLetters.find(name[0]);
  if (pos == std::string_view::npos) return std::nullopt;
  if (name.size() == 1) return static_cast<int>(pos);
  if (name[1] == '0') return std::nullopt;
  int round = 0;
  for (char c : name.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
    round = round * 10 + (c - '0');
    if (round > 1000000) return std::nullopt;
  }
  return static_cast<int>(pos) + round * static_cast<int>(detail::kVarLetters.size());
}

/// Renames variables to 0, 1, 2, ... in first-occurrence order.
inline Type canonical_type(const Type& t) {
  std::vector<int> vars = type_vars(t);
  bool identity = true;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i] != static_cast<int>(i)) identity = false;
  if (identity) return t;
  return map_vars(t, [&](int v) {
    return static_cast<int>(std::find(vars.begin(), vars.end(), v) - vars.begin());
  });
}

inline bool equal_up_to_renaming(const Type& a, const Type& b) {
  return canonical_type(a) == canonical_type(b);
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline const char* arrow_symbol(TypeKind k) {
  switch (k) {
    case TypeKind::Fun:
      return " -> ";
    case TypeKind::Cont:
      return " #> ";
    default:
      return " ?> ";
  }
}

inline void print_type_to(const Type& t, bool shorthand, std::string& out);

inline void print_operand(const Type& t, bool shorthand, std::string& out) {
  bool atomic = !t.is_arrow() || (shorthand && t.is_lifted());
  if (!atomic) out += "(";
  print_type_to(t, shorthand, out);
  if (!atomic) out += ")";
}

inline void print_type_to(const Type& t, bool shorthand, std::string& out) {
  switch (t.kind()) {
    case TypeKind::E:
      out += "e";
      return;
    case TypeKind::T:
      out += "t";
      return;
    case TypeKind::Var:
      out += type_var_name(t.var_id());
      return;
    default:
      break;
  }
  if (shorthand && t.is_lifted()) {
    print_operand(t.dom().dom(), shorthand, out);
    out += "{";
    print_type_to(t.dom().cod(), shorthand, out);
    out += "|";
    print_type_to(t.cod(), shorthand, out);
    out += "}";
    return;
  }
  print_operand(t.dom(), shorthand, out);
  out += arrow_symbol(t.kind());
  print_type_to(t.cod(), shorthand, out);
}

}  // namespace detail

/// Right-associative rendering with `->`, `#>`, `?>`; with `shorthand`,
/// every (a #> g) -> h renders as a{g|h}.
inline std::string print_type(const Type& t, bool shorthand = false) {
  std::string out;
  detail::print_type_to(t, shorthand, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

class TypeParser {
 public:
  TypeParser(std::string_view src, std::size_t line, std::size_t column0)
      : src_(src), line_(line), column0_(column0) {}

  Type parse_all() {
    assign_names();
    Type t = type();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return t;
  }

  const std::map<std::string, int>& names() const { return names_; }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("type: " + what, line_, column0_ + pos_ + 1);
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  // Canonically spelled names keep their ids; any other identifier gets a
  // fresh id above all of them, in order of first appearance.
  void assign_names() {
    std::vector<std::string> others;
    int max_id = -1;
    for (std::size_t i = 0; i < src_.size();) {
      if (std::isalpha(static_cast<unsigned char>(src_[i]))) {
        std::size_t j = i;
        while (j < src_.size() && ident_char(src_[j])) ++j;
        std::string name(src_.substr(i, j - i));
        if (name != "e" && name != "t") {
          if (auto id = type_var_id(name)) {
            names_[name] = *id;
            max_id = std::max(max_id, *id);
          } else if (std::find(others.begin(), others.end(), name) == others.end()) {
            others.push_back(name);
          }
        }
        i = j;
      } else {
        ++i;
      }
    }
    for (const auto& n : others) names_[n] = ++max_id;
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  std::optional<TypeKind> arrow() {
    skip_ws();
    static const std::pair<std::string_view, TypeKind> kArrows[] = {
        {"->", TypeKind::Fun},          {"#>", TypeKind::Cont},
        {"?>", TypeKind::Ques},         {"\xE2\x86\x92", TypeKind::Fun},
        {"\xE2\x87\x80", TypeKind::Cont}, {"\xE2\x87\x9D", TypeKind::Ques},
    };
    for (const auto& [sym, kind] : kArrows) {
      if (src_.substr(pos_, sym.size()) == sym) {
        pos_ += sym.size();
        return kind;
      }
    }
    return std::nullopt;
  }

  Type type() {
    Type left = postfix();
    if (auto k = arrow()) return Type::arrow(*k, left, type());
    return left;
  }

  Type postfix() {
    Type t = atom();
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != '{') return t;
      ++pos_;
      Type incoming = type();
      expect('|');
      Type outgoing = type();
      expect('}');
      t = Type::lifted(t, incoming, outgoing);
    }
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  Type atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    if (src_[pos_] == '(') {
      ++pos_;
      Type t = type();
      expect(')');
      return t;
    }
    if (!std::isalpha(static_cast<unsigned char>(src_[pos_])))
      fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    std::size_t start = pos_;
    while (pos_ < src_.size() && ident_char(src_[pos_])) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    if (name == "e") return Type::e();
    if (name == "t") return Type::t();
    return Type::var(names_.at(name));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_;
  std::size_t column0_;
  std::map<std::string, int> names_;
};

}  // namespace detail

/// Parses `T ::= e | t | ident | T -> T | T #> T | T ?> T | T{T|T} | (T)`.
inline Type parse_type(std::string_view src, std::size_t line = 0,
                       std::size_t column0 = 0) {
  return detail::TypeParser(src, line, column0).parse_all();
}

// ---------------------------------------------------------------------------
// Substitutions and unification

/// Triangular substitution: a variable may be bound to a type that mentions
/// other bound variables. `apply` resolves fully, so the observable mapping
/// is idempotent.
class Substitution {
 public:
  Substitution() = default;

  bool bound(int v) const {
    return v >= 0 && static_cast<std::size_t>(v) < map_.size() && map_[v].valid();
  }
  const Type& lookup(int v) const { return map_[static_cast<std::size_t>(v)]; }

  void bind(int v, Type t) {
    if (static_cast<std::size_t>(v) >= map_.size()) map_.resize(static_cast<std::size_t>(v) + 1);
    map_[static_cast<std::size_t>(v)] = std::move(t);
  }

  /// Follows variable bindings at the root only.
  Type walk(Type t) const {
    while (t.is_var() && bound(t.var_id())) t = lookup(t.var_id());
    return t;
  }

  Type apply(const Type& t) const {
    if (t.is_var()) {
      if (!bound(t.var_id())) return t;
      return apply(lookup(t.var_id()));
    }
    if (!t.is_arrow()) return t;
    Type d = apply(t.dom());
    Type c = apply(t.cod());
    if (d.same(t.dom()) && c.same(t.cod())) return t;
    return Type::arrow(t.kind(), std::move(d), std::move(c));
  }

  /// Idempotent view: every bound variable mapped to its resolved type.
  std::map<int, Type> entries() const {
    std::map<int, Type> out;
    for (std::size_t v = 0; v < map_.size(); ++v)
      if (map_[v].valid()) out.emplace(static_cast<int>(v), apply(map_[v]));
    return out;
  }

  bool empty() const {
    return std::none_of(map_.begin(), map_.end(), [](const Type& t) { return t.valid(); });
  }

 private:
  std::vector<Type> map_;
};

namespace detail {

inline bool occurs_walk(int v, const Type& t, const Substitution& s) {
  Type u = s.walk(t);
  if (u.is_var()) return u.var_id() == v;
  if (!u.is_arrow()) return false;
  return occurs_walk(v, u.dom(), s) || occurs_walk(v, u.cod(), s);
}

enum class UnifyFailure { None, Clash, Occurs };

struct UnifyState {
  UnifyFailure failure = UnifyFailure::None;
  Type left, right;
};

inline bool unify_step(const Type& a0, const Type& b0, Substitution& s,
                       UnifyState* state) {
  Type a = s.walk(a0);
  Type b = s.walk(b0);
  if (a.is_var() && b.is_var() && a.var_id() == b.var_id()) return true;
  if (a.is_var() || b.is_var()) {
    const Type& v = a.is_var() ? a : b;
    const Type& other = a.is_var() ? b : a;
    if (occurs_walk(v.var_id(), other, s)) {
      if (state) *state = {UnifyFailure::Occurs, v, other};
      return false;
    }
    s.bind(v.var_id(), other);
    return true;
  }
  if (a.kind() != b.kind()) {
    if (state) *state = {UnifyFailure::Clash, a, b};
    return false;
  }
  if (!a.is_arrow()) return true;
  return unify_step(a.dom(), b.dom(), s, state) &&
         unify_step(a.cod(), b.cod(), s, state);
}

}  // namespace detail

/// Extends `s` with a most general unifier of a and b. On failure returns
/// false; `s` may then hold partial bindings and should be discarded.
inline bool unify_into(const Type& a, const Type& b, Substitution& s) {
  return detail::unify_step(a, b, s, nullptr);
}

/// Most general unifier. Throws Mismatch on a constructor clash (including
/// any two distinct arrows) and OccursCheck on a cyclic binding.
inline Substitution unify(const Type& a, const Type& b) {
  Substitution s;
  detail::UnifyState state;
  if (!detail::unify_step(a, b, s, &state)) {
    if (state.failure == detail::UnifyFailure::Occurs)
      throw OccursCheck(print_type(state.left), print_type(s.apply(state.right)));
    throw Mismatch(print_type(s.apply(state.left)), print_type(s.apply(state.right)));
  }
  return s;
}

/// One-way matching: binds only variables of `pattern`; succeeds iff
/// `target` is an instance of `pattern`. Variables of the two sides are
/// disjoint namespaces.
inline std::optional<std::map<int, Type>> match_type(const Type& pattern,
                                                     const Type& target) {
  std::map<int, Type> binding;
  auto go = [&](auto&& self, const Type& p, const Type& x) -> bool {
    if (p.is_var()) {
      auto [it, inserted] = binding.emplace(p.var_id(), x);
      return inserted || it->second == x;
    }
    if (p.kind() != x.kind()) return false;
    if (!p.is_arrow()) return true;
    return self(self, p.dom(), x.dom()) && self(self, p.cod(), x.cod());
  };
  if (!go(go, pattern, target)) return std::nullopt;
  return binding;
}

// ---------------------------------------------------------------------------
// Schemes

/// A type closed over its quantified variables.
struct TypeScheme {
  std::vector<int> quantified;
  Type body;

  /// Quantifies over every free variable of `t`.
  static TypeScheme generalize(Type t) {
    return TypeScheme{type_vars(t), std::move(t)};
  }
};

inline std::string print_scheme(const TypeScheme& s, bool shorthand = true) {
  std::string out;
  if (!s.quantified.empty()) {
    out += "forall";
    for (int v : s.quantified) out += " " + type_var_name(v);
    out += ". ";
  }
  return out + print_type(s.body, shorthand);
}

/// Supplies fresh variable ids. Confined to one derivation session.
class NameSupply {
 public:
  explicit NameSupply(int start = 0) : next_(start) {}
  int fresh() { return next_++; }
  int peek() const { return next_; }

 private:
  int next_;
};

/// Replaces every quantified variable with a fresh one.
inline Type instantiate(const TypeScheme& s, NameSupply& supply) {
  if (s.quantified.empty()) return s.body;
  std::map<int, int> fresh;
  for (int v : s.quantified) fresh[v] = supply.fresh();
  return map_vars(s.body, [&](int v) {
    auto it = fresh.find(v);
    return it == fresh.end() ? v : it->second;
  });
}

}  // namespace contsem

#endif  // CONTSEM_TYPE_HPP
