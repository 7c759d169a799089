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

// Checks a closed term against a declared type.
//
// The same lambda and application notation builds functions, continuations
// and questions, so the arrow kind of a lambda is read off the expected
// type. Where nothing fixes it, every arrow kind is tried in turn. Variables
// of the declared type are rigid: the term must be at least as general as
// its declaration.

#ifndef CONTSEM_CHECK_HPP
#define CONTSEM_CHECK_HPP

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contsem/error.hpp"
#include "contsem/term.hpp"
#include "contsem/type.hpp"

namespace contsem {

/// Declared constants. A constant with no listed types is untyped and may
/// take any type at each occurrence; one with several types is overloaded.
class Signature {
 public:
  void declare(const std::string& name) { types_[name]; }

  void declare(const std::string& name, const Type& type) {
    auto& alts = types_[name];
    Type c = canonical_type(type);
    for (const auto& a : alts)
      if (a == c) return;
    alts.push_back(std::move(c));
  }

  bool contains(const std::string& name) const { return types_.count(name) != 0; }

  const std::vector<Type>& types(const std::string& name) const {
    return types_.at(name);
  }

  const std::map<std::string, std::vector<Type>>& all() const { return types_; }

  void merge(const Signature& other) {
    for (const auto& [name, alts] : other.types_) {
      declare(name);
      for (const auto& t : alts) declare(name, t);
    }
  }

 private:
  std::map<std::string, std::vector<Type>> types_;
};

namespace detail {

class Checker {
 public:
  using Cont = std::function<bool(Substitution&)>;

  Checker(const Signature& sig, int first_fresh) : sig_(sig), supply_(first_fresh) {}

  bool check(const Term& t, const Type& expected, Substitution& s, const Cont& k) {
    switch (t.kind()) {
      case TermKind::Lam: {
        return with_arrow(expected, s, [&](const Type& arrow, Substitution& s1) {
          ctx_.emplace_back(t.name(), arrow.dom());
          bool ok = check(t.body(), arrow.cod(), s1, k);
          ctx_.pop_back();
          return ok;
        });
      }
      case TermKind::Forall:
      case TermKind::Exists: {
        Substitution s1 = s;
        if (!unify_into(expected, Type::t(), s1)) {
          note("quantifier body must have type t");
          return false;
        }
        ctx_.emplace_back(t.name(), Type::e());
        bool ok = check(t.body(), Type::t(), s1, k);
        ctx_.pop_back();
        return ok;
      }
      case TermKind::Guard:
        return check(t.condition(), Type::t(), s, [&](Substitution& s1) {
          return check(t.body(), expected, s1, k);
        });
      default:
        return infer(t, s, [&](const Type& got, Substitution& s1) {
          Substitution s2 = s1;
          if (!unify_into(got, expected, s2)) {
            note("expected " + print_type(s1.apply(expected)) + " but found " +
                 print_type(s1.apply(got)));
            return false;
          }
          return k(s2);
        });
    }
  }

  const std::string& reason() const { return reason_; }

 private:
  using InferCont = std::function<bool(const Type&, Substitution&)>;

  void note(std::string r) {
    if (reason_.empty()) reason_ = std::move(r);
  }

  // Calls k with `expected` resolved to an arrow; a variable is tried as
  // each of the three arrow kinds.
  bool with_arrow(const Type& expected, Substitution& s, const InferCont& k) {
    Type e = s.walk(expected);
    if (e.is_arrow()) {
      Type resolved = Type::arrow(e.kind(), e.dom(), e.cod());
      return k(resolved, s);
    }
    if (!e.is_var()) {
      note("a lambda cannot have type " + print_type(s.apply(e)));
      return false;
    }
    for (TypeKind kind : {TypeKind::Fun, TypeKind::Cont, TypeKind::Ques}) {
      Substitution s1 = s;
      Type arrow = Type::arrow(kind, Type::var(supply_.fresh()), Type::var(supply_.fresh()));
      s1.bind(e.var_id(), arrow);
      if (k(arrow, s1)) return true;
    }
    return false;
  }

  bool infer(const Term& t, Substitution& s, const InferCont& k) {
    switch (t.kind()) {
      case TermKind::Var: {
        for (auto it = ctx_.rbegin(); it != ctx_.rend(); ++it)
          if (it->first == t.name()) return k(it->second, s);
        note("unbound variable " + t.name());
        return false;
      }
      case TermKind::Const: {
        if (!sig_.contains(t.name())) {
          note("unknown constant " + t.name());
          return false;
        }
        const auto& alts = sig_.types(t.name());
        if (alts.empty()) {
          Type v = Type::var(supply_.fresh());
          return k(v, s);
        }
        for (const Type& alt : alts) {
          int base = supply_.peek();
          Type inst = shift_vars(alt, base);
          int top = max_var_id(inst);
          while (supply_.peek() <= top) supply_.fresh();
          Substitution s1 = s;
          if (k(inst, s1)) return true;
        }
        return false;
      }
      case TermKind::App:
        return infer(t.fun(), s, [&](const Type& ft, Substitution& s1) {
          return with_arrow(ft, s1, [&](const Type& arrow, Substitution& s2) {
            return check(t.arg(), arrow.dom(), s2, [&](Substitution& s3) {
              return k(arrow.cod(), s3);
            });
          });
        });
      default: {
        Type v = Type::var(supply_.fresh());
        return check(t, v, s, [&](Substitution& s1) { return k(v, s1); });
      }
    }
  }

  const Signature& sig_;
  NameSupply supply_;
  std::vector<std::pair<std::string, Type>> ctx_;
  std::string reason_;
};

}  // namespace detail

/// Verifies the closed term `t` against `declared`, whose variables are
/// treated as rigid. Returns the checked scheme; throws IllTyped otherwise.
inline TypeScheme check_term(const Term& t, const Type& declared, const Signature& sig) {
  if (auto fv = free_vars(t); !fv.empty())
    throw IllTyped(print_term(t), "free variable " + *fv.begin());
  std::vector<int> rigid = type_vars(declared);
  detail::Checker checker(sig, max_var_id(declared) + 1);
  Substitution s;
  bool ok = checker.check(t, declared, s, [&](Substitution& fin) {
    std::set<int> images;
    for (int v : rigid) {
      Type img = fin.apply(Type::var(v));
      if (!img.is_var() || !images.insert(img.var_id()).second) return false;
    }
    return true;
  });
  if (!ok) {
    std::string why = checker.reason().empty()
                          ? "term is less general than " + print_type(declared, true)
                          : checker.reason();
    throw IllTyped(print_term(t), why);
  }
  return TypeScheme::generalize(declared);
}

/// Non-throwing variant.
inline bool checks_against(const Term& t, const Type& declared, const Signature& sig) {
  try {
    check_term(t, declared, sig);
    return true;
  } catch (const IllTyped&) {
    return false;
  }
}

}  // namespace contsem

#endif  // CONTSEM_CHECK_HPP
