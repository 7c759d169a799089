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

// Randomized checks. Every generator is seeded so failures reproduce.

#include <gtest/gtest.h>

#include "contsem/derive.hpp"
#include "random_gen.hpp"

namespace contsem {
namespace {

using testing_support::Gen;
using testing_support::lift_oracle;

constexpr int kInstances = 10000;

TEST(UnifyProperty, SymmetricAndSound) {
  Gen g(20260101);
  int unified = 0;
  for (int i = 0; i < kInstances; ++i) {
    Type a = g.type(4);
    Type b = g.type(4);
    Substitution ab, ba;
    bool l = unify_into(a, b, ab);
    bool r = unify_into(b, a, ba);
    ASSERT_EQ(l, r) << print_type(a) << " ~ " << print_type(b);
    if (!l) continue;
    ++unified;
    ASSERT_EQ(ab.apply(a), ab.apply(b));
    ASSERT_EQ(ba.apply(a), ba.apply(b));
    // Both unifiers are most general, so their results agree up to renaming.
    ASSERT_TRUE(equal_up_to_renaming(ab.apply(a), ba.apply(a)))
        << print_type(ab.apply(a)) << " vs " << print_type(ba.apply(a));
  }
  EXPECT_GT(unified, kInstances / 20);
}

TEST(UnifyProperty, InstancesUnifyToThemselves) {
  // Unifying a type with one of its ground instances yields that instance.
  Gen g(7);
  for (int i = 0; i < kInstances; ++i) {
    Type a = g.type(3, 3);
    Substitution ground;
    for (int v = 0; v < 3; ++v) ground.bind(v, g.ground(2));
    Type inst = ground.apply(a);
    Substitution m;
    ASSERT_TRUE(unify_into(a, inst, m)) << print_type(a) << " ~ " << print_type(inst);
    ASSERT_EQ(m.apply(a), inst);
    ASSERT_TRUE(match_type(a, inst).has_value());
  }
}

TEST(UnifyProperty, DistinctArrowKindsNeverUnify) {
  Gen g(99);
  for (int i = 0; i < kInstances; ++i) {
    TypeKind k1 = g.arrow_kind();
    TypeKind k2 = g.arrow_kind();
    while (k2 == k1) k2 = g.arrow_kind();
    Type a = Type::arrow(k1, g.type(3), g.type(3));
    Type b = Type::arrow(k2, g.type(3), g.type(3));
    Substitution s;
    ASSERT_FALSE(unify_into(a, b, s)) << print_type(a) << " ~ " << print_type(b);
    ASSERT_THROW(unify(a, b), Mismatch);
  }
}

TEST(TypeProperty, ParsePrintRoundTrip) {
  Gen g(3);
  for (int i = 0; i < kInstances; ++i) {
    Type t = canonical_type(g.type(5, 6));
    ASSERT_EQ(parse_type(print_type(t)), t) << print_type(t);
    ASSERT_EQ(parse_type(print_type(t, true)), t) << print_type(t, true);
  }
}

TEST(TermProperty, ParsePrintRoundTrip) {
  Gen g(11);
  for (int i = 0; i < kInstances; ++i) {
    std::vector<std::string> scope;
    Term t = g.raw(5, scope);
    ASSERT_EQ(parse_term(print_term(t)), t) << print_term(t);
  }
}

TEST(TermProperty, NormalizationIsIdempotent) {
  Gen g(12);
  int normalized = 0;
  for (int i = 0; i < kInstances; ++i) {
    std::vector<std::string> scope;
    Term t = g.raw(5, scope);
    Term n;
    try {
      n = beta_normalize(t, 2000);
    } catch (const FuelExhausted&) {
      continue;
    }
    ++normalized;
    ASSERT_TRUE(alpha_equal(beta_normalize(n), n)) << print_term(t);
    Term c = canonicalize(t, 2000);
    ASSERT_EQ(canonicalize(c), c) << print_term(t);
    ASSERT_TRUE(alpha_equal(c, eta_normalize(n))) << print_term(t);
  }
  EXPECT_GT(normalized, kInstances / 2);
}

TEST(TermProperty, AlphaRenamingPreservesCanonicalForm) {
  Gen g(13);
  for (int i = 0; i < 2000; ++i) {
    std::vector<std::string> scope;
    Term t = g.raw(5, scope);
    Term r = tidy_binders(t);
    ASSERT_TRUE(alpha_equal(r, t)) << print_term(t) << " vs " << print_term(r);
  }
}

TEST(LiftLaw, LowerAfterLiftIsIdentity) {
  Gen g(21);
  const Term lift = value_lift().closed_combinator();
  const Term lower = value_lower().closed_combinator();
  Signature sig = default_lexicon().signature();
  for (int i = 0; i < kInstances; ++i) {
    std::vector<std::string> scope;
    Term x = g.proposition(4, scope);
    ASSERT_TRUE(checks_against(x, Type::t(), sig)) << print_term(x);
    Term round = Term::app(lower, Term::app(lift, x));
    ASSERT_EQ(canonicalize(round), canonicalize(x)) << print_term(x);
    // The same identity through the oracle lifting.
    ASSERT_EQ(canonicalize(Term::app(lower, lift_oracle(x))), canonicalize(x));
  }
}

// Lifted function application over lifted inputs is the lift of plain
// application, for both evaluation orders and at both tower levels.
TEST(LiftLaw, LiftedApplicationCommutesWithLift) {
  Gen g(22);
  std::vector<const Rule*> level1, level2;
  GrammarTower g2 = tower(2);
  for (const Rule* r : g2.binary()) {
    if (r->lifts == 1) level1.push_back(r);
    if (r->lifts == 2) level2.push_back(r);
  }
  ASSERT_EQ(level1.size(), 2u);
  ASSERT_EQ(level2.size(), 4u);
  for (int i = 0; i < kInstances; ++i) {
    Term f = g.pick(2) ? Term::constant("Smoke") : Term::apply(Term::constant("Love"), {g.entity()});
    Term x = g.entity();
    Term fx = Term::app(f, x);
    for (const Rule* r : level1) {
      Term got = Term::apply(r->closed_combinator(), {lift_oracle(f), lift_oracle(x)});
      ASSERT_EQ(canonicalize(got), canonicalize(lift_oracle(fx))) << r->name;
    }
    for (const Rule* r : level2) {
      Term got = Term::apply(r->closed_combinator(),
                             {lift_oracle(lift_oracle(f), "m"), lift_oracle(lift_oracle(x), "m")});
      ASSERT_EQ(canonicalize(got), canonicalize(lift_oracle(lift_oracle(fx), "m"))) << r->name;
    }
  }
}

// Every node of every derivation over random bracketings of random word
// strings type-checks at its reported type.
TEST(DeriveProperty, RandomDerivationsAreSound) {
  Gen g(31);
  static const char* words[] = {"Alice", "Bob", "loves", "smokes", "everyone", "someone"};
  Lexicon lex = default_lexicon();
  SearchOptions opts;
  opts.order = 1;
  opts.max_derivations = 2;
  int derived = 0;
  auto sound = [&](auto&& self, const DerivationNode& n) -> bool {
    if (!checks_against(n.term, n.type, lex.signature())) return false;
    for (const auto& c : n.children)
      if (!self(self, c)) return false;
    return true;
  };
  for (int i = 0; i < 150; ++i) {
    std::vector<std::string> tokens;
    int n = 2 + g.pick(2);
    for (int k = 0; k < n; ++k) tokens.push_back(words[g.pick(6)]);
    DeriveResult r = derive_sentence(tokens, tower(1), lex, opts);
    if (!r.no_derivation()) ++derived;
    for (const auto& reading : r.readings)
      for (const auto& d : reading.derivations)
        ASSERT_TRUE(sound(sound, d)) << reading.text();
  }
  EXPECT_GT(derived, 10);
}

}  // namespace
}  // namespace contsem
