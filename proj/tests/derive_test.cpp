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

#include <gtest/gtest.h>

#include <map>

#include "contsem/derive.hpp"
#include "contsem/render.hpp"

namespace contsem {
namespace {

const Lexicon& lex() {
  static const Lexicon l = default_lexicon();
  return l;
}

DeriveResult run(const char* input, int order, const char* goal = nullptr,
                 SearchOptions opts = {}) {
  opts.order = order;
  if (goal) opts.goal = parse_type(goal);
  return derive(parse_tree(input), lex(), opts);
}

std::vector<std::string> texts(const DeriveResult& r) {
  std::vector<std::string> out;
  for (const auto& x : r.readings) out.push_back(x.text());
  return out;
}

constexpr const char* kClause = "(what (we ((bought _) (for whom))))";
constexpr const char* kBaker =
    "(who (you (think (_ (remembers (what (we ((bought _) (for whom)))))))))";

TEST(SyntaxTree, ParseAndPrint) {
  SyntaxTree t = parse_tree("((Alice (loves Bob)))");
  EXPECT_EQ(print_tree(t), "(Alice (loves Bob))");
  EXPECT_EQ(tree_leaves(t), (std::vector<std::string>{"Alice", "loves", "Bob"}));
  EXPECT_EQ(parse_tree("Alice loves Bob").children.size(), 3u);
  EXPECT_THROW(parse_tree("(Alice (loves Bob)"), ParseError);
  EXPECT_THROW(parse_tree("()"), ParseError);
}

TEST(Derive, SimpleClause) {
  EXPECT_EQ(texts(run("(Alice (loves Bob))", 0)), (std::vector<std::string>{"Love(Bob)(Alice) : t"}));
}

TEST(Derive, QuantifierObject) {
  EXPECT_EQ(texts(run("(Alice (loves everyone))", 1, "t")),
            (std::vector<std::string>{"forall x. Love(x)(Alice) : t"}));
  // No quantifier can combine at order 0.
  EXPECT_TRUE(run("(Alice (loves everyone))", 0).no_derivation());
}

TEST(Derive, ScopeAmbiguity) {
  SearchOptions o;
  o.prefer_ltr = true;
  DeriveResult r = run("(someone (loves everyone))", 1, "t", o);
  ASSERT_EQ(r.readings.size(), 2u);
  // Left-to-right evaluation gives surface scope.
  EXPECT_EQ(r.readings[0].text(), "exists x. forall y. Love(y)(x) : t");
  EXPECT_EQ(r.readings[1].text(), "forall x. exists y. Love(x)(y) : t");
  EXPECT_LT(r.readings[0].ltr_rank, r.readings[1].ltr_rank);
}

TEST(Derive, GapClause) {
  EXPECT_EQ(texts(run("(we (bought _))", 1, "e #> t")),
            (std::vector<std::string>{"\\x. Buy(x)(We) : e #> t"}));
}

TEST(Derive, EmbeddedQuestion) {
  EXPECT_EQ(texts(run("(Alice (remembers (what (we (bought _)))))", 1, "t")),
            (std::vector<std::string>{"Remember(\\x. [Not(Animate(x))] Buy(x)(We))(Alice) : t"}));
}

TEST(Derive, DoubleWhNarrow) {
  EXPECT_EQ(texts(run(kClause, 1, "e ?> e ?> t")),
            (std::vector<std::string>{
                "\\x. [Not(Animate(x))] \\y. [Animate(y)] For(y)(Buy(x))(We) : e ?> e ?> t"}));
}

TEST(Derive, DoubleWhWide) {
  DeriveResult r = run(kClause, 2, "(e ?> t){d|e ?> d}");
  ASSERT_EQ(r.readings.size(), 1u);
  EXPECT_EQ(r.readings[0].text(),
            "\\c. \\x. [Animate(x)] c(\\y. [Not(Animate(y))] For(x)(Buy(y))(We)) : (e ?> t){a|e ?> a}");
  // The root keeps its answer-type variable.
  EXPECT_FALSE(type_vars(r.readings[0].type).empty());
}

// Collects, for each surface substring, the chain of node types from the
// topmost node covering it down through unary rules.
void chains(const DerivationNode& n, std::map<std::string, std::vector<std::string>>& out,
            std::string* surface_out = nullptr) {
  std::string surface;
  if (!n.word.empty()) {
    surface = n.word;
  } else {
    std::vector<std::string> parts;
    for (const auto& c : n.children) {
      std::string s;
      chains(c, out, &s);
      parts.push_back(s);
    }
    for (const auto& p : parts) surface += (surface.empty() ? "" : " ") + p;
  }
  auto& chain = out[surface];
  chain.insert(chain.begin(), print_type(n.type, true));
  if (surface_out) *surface_out = surface;
}

TEST(Derive, AnswerTypesAlongClauseSpine) {
  DeriveResult r = run(kClause, 1, "e ?> e ?> t");
  ASSERT_EQ(r.readings.size(), 1u);
  const std::map<std::string, std::vector<std::string>> want{
      {"whom", {"e{t|e ?> t}"}},
      {"for whom", {"((e -> t) -> e -> t){t|e ?> t}"}},
      {"_", {"e{e ?> t|e #> e ?> t}"}},
      {"bought _", {"(e -> t){e ?> t|e #> e ?> t}"}},
      {"bought _ for whom", {"(e -> t){t|e #> e ?> t}"}},
      {"we bought _ for whom", {"e #> e ?> t", "t{t|e #> e ?> t}"}},
      {"what we bought _ for whom", {"e ?> e ?> t"}},
  };
  bool found = false;
  for (const auto& d : r.readings[0].derivations) {
    std::map<std::string, std::vector<std::string>> got;
    chains(d, got);
    bool all = true;
    for (const auto& [span, types] : want)
      if (got[span] != types) all = false;
    if (all) found = true;
  }
  EXPECT_TRUE(found) << render_tree(r.readings[0].derivations.at(0));
}

TEST(Derive, BakerReadings) {
  EXPECT_EQ(texts(run(kBaker, 2, "e ?> e ?> t")),
            (std::vector<std::string>{"\\x. [Animate(x)] \\y. [Animate(y)] Think(Remember(\\z. "
                                      "[Not(Animate(z))] For(y)(Buy(z))(We))(x))(You) : e ?> e ?> t"}));
  EXPECT_EQ(texts(run(kBaker, 2, "e ?> t")),
            (std::vector<std::string>{"\\x. [Animate(x)] Think(Remember(\\y. [Not(Animate(y))] \\z. "
                                      "[Animate(z)] For(z)(Buy(y))(We))(x))(You) : e ?> t"}));
}

TEST(Derive, Negatives) {
  EXPECT_TRUE(run("(Alice (remembers (Alice (bought Bob))))", 2).no_derivation());
  EXPECT_TRUE(run("(what (what (we (bought _))))", 2).no_derivation());
  EXPECT_TRUE(run("(we (bought _))", 2, "t").no_derivation());
}

TEST(Derive, DiagnosticsOnFailure) {
  DeriveResult r = run("(what (what (we (bought _))))", 1);
  ASSERT_TRUE(r.no_derivation());
  std::string d = r.diagnostics.render();
  EXPECT_NE(d.find("what:"), std::string::npos);
  EXPECT_NE(d.find("root: 0 items"), std::string::npos);
}

TEST(Derive, GoalRejections) {
  DeriveResult r = run("(we (bought _))", 1, "t");
  EXPECT_TRUE(r.no_derivation());
  EXPECT_GT(r.diagnostics.goal_rejected, 0u);
}

TEST(Derive, UnknownWord) {
  EXPECT_THROW(run("(Alice (loves Zed))", 0), UnknownWord);
}

TEST(Derive, FlatInputTriesAllBracketings) {
  // Without word order, ((Alice loves) Bob) makes Alice the object.
  DeriveResult r = run("Alice loves Bob", 0);
  ASSERT_EQ(r.readings.size(), 2u);
  EXPECT_EQ(r.readings[0].text(), "Love(Alice)(Bob) : t");
  EXPECT_EQ(r.readings[0].bracketings, (std::vector<std::string>{"((Alice loves) Bob)"}));
  EXPECT_EQ(r.readings[1].bracketings, (std::vector<std::string>{"(Alice (loves Bob))"}));
  SearchOptions o;
  o.enumerate_bracketings = true;
  EXPECT_EQ(texts(run("(Alice (loves Bob))", 0, nullptr, o)), texts(r));
}

TEST(Derive, TooManyTokens) {
  SearchOptions o;
  o.max_tokens = 3;
  EXPECT_THROW(run("Alice loves Bob Alice", 0, nullptr, o), TooManyBracketings);
}

TEST(Derive, DepthBoundIsReported) {
  SearchOptions o;
  o.max_type_depth = 3;
  DeriveResult r = run("(Alice (loves everyone))", 1, "t", o);
  EXPECT_GT(r.diagnostics.depth_pruned(), 0u);
}

TEST(Derive, WithoutHygieneGapsAcceptLiftedValues) {
  SearchOptions o;
  o.continuation_hygiene = false;
  EXPECT_GT(run("(Alice (remembers (what (we (bought _)))))", 1, "t", o).readings.size(), 1u);
}

TEST(Derive, WithoutQuestionLoweringGuardBakerOvergenerates) {
  SearchOptions o;
  o.lower_questions = true;
  EXPECT_EQ(run(kBaker, 2, "e ?> e ?> t", o).readings.size(), 2u);
}

std::string full_output(const DeriveResult& r) { return render_readings(r.readings, OutputFormat::All, true); }

TEST(Derive, ThreadCountDoesNotChangeOutput) {
  std::string single = full_output(run(kBaker, 2));
  SearchOptions o;
  o.threads = 4;
  EXPECT_EQ(full_output(run(kBaker, 2, nullptr, o)), single);
}

TEST(Derive, RuleOrderDoesNotChangeOutput) {
  std::string base = full_output(run(kClause, 2));
  for (std::uint64_t seed : {1u, 7u, 42u}) {
    SearchOptions o;
    o.rule_order_seed = seed;
    EXPECT_EQ(full_output(run(kClause, 2, nullptr, o)), base) << seed;
  }
}

void expect_sound(const DerivationNode& n) {
  EXPECT_TRUE(checks_against(n.term, n.type, lex().signature()))
      << print_term(n.term) << " : " << print_type(n.type, true);
  for (const auto& c : n.children) expect_sound(c);
}

TEST(Derive, EveryNodeTypeChecks) {
  for (const char* s : {"(someone (loves everyone))", "(Alice (remembers (what (we (bought _)))))",
                        kClause, kBaker}) {
    DeriveResult r = run(s, 2);
    for (const auto& reading : r.readings)
      for (const auto& d : reading.derivations) expect_sound(d);
  }
}

TEST(Derive, DecorationsMatchSurfaceOrder) {
  DeriveResult r = run("(Alice (loves Bob))", 0);
  ASSERT_EQ(r.readings.size(), 1u);
  const DerivationNode& root = r.readings[0].derivations.at(0);
  EXPECT_EQ(root.decoration, "FA");
  EXPECT_TRUE(root.function_right);
}

}  // namespace
}  // namespace contsem
