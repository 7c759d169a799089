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

#include "contsem/corpus.hpp"
#include "contsem/render.hpp"

namespace contsem {
namespace {

TEST(Render, TreeLayout) {
  Lexicon lex = default_lexicon();
  SearchOptions o;
  o.order = 0;
  DeriveResult r = derive(parse_tree("(Alice (loves Bob))"), lex, o);
  ASSERT_EQ(r.readings.size(), 1u);
  EXPECT_EQ(render_tree(r.readings[0].derivations.at(0)),
            "Love(Bob)(Alice) : t  FA\n"
            "  Alice : e  'Alice'\n"
            "  Love(Bob) : e -> t  FA\n"
            "    Love : e -> e -> t  'loves'\n"
            "    Bob : e  'Bob'\n");
  EXPECT_EQ(render_readings(r.readings, OutputFormat::All, false), "Love(Bob)(Alice) : t\n1 reading\n");
  EXPECT_EQ(render_readings(r.readings, OutputFormat::Types, false), "t\n");
  EXPECT_EQ(render_readings(r.readings, OutputFormat::Terms, false), "Love(Bob)(Alice)\n");
}

TEST(Render, Rule) {
  EXPECT_EQ(render_rule(value_lift()), "lift  ∧ : a => a{b|b}  = \\x. \\c. c(x)");
  std::string tower2 = render_tower(tower(2));
  EXPECT_NE(tower2.find("11 rules (4 unary, 7 binary)"), std::string::npos);
}

TEST(Render, Lexicon) {
  std::string out = render_lexicon(default_lexicon());
  EXPECT_NE(out.find("whom : e{g|e ?> g} = \\c. \\x. [Animate(x)] c(x)"), std::string::npos);
}

TEST(Corpus, ParseAndWriteRoundTrip) {
  const char* text =
      "# comment\n"
      "input: (we (bought _))\n"
      "order: 1\n"
      "goal: e #> t\n"
      "--- readings\n"
      "\\x. Buy(x)(We) : e #> t\n";
  CorpusCase c = parse_case(text, "gap");
  EXPECT_EQ(c.input, "(we (bought _))");
  EXPECT_EQ(c.order, 1);
  ASSERT_TRUE(c.goal.has_value());
  EXPECT_EQ(*c.goal, "e #> t");
  EXPECT_EQ(c.expected.size(), 1u);
  EXPECT_EQ(write_case(c, c.expected), text);
  EXPECT_TRUE(run_case(c, default_lexicon()).passed);
}

TEST(Corpus, ParseErrors) {
  EXPECT_THROW(parse_case("order: 1\n--- readings\n", "x"), ParseError);
  EXPECT_THROW(parse_case("input: (a b)\n", "x"), ParseError);
  EXPECT_THROW(parse_case("input: (a b)\nwhat: 3\n--- readings\n", "x"), ParseError);
}

TEST(Corpus, ErrorsAreReportedPerCase) {
  CorpusCase c = parse_case("input: (Alice (loves Zed))\n--- readings\n", "bad");
  CaseOutcome out = run_case(c, default_lexicon());
  EXPECT_FALSE(out.passed);
  EXPECT_NE(out.error.find("Zed"), std::string::npos);
}

// Every golden file passes, and rewriting it from current output changes
// nothing.
TEST(Corpus, GoldenFilesAreStable) {
  Lexicon lex = default_lexicon();
  auto files = corpus_files(CONTSEM_CORPUS_DIR);
  ASSERT_FALSE(files.empty());
  for (const auto& path : files) {
    std::string text = read_file(path);
    CorpusCase c = parse_case(text, path.stem().string());
    CaseOutcome out = run_case(c, lex);
    EXPECT_TRUE(out.passed) << c.name << " " << out.error;
    EXPECT_EQ(write_case(c, out.actual), text) << c.name;
  }
}

}  // namespace
}  // namespace contsem
