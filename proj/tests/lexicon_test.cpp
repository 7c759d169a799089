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

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "contsem/lexicon.hpp"

namespace contsem {
namespace {

TEST(Lexicon, DefaultEntriesTypeCheck) {
  Lexicon lex = default_lexicon();
  for (const auto& w : lex.words())
    for (const auto& e : lex.lookup(w))
      EXPECT_TRUE(checks_against(e.term, e.scheme.body, lex.signature())) << w;
}

TEST(Lexicon, LookupIsCaseInsensitive) {
  Lexicon lex = default_lexicon();
  EXPECT_TRUE(lex.contains("Alice"));
  EXPECT_TRUE(lex.contains("alice"));
  EXPECT_FALSE(lex.contains("Zed"));
  EXPECT_TRUE(lex.lookup("Zed").empty());
}

TEST(Lexicon, SlashSharesEntry) {
  Lexicon lex = default_lexicon();
  ASSERT_EQ(lex.lookup("who").size(), 1u);
  ASSERT_EQ(lex.lookup("whom").size(), 1u);
  EXPECT_EQ(lex.lookup("who")[0].term, lex.lookup("whom")[0].term);
  EXPECT_EQ(lex.lookup("remembers").size(), 2u);
}

TEST(Lexicon, WhAndGapTypes) {
  Lexicon lex = default_lexicon();
  EXPECT_EQ(print_type(lex.lookup("_")[0].scheme.body, true), "e{g|e #> g}");
  EXPECT_EQ(print_type(lex.lookup("what")[0].scheme.body, true), "e{g|e ?> g}");
  EXPECT_EQ(print_type(lex.lookup("everyone")[0].scheme.body, true), "e{t|t}");
}

TEST(Lexicon, Comments) {
  Lexicon lex;
  load_lexicon_text("const K : e   # a constant\n# whole-line comment\nk : e = K\n", lex);
  EXPECT_EQ(lex.size(), 1u);
}

TEST(Lexicon, ContinuationArrowIsNotAComment) {
  Lexicon lex;
  load_lexicon_text("gap : (e #> g) -> (e #> g) = \\c. c  # trailing\n", lex);
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(print_type(lex.lookup("gap")[0].scheme.body), "(e #> g) -> e #> g");
}

TEST(Lexicon, Errors) {
  Lexicon lex = default_lexicon();
  EXPECT_THROW(load_lexicon_text("zed : e = Zed", lex), UnknownConstant);
  EXPECT_THROW(load_lexicon_text("bad : e -> t = Alice", lex), LexiconTypeMismatch);
  EXPECT_THROW(load_lexicon_text("nothing here", lex), ParseError);
  EXPECT_THROW(load_lexicon_text("const lower : e", lex), ParseError);
  EXPECT_THROW(load_lexicon_text("w : e -> = Alice", lex), ParseError);
}

TEST(Lexicon, ParseErrorHasLine) {
  Lexicon lex;
  try {
    load_lexicon_text("const A : e\n\nbroken line\n", lex);
    FAIL() << "no throw";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

class LexiconFile : public ::testing::Test {
 protected:
  void SetUp() override {
    path_ = std::filesystem::temp_directory_path() / "contsem_lexicon_test.lex";
    std::ofstream(path_) << "const Dave : e\ndave : e = Dave\nsmokes : e -> t = Smoke\n";
  }
  void TearDown() override { std::filesystem::remove(path_); }
  std::filesystem::path path_;
};

TEST_F(LexiconFile, StandaloneKeepsBuiltInConstants) {
  Lexicon lex = load_lexicon(path_.string(), false);
  EXPECT_TRUE(lex.contains("dave"));
  EXPECT_TRUE(lex.contains("smokes"));
  EXPECT_FALSE(lex.contains("alice"));
}

TEST_F(LexiconFile, Extend) {
  Lexicon lex = load_lexicon(path_.string(), true);
  EXPECT_TRUE(lex.contains("dave"));
  EXPECT_TRUE(lex.contains("alice"));
  EXPECT_EQ(lex.lookup("smokes").size(), 2u);
}

TEST(LexiconFileMissing, Throws) {
  EXPECT_THROW(load_lexicon("/nonexistent/contsem.lex", false), Error);
}

}  // namespace
}  // namespace contsem
