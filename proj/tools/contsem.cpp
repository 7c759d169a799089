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

// contsem: derive readings, dump the rule tower or lexicon, run the corpus.
//
// Exit status: 0 with at least one reading (or all corpus cases passing),
// 1 on no derivation (or a failing case), 2 on usage and input errors.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "contsem/contsem.hpp"

namespace {

using namespace contsem;

struct Config {
  std::string input;
  int order = 2;
  std::string goal;
  std::string lexicon_path;
  bool extend = false;
  int max_unary = 3;
  int max_type_depth = 12;
  bool all_bracketings = false;
  bool prefer_ltr = false;
  bool trees = false;
  OutputFormat format = OutputFormat::All;
  unsigned threads = 1;
  bool diagnostics = false;
  std::string corpus_dir;
  bool update = false;
};

Lexicon make_lexicon(const Config& cfg) {
  if (cfg.lexicon_path.empty()) return default_lexicon();
  return load_lexicon(cfg.lexicon_path, cfg.extend);
}

int run_derive(const Config& cfg) {
  Lexicon lex = make_lexicon(cfg);
  SearchOptions opts;
  opts.order = cfg.order;
  opts.max_unary = cfg.max_unary;
  opts.max_type_depth = cfg.max_type_depth;
  opts.enumerate_bracketings = cfg.all_bracketings;
  opts.prefer_ltr = cfg.prefer_ltr;
  opts.threads = cfg.threads;
  if (!cfg.goal.empty()) opts.goal = parse_type(cfg.goal);
  DeriveResult res = derive(parse_tree(cfg.input), tower(cfg.order), lex, opts);
  if (res.no_derivation()) {
    std::cout << "no derivation\n";
    std::cerr << res.diagnostics.render();
    return 1;
  }
  std::cout << render_readings(res.readings, cfg.format, cfg.trees);
  if (cfg.diagnostics) std::cerr << res.diagnostics.render();
  return 0;
}

int run_rules(const Config& cfg) {
  std::cout << render_tower(tower(cfg.order));
  return 0;
}

int run_lexicon(const Config& cfg) {
  std::cout << render_lexicon(make_lexicon(cfg));
  return 0;
}

int run_corpus(const Config& cfg) {
  std::filesystem::path dir = cfg.corpus_dir;
  if (dir.empty()) {
    const char* env = std::getenv("CONTSEM_CORPUS");
    dir = env ? env : "corpus";
  }
  if (!std::filesystem::is_directory(dir)) {
    std::cerr << "error: corpus directory " << dir.string() << " not found\n";
    return 2;
  }
  Lexicon lex = make_lexicon(cfg);
  std::size_t failed = 0;
  auto files = corpus_files(dir);
  for (const auto& path : files) {
    CorpusCase c = parse_case(read_file(path), path.stem().string());
    CaseOutcome out = run_case(c, lex);
    if (cfg.update && out.error.empty()) {
      std::ofstream(path) << write_case(c, out.actual);
      out.passed = true;
    }
    std::cout << (out.passed ? "PASS " : "FAIL ") << c.name << "\n";
    if (out.passed) continue;
    ++failed;
    if (!out.error.empty()) {
      std::cout << "  error: " << out.error << "\n";
      continue;
    }
    for (const auto& e : c.expected) std::cout << "  expected: " << e << "\n";
    for (const auto& a : out.actual) std::cout << "  actual:   " << a << "\n";
    if (out.actual.empty()) std::cout << "  actual:   no derivation\n";
  }
  std::cout << files.size() - failed << "/" << files.size() << " cases passed\n";
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuation-based derivations of quantifier and wh-question readings"};
  app.require_subcommand(1);
  Config cfg;

  auto add_lexicon = [&](CLI::App* sub) {
    sub->add_option("--lexicon", cfg.lexicon_path, "Lexicon file replacing the built-in one");
    sub->add_flag("--extend", cfg.extend, "Add the --lexicon file to the built-in lexicon");
  };

  std::map<std::string, OutputFormat> formats{{"terms", OutputFormat::Terms},
                                              {"types", OutputFormat::Types},
                                              {"trees", OutputFormat::Trees},
                                              {"all", OutputFormat::All}};

  auto* derive_cmd = app.add_subcommand("derive", "Print the readings of a bracketed sentence");
  derive_cmd->add_option("input", cfg.input, "Bracketed sentence, e.g. '(Alice (loves Bob))'")
      ->required();
  derive_cmd->add_option("--order", cfg.order, "Grammar tower order")->check(CLI::Range(0, kDefaultMaxOrder));
  derive_cmd->add_option("--goal", cfg.goal, "Keep readings whose type matches this pattern");
  add_lexicon(derive_cmd);
  derive_cmd->add_option("--max-unary", cfg.max_unary, "Unary rules per node")->check(CLI::NonNegativeNumber);
  derive_cmd->add_option("--max-type-depth", cfg.max_type_depth, "Largest type depth kept")
      ->check(CLI::PositiveNumber);
  derive_cmd->add_flag("--all-bracketings", cfg.all_bracketings, "Try every bracketing of the tokens");
  derive_cmd->add_flag("--prefer-ltr", cfg.prefer_ltr, "List left-to-right readings first");
  derive_cmd->add_flag("--trees", cfg.trees, "Show derivation trees");
  derive_cmd->add_option("--format", cfg.format, "terms, types, trees or all")
      ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  derive_cmd->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  derive_cmd->add_flag("--diagnostics", cfg.diagnostics, "Print per-node item counts to stderr");

  auto* rules_cmd = app.add_subcommand("rules", "List the rules of a grammar tower level");
  rules_cmd->add_option("--order", cfg.order, "Grammar tower order")->check(CLI::Range(0, kDefaultMaxOrder));

  auto* lexicon_cmd = app.add_subcommand("lexicon", "List lexical entries");
  add_lexicon(lexicon_cmd);

  auto* corpus_cmd = app.add_subcommand("corpus", "Run golden cases");
  corpus_cmd->add_option("dir", cfg.corpus_dir, "Case directory (default $CONTSEM_CORPUS or ./corpus)");
  corpus_cmd->add_flag("--update", cfg.update, "Rewrite expected readings from current output");
  add_lexicon(corpus_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*derive_cmd) return run_derive(cfg);
    if (*rules_cmd) return run_rules(cfg);
    if (*lexicon_cmd) return run_lexicon(cfg);
    if (*corpus_cmd) return run_corpus(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
