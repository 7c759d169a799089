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

#ifndef CONTSEM_ERROR_HPP
#define CONTSEM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace contsem {

/// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class FuelExhausted : public Error {
 public:
  explicit FuelExhausted(std::size_t fuel)
      : Error("beta normalization did not terminate within " +
              std::to_string(fuel) + " steps") {}
};

/// Syntax error in a term, type, bracketed input, lexicon or corpus file.
/// `line` and `column` are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(format(what, line, column)), line_(line), column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t line,
                            std::size_t column) {
    std::string out;
    if (line > 0) out += "line " + std::to_string(line) + ": ";
    if (column > 0) out += "column " + std::to_string(column) + ": ";
    return out + what;
  }

  std::size_t line_;
  std::size_t column_;
};

class Mismatch : public Error {
 public:
  Mismatch(const std::string& left, const std::string& right)
      : Error("cannot unify " + left + " with " + right),
        left_(left),
        right_(right) {}
  const std::string& left() const { return left_; }
  const std::string& right() const { return right_; }

 private:
  std::string left_, right_;
};

class OccursCheck : public Error {
 public:
  OccursCheck(const std::string& var, const std::string& type)
      : Error("occurs check: " + var + " occurs in " + type) {}
};

class IllTyped : public Error {
 public:
  IllTyped(const std::string& term, const std::string& reason)
      : Error("ill-typed term " + term + ": " + reason) {}
};

class InvalidPermutation : public Error {
 public:
  using Error::Error;
};

class OrderTooLarge : public Error {
 public:
  OrderTooLarge(int order, int max)
      : Error("grammar order " + std::to_string(order) +
              " exceeds the configured maximum " + std::to_string(max)) {}
};

class UnknownConstant : public Error {
 public:
  explicit UnknownConstant(const std::string& name)
      : Error("unknown constant " + name) {}
};

class LexiconTypeMismatch : public Error {
 public:
  LexiconTypeMismatch(const std::string& word, const std::string& detail)
      : Error("entry '" + word + "' does not have its declared type: " +
              detail) {}
};

class UnknownWord : public Error {
 public:
  explicit UnknownWord(const std::string& token)
      : Error("unknown word '" + token + "'"), token_(token) {}
  const std::string& token() const { return token_; }

 private:
  std::string token_;
};

class TooManyBracketings : public Error {
 public:
  TooManyBracketings(std::size_t tokens, std::size_t limit)
      : Error(std::to_string(tokens) + " tokens exceed the bracketing limit of " +
              std::to_string(limit)) {}
};

}  // namespace contsem

#endif  // CONTSEM_ERROR_HPP
