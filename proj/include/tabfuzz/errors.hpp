// Copyright 2026 The Tabfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TABFUZZ_ERRORS_HPP_
#define TABFUZZ_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tabfuzz {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Grammar DSL could not be parsed.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class UndefinedNonterminal : public Error {
 public:
  explicit UndefinedNonterminal(const std::string& symbol)
      : Error("undefined nonterminal " + symbol), symbol_(symbol) {}
  const std::string& symbol() const { return symbol_; }

 private:
  std::string symbol_;
};

// A symbol has no finite derivation within the depth budget.
class UnsatisfiableGrammar : public Error {
 public:
  using Error::Error;
};

class MalformedRow : public Error {
 public:
  using Error::Error;
};

class SchemaMismatch : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

class UnknownCategory : public Error {
 public:
  UnknownCategory(const std::string& token, const std::string& column)
      : Error("unknown category '" + token + "' in column '" + column + "'"),
        token_(token),
        column_(column) {}
  const std::string& token() const { return token_; }
  const std::string& column() const { return column_; }

 private:
  std::string token_;
  std::string column_;
};

class HeaderMismatch : public Error {
 public:
  using Error::Error;
};

class TooSmall : public Error {
 public:
  using Error::Error;
};

// Score is undefined for the given inputs (e.g. R^2 of a constant target).
class UndefinedScore : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace tabfuzz

#endif  // TABFUZZ_ERRORS_HPP_
