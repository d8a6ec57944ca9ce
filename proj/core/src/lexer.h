/*
 * Copyright 2026 The boundql Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "boundql/error.h"

namespace boundql::detail {

enum class TokenKind { kIdent, kInteger, kString, kSymbol, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string text;  // identifier/symbol text, unquoted string contents
  int64_t integer = 0;
  std::size_t offset = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Shared tokenizer for DDL and query text. Handles '--' line comments,
// single-quoted strings with '' escapes, and multi-char operators.
std::vector<Token> lex(std::string_view source);

class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool atEnd() const { return peek().kind == TokenKind::kEnd; }

  bool isKeyword(std::string_view kw, std::size_t ahead = 0) const;
  bool isSymbol(std::string_view sym, std::size_t ahead = 0) const;
  bool acceptKeyword(std::string_view kw);
  bool acceptSymbol(std::string_view sym);
  void expectKeyword(std::string_view kw);
  void expectSymbol(std::string_view sym);
  std::string expectIdent(std::string_view what);
  int64_t expectInteger(std::string_view what);

  [[noreturn]] void fail(const std::string& message) const { fail(message, peek()); }
  [[noreturn]] static void fail(const std::string& message, const Token& at);

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::string describe(const Token& token);

}  // namespace boundql::detail
