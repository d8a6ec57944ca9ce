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
#include "lexer.h"

#include <cctype>

#include "boundql/catalog.h"

namespace boundql::detail {

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (true) {
    while (i < src.size()) {
      if (std::isspace(static_cast<unsigned char>(src[i]))) {
        advance(1);
      } else if (src.compare(i, 2, "--") == 0) {
        while (i < src.size() && src[i] != '\n') advance(1);
      } else {
        break;
      }
    }
    Token t;
    t.offset = i;
    t.line = line;
    t.column = col;
    if (i >= src.size()) {
      t.kind = TokenKind::kEnd;
      out.push_back(t);
      return out;
    }
    unsigned char c = static_cast<unsigned char>(src[i]);
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
        ++j;
      t.kind = TokenKind::kIdent;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::kInteger;
      t.text = std::string(src.substr(i, j - i));
      try {
        t.integer = std::stoll(t.text);
      } catch (const std::exception&) {
        TokenStream::fail("integer literal out of range", t);
      }
      advance(j - i);
    } else if (c == '\'') {
      std::string value;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < src.size()) {
        if (src[j] == '\'') {
          if (j + 1 < src.size() && src[j + 1] == '\'') {
            value += '\'';
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        value += src[j++];
      }
      if (!closed) TokenStream::fail("unterminated string literal", t);
      t.kind = TokenKind::kString;
      t.text = std::move(value);
      advance(j - i);
    } else {
      static constexpr std::string_view kTwo[] = {"<=", ">=", "<>", "!="};
      t.kind = TokenKind::kSymbol;
      bool matched = false;
      for (auto two : kTwo) {
        if (src.compare(i, 2, two) == 0) {
          t.text = std::string(two);
          matched = true;
          break;
        }
      }
      if (!matched) {
        static constexpr std::string_view kOne = "(),;=<>.*[]:-%";
        if (kOne.find(static_cast<char>(c)) == std::string_view::npos)
          TokenStream::fail(std::string("unexpected character '") +
                                static_cast<char>(c) + "'",
                            t);
        t.text = std::string(1, static_cast<char>(c));
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
}

std::string describe(const Token& token) {
  switch (token.kind) {
    case TokenKind::kEnd:
      return "end of input";
    case TokenKind::kString:
      return "string '" + token.text + "'";
    default:
      return "'" + token.text + "'";
  }
}

bool TokenStream::isKeyword(std::string_view kw, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kIdent && iequals(t.text, kw);
}

bool TokenStream::isSymbol(std::string_view sym, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == TokenKind::kSymbol && t.text == sym;
}

bool TokenStream::acceptKeyword(std::string_view kw) {
  if (!isKeyword(kw)) return false;
  next();
  return true;
}

bool TokenStream::acceptSymbol(std::string_view sym) {
  if (!isSymbol(sym)) return false;
  next();
  return true;
}

void TokenStream::expectKeyword(std::string_view kw) {
  if (!acceptKeyword(kw))
    fail("expected " + std::string(kw) + ", found " + describe(peek()));
}

void TokenStream::expectSymbol(std::string_view sym) {
  if (!acceptSymbol(sym))
    fail("expected '" + std::string(sym) + "', found " + describe(peek()));
}

std::string TokenStream::expectIdent(std::string_view what) {
  if (peek().kind != TokenKind::kIdent)
    fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next().text;
}

int64_t TokenStream::expectInteger(std::string_view what) {
  if (peek().kind != TokenKind::kInteger)
    fail("expected " + std::string(what) + ", found " + describe(peek()));
  return next().integer;
}

void TokenStream::fail(const std::string& message, const Token& at) {
  throw SyntaxError(message, at.offset, at.line, at.column);
}

}  // namespace boundql::detail
