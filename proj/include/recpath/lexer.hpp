#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "recpath/error.hpp"

namespace recpath {

enum class TokenKind { Keyword, Identifier, IntLiteral, Operator, Punctuation };

struct Token {
  TokenKind kind = TokenKind::Punctuation;
  std::string lexeme;
  int line = 1;
  int column = 1;

  bool is(TokenKind k, std::string_view text) const { return kind == k && lexeme == text; }
};

inline bool is_keyword(std::string_view word) {
  static constexpr std::string_view keywords[] = {"int", "void", "if", "else", "return", "print", "read"};
  for (auto k : keywords)
    if (k == word) return true;
  return false;
}

/// Splits MiniLang source into tokens. `//` comments run to end of line and
/// are dropped; whitespace separates tokens and is otherwise ignored.
inline std::vector<Token> tokenize(std::string_view source) {
  std::vector<Token> tokens;
  int line = 1;
  int column = 1;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (source[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
  };

  while (i < source.size()) {
    const char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < source.size() && source[i + 1] == '/') {
      while (i < source.size() && source[i] != '\n') advance(1);
      continue;
    }

    Token tok;
    tok.line = line;
    tok.column = column;
    const auto uc = static_cast<unsigned char>(c);

    if (std::isalpha(uc) || c == '_') {
      std::size_t j = i;
      while (j < source.size() &&
             (std::isalnum(static_cast<unsigned char>(source[j])) || source[j] == '_'))
        ++j;
      tok.lexeme = std::string(source.substr(i, j - i));
      tok.kind = is_keyword(tok.lexeme) ? TokenKind::Keyword : TokenKind::Identifier;
    } else if (std::isdigit(uc)) {
      std::size_t j = i;
      while (j < source.size() && std::isdigit(static_cast<unsigned char>(source[j]))) ++j;
      tok.lexeme = std::string(source.substr(i, j - i));
      tok.kind = TokenKind::IntLiteral;
      std::int64_t parsed = 0;
      auto [ptr, ec] = std::from_chars(tok.lexeme.data(), tok.lexeme.data() + tok.lexeme.size(), parsed);
      if (ec != std::errc{} || ptr != tok.lexeme.data() + tok.lexeme.size())
        throw LexError(line, column, c, "integer literal out of range '" + tok.lexeme + "'");
    } else {
      const char next = i + 1 < source.size() ? source[i + 1] : '\0';
      if ((c == '<' || c == '>' || c == '=' || c == '!') && next == '=') {
        tok.lexeme = std::string{c, '='};
        tok.kind = TokenKind::Operator;
      } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '<' || c == '>' || c == '=') {
        tok.lexeme = std::string(1, c);
        tok.kind = TokenKind::Operator;
      } else if (c == '(' || c == ')' || c == '{' || c == '}' || c == ',' || c == ';') {
        tok.lexeme = std::string(1, c);
        tok.kind = TokenKind::Punctuation;
      } else {
        std::string shown = std::isprint(uc) ? std::string(1, c) : "\\x" + std::to_string(uc);
        throw LexError(line, column, c, "unexpected character '" + shown + "'");
      }
    }
    advance(tok.lexeme.size());
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

}  // namespace recpath
