#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "tyche/error.hpp"

namespace tyche::dsl {

enum class TokenKind {
  Keyword,
  Identifier,
  String,
  Number,
  LParen,
  RParen,
  LBrace,
  RBrace,
  Comma,
  Dot,
  EqEq,
  NotEq,
  Less,
  Greater,
  End,
};

std::string_view to_string(TokenKind kind);

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;  // keyword/identifier spelling, unescaped string body, number spelling
  SourceSpan span;

  bool is_keyword(std::string_view kw) const { return kind == TokenKind::Keyword && text == kw; }
};

bool is_keyword(std::string_view word);

/// Splits SmartApp source into tokens. The stream always ends with an End token.
/// Throws LexError on an unterminated string or an illegal character.
std::vector<Token> tokenize(std::string_view source);

}  // namespace tyche::dsl
