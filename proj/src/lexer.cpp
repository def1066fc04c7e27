#include "tyche/lexer.hpp"

#include <algorithm>
#include <array>

namespace tyche::dsl {

namespace {

constexpr std::array<std::string_view, 10> kKeywords = {
    "app", "input", "subscribe", "def", "if", "else", "log",
    "lowRiskRequest", "medRiskRequest", "highRiskRequest",
};

bool ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourceSpan at{line_, col_};
      if (pos_ >= src_.size()) {
        out.push_back({TokenKind::End, "", at});
        return out;
      }
      char c = src_[pos_];
      if (ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < src_.size() && (ident_start(src_[pos_]) || digit(src_[pos_]))) advance();
        std::string word(src_.substr(start, pos_ - start));
        out.push_back({is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, word, at});
      } else if (digit(c) || (c == '-' && pos_ + 1 < src_.size() && digit(src_[pos_ + 1]))) {
        out.push_back({TokenKind::Number, number(), at});
      } else if (c == '"') {
        out.push_back({TokenKind::String, string(at), at});
      } else {
        out.push_back({punct(at), "", at});
      }
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string number() {
    std::size_t start = pos_;
    if (src_[pos_] == '-') advance();
    while (pos_ < src_.size() && digit(src_[pos_])) advance();
    if (pos_ + 1 < src_.size() && src_[pos_] == '.' && digit(src_[pos_ + 1])) {
      advance();
      while (pos_ < src_.size() && digit(src_[pos_])) advance();
    }
    return std::string(src_.substr(start, pos_ - start));
  }

  std::string string(SourceSpan at) {
    advance();  // opening quote
    std::string body;
    while (pos_ < src_.size() && src_[pos_] != '\n') {
      char c = src_[pos_];
      if (c == '"') {
        advance();
        return body;
      }
      if (c == '\\' && pos_ + 1 < src_.size() && (src_[pos_ + 1] == '"' || src_[pos_ + 1] == '\\')) {
        advance();
        c = src_[pos_];
      }
      body += c;
      advance();
    }
    throw Error(ErrorKind::LexError, "unterminated string literal", at);
  }

  TokenKind punct(SourceSpan at) {
    char c = src_[pos_];
    char next = pos_ + 1 < src_.size() ? src_[pos_ + 1] : '\0';
    auto one = [&](TokenKind k) { advance(); return k; };
    auto two = [&](TokenKind k) { advance(); advance(); return k; };
    switch (c) {
      case '(': return one(TokenKind::LParen);
      case ')': return one(TokenKind::RParen);
      case '{': return one(TokenKind::LBrace);
      case '}': return one(TokenKind::RBrace);
      case ',': return one(TokenKind::Comma);
      case '.': return one(TokenKind::Dot);
      case '<': return one(TokenKind::Less);
      case '>': return one(TokenKind::Greater);
      case '=':
        if (next == '=') return two(TokenKind::EqEq);
        break;
      case '!':
        if (next == '=') return two(TokenKind::NotEq);
        break;
      default: break;
    }
    std::string shown = (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f)
                            ? "byte 0x" + hex(static_cast<unsigned char>(c))
                            : "'" + std::string(1, c) + "'";
    throw Error(ErrorKind::LexError, "illegal character " + shown, at);
  }

  static std::string hex(unsigned char b) {
    const char* digits = "0123456789abcdef";
    return {digits[b >> 4], digits[b & 0xf]};
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::string_view to_string(TokenKind kind) {
  switch (kind) {
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Identifier: return "identifier";
    case TokenKind::String: return "string";
    case TokenKind::Number: return "number";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::LBrace: return "'{'";
    case TokenKind::RBrace: return "'}'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::EqEq: return "'=='";
    case TokenKind::NotEq: return "'!='";
    case TokenKind::Less: return "'<'";
    case TokenKind::Greater: return "'>'";
    case TokenKind::End: return "end of input";
  }
  return "token";
}

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

std::vector<Token> tokenize(std::string_view source) { return Lexer(source).run(); }

}  // namespace tyche::dsl
