#include "tyche/parser.hpp"

#include <charconv>
#include <set>

namespace tyche::dsl {

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(s.front())) return false;
  for (char c : s)
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  return true;
}

bool is_reserved_binding(std::string_view name) {
  return is_keyword(name) || name == kClockBinding || name == kEventParam;
}

class Parser {
 public:
  explicit Parser(std::span<const Token> tokens) : toks_(tokens) {}

  AppAst run() {
    AppAst ast;
    if (peek().kind == TokenKind::End)
      throw Error(ErrorKind::SyntaxError, "missing app header 'app \"<name>\"'", peek().span);
    ast.span = expect_keyword("app", "app header 'app \"<name>\"'").span;
    ast.name = expect(TokenKind::String, "app name string").text;

    while (peek().kind != TokenKind::End) {
      const Token& t = peek();
      if (auto level = risk_modifier(t)) {
        SourceSpan annot = next().span;
        if (!peek().is_keyword("input"))
          throw Error(ErrorKind::SyntaxError,
                      "risk annotation '" + t.text + "' must be followed by an input statement",
                      peek().span);
        auto in = input_decl();
        in.annotation = *level;
        in.annotation_span = annot;
        ast.inputs.push_back(std::move(in));
      } else if (t.is_keyword("input")) {
        ast.inputs.push_back(input_decl());
      } else if (t.is_keyword("subscribe")) {
        ast.subscriptions.push_back(subscribe_decl());
      } else if (t.is_keyword("def")) {
        ast.handlers.push_back(handler_decl());
      } else {
        throw Error(ErrorKind::SyntaxError,
                    "expected a declaration (risk annotation, input, subscribe or def), found " + describe(t),
                    t.span);
      }
    }
    resolve(ast);
    return ast;
  }

 private:
  static std::optional<RiskLevel> risk_modifier(const Token& t) {
    if (t.is_keyword("lowRiskRequest")) return RiskLevel::Low;
    if (t.is_keyword("medRiskRequest")) return RiskLevel::Medium;
    if (t.is_keyword("highRiskRequest")) return RiskLevel::High;
    return std::nullopt;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case TokenKind::Keyword: return "keyword '" + t.text + "'";
      case TokenKind::Identifier: return "identifier '" + t.text + "'";
      case TokenKind::String: return "string \"" + t.text + "\"";
      case TokenKind::Number: return "number " + t.text;
      default: return std::string(to_string(t.kind));
    }
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind)
      throw Error(ErrorKind::SyntaxError,
                  "expected " + std::string(what) + ", found " + describe(peek()), peek().span);
    return next();
  }

  const Token& expect_keyword(std::string_view kw, std::string_view what) {
    if (!peek().is_keyword(kw))
      throw Error(ErrorKind::SyntaxError,
                  "expected " + std::string(what) + ", found " + describe(peek()), peek().span);
    return next();
  }

  InputDecl input_decl() {
    InputDecl in;
    in.span = expect_keyword("input", "'input'").span;
    const Token& binding = expect(TokenKind::String, "device binding name string");
    if (!is_identifier(binding.text))
      throw Error(ErrorKind::SyntaxError, "device binding \"" + binding.text + "\" is not an identifier",
                  binding.span);
    if (is_reserved_binding(binding.text))
      throw Error(ErrorKind::SyntaxError, "device binding \"" + binding.text + "\" is a reserved word",
                  binding.span);
    in.binding = binding.text;
    expect(TokenKind::Comma, "','");
    const Token& cap = expect(TokenKind::String, "capability string \"capability.<name>\"");
    constexpr std::string_view prefix = "capability.";
    std::string_view body = cap.text;
    if (!body.starts_with(prefix) || !is_identifier(body.substr(prefix.size())))
      throw Error(ErrorKind::SyntaxError,
                  "capability must be written \"capability.<name>\", found \"" + cap.text + "\"", cap.span);
    in.capability = std::string(body.substr(prefix.size()));
    return in;
  }

  SubscribeDecl subscribe_decl() {
    SubscribeDecl sub;
    sub.span = expect_keyword("subscribe", "'subscribe'").span;
    expect(TokenKind::LParen, "'('");
    sub.binding = expect(TokenKind::Identifier, "device binding").text;
    expect(TokenKind::Comma, "','");
    const Token& filter = expect(TokenKind::String, "event filter \"<attribute>\" or \"<attribute>.<value>\"");
    std::string_view f = filter.text;
    auto dot = f.find('.');
    std::string_view attr = f.substr(0, dot);
    if (!is_identifier(attr) || (dot != std::string_view::npos && dot + 1 == f.size()))
      throw Error(ErrorKind::SyntaxError,
                  "event filter must be \"<attribute>\" or \"<attribute>.<value>\", found \"" + filter.text + "\"",
                  filter.span);
    sub.attribute = std::string(attr);
    if (dot != std::string_view::npos) sub.value_filter = std::string(f.substr(dot + 1));
    expect(TokenKind::Comma, "','");
    sub.handler = expect(TokenKind::Identifier, "handler name").text;
    expect(TokenKind::RParen, "')'");
    return sub;
  }

  HandlerDecl handler_decl() {
    HandlerDecl h;
    h.span = expect_keyword("def", "'def'").span;
    h.name = expect(TokenKind::Identifier, "handler name").text;
    expect(TokenKind::LParen, "'('");
    const Token& param = expect(TokenKind::Identifier, "parameter 'evt'");
    if (param.text != kEventParam)
      throw Error(ErrorKind::SyntaxError, "handler parameter must be named 'evt'", param.span);
    expect(TokenKind::RParen, "')'");
    h.body = block();
    return h;
  }

  std::vector<Stmt> block() {
    expect(TokenKind::LBrace, "'{'");
    std::vector<Stmt> body;
    while (peek().kind != TokenKind::RBrace) {
      if (peek().kind == TokenKind::End) throw Error(ErrorKind::SyntaxError, "unterminated block", peek().span);
      body.push_back(statement());
    }
    next();
    return body;
  }

  Stmt statement() {
    const Token& t = peek();
    if (t.is_keyword("if")) {
      IfStmt s;
      s.span = next().span;
      expect(TokenKind::LParen, "'('");
      s.condition = expr();
      expect(TokenKind::RParen, "')'");
      s.then_body = block();
      if (peek().is_keyword("else")) {
        next();
        s.has_else = true;
        s.else_body = block();
      }
      return {std::move(s)};
    }
    if (t.is_keyword("log")) {
      LogStmt s;
      s.span = next().span;
      expect(TokenKind::LParen, "'('");
      s.message = expr();
      expect(TokenKind::RParen, "')'");
      return {std::move(s)};
    }
    if (t.kind == TokenKind::Identifier) {
      CommandCall c;
      c.span = t.span;
      c.binding = next().text;
      expect(TokenKind::Dot, "'.'");
      c.command = expect(TokenKind::Identifier, "command name").text;
      if (peek().kind != TokenKind::LParen)
        throw Error(ErrorKind::SyntaxError, "expected '(' after command '" + c.command + "'", peek().span);
      next();
      if (peek().kind != TokenKind::RParen) {
        c.args.push_back(operand());
        while (peek().kind == TokenKind::Comma) {
          next();
          c.args.push_back(operand());
        }
      }
      expect(TokenKind::RParen, "')'");
      return {std::move(c)};
    }
    throw Error(ErrorKind::SyntaxError, "expected a statement, found " + describe(t), t.span);
  }

  Expr expr() {
    Expr e;
    e.span = peek().span;
    e.lhs = operand();
    std::optional<CompareOp> op;
    switch (peek().kind) {
      case TokenKind::EqEq: op = CompareOp::Eq; break;
      case TokenKind::NotEq: op = CompareOp::Ne; break;
      case TokenKind::Less: op = CompareOp::Lt; break;
      case TokenKind::Greater: op = CompareOp::Gt; break;
      default: break;
    }
    if (op) {
      next();
      e.cmp = Comparison{*op, operand()};
    }
    return e;
  }

  Operand operand() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::String:
        return StringLit{next().text};
      case TokenKind::Number: {
        double d = 0;
        const std::string& s = next().text;
        std::from_chars(s.data(), s.data() + s.size(), d);
        return NumberLit{d};
      }
      case TokenKind::Identifier: {
        SourceSpan span = t.span;
        std::string receiver = next().text;
        expect(TokenKind::Dot, "'.'");
        const Token& member = expect(TokenKind::Identifier, "member name");
        if (receiver == kEventParam) {
          if (member.text != "value")
            throw Error(ErrorKind::SyntaxError, "only 'evt.value' is available on events", member.span);
          return EventValue{};
        }
        if (peek().kind == TokenKind::LParen)
          throw Error(ErrorKind::SyntaxError, "device commands cannot be used as values", peek().span);
        auto attr = attribute_from_accessor(member.text);
        if (!attr)
          throw Error(ErrorKind::SyntaxError,
                      "expected attribute read 'current<Attribute>', found '" + member.text + "'", member.span);
        return AttrRead{receiver, *attr, span};
      }
      default:
        throw Error(ErrorKind::SyntaxError, "expected a value, found " + describe(t), t.span);
    }
  }

  void resolve(const AppAst& ast) {
    std::set<std::string> bindings;
    for (const auto& in : ast.inputs)
      if (!bindings.insert(in.binding).second)
        throw Error(ErrorKind::DuplicateBinding, "device binding '" + in.binding + "' declared twice", in.span);

    std::set<std::string> handlers;
    for (const auto& h : ast.handlers)
      if (!handlers.insert(h.name).second)
        throw Error(ErrorKind::DuplicateHandler, "handler '" + h.name + "' defined twice", h.span);

    for (const auto& sub : ast.subscriptions) {
      if (sub.binding != kClockBinding && !bindings.contains(sub.binding))
        throw Error(ErrorKind::UnresolvedBinding, "no input declares device '" + sub.binding + "'", sub.span);
      if (sub.binding == kClockBinding && sub.attribute != kClockAttribute)
        throw Error(ErrorKind::UnresolvedBinding, "'time' only provides the 'clock' attribute", sub.span);
      if (!handlers.contains(sub.handler))
        throw Error(ErrorKind::UnknownHandler, "no handler named '" + sub.handler + "'", sub.span);
    }
    for (const auto& h : ast.handlers) resolve(h.body, bindings);
  }

  void resolve(const Operand& o, const std::set<std::string>& bindings) {
    const AttrRead* r = std::get_if<AttrRead>(&o);
    if (const auto* g = std::get_if<GuardedRead>(&o)) r = &g->read;
    if (!r) return;
    if (r->binding == kClockBinding) {
      if (r->attribute != kClockAttribute)
        throw Error(ErrorKind::UnresolvedBinding, "'time' only provides 'currentClock'", r->span);
      return;
    }
    if (!bindings.contains(r->binding))
      throw Error(ErrorKind::UnresolvedBinding, "no input declares device '" + r->binding + "'", r->span);
  }

  void resolve(const Expr& e, const std::set<std::string>& bindings) {
    resolve(e.lhs, bindings);
    if (e.cmp) resolve(e.cmp->rhs, bindings);
  }

  void resolve(const std::vector<Stmt>& body, const std::set<std::string>& bindings) {
    for (const auto& s : body) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CommandCall> || std::is_same_v<T, GuardedCommand>) {
              const CommandCall& c = [&]() -> const CommandCall& {
                if constexpr (std::is_same_v<T, CommandCall>) return n; else return n.call;
              }();
              if (!bindings.contains(c.binding))
                throw Error(ErrorKind::UnresolvedBinding, "no input declares device '" + c.binding + "'", c.span);
              for (const auto& a : c.args) resolve(a, bindings);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              resolve(n.condition, bindings);
              resolve(n.then_body, bindings);
              resolve(n.else_body, bindings);
            } else {
              resolve(n.message, bindings);
            }
          },
          s.node);
    }
  }

  std::span<const Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

AppAst parse(std::span<const Token> tokens) {
  if (tokens.empty()) throw Error(ErrorKind::SyntaxError, "empty token stream", SourceSpan{1, 1});
  return Parser(tokens).run();
}

AppAst parse_source(std::string_view source) {
  auto tokens = tokenize(source);
  return parse(tokens);
}

std::vector<PermissionRequest> check_annotations(const AppAst& ast) {
  std::vector<PermissionRequest> requests;
  requests.reserve(ast.inputs.size());
  for (const auto& in : ast.inputs) {
    if (!in.annotation)
      throw Error(ErrorKind::MissingAnnotation,
                  "input \"" + in.binding + "\" requests capability." + in.capability +
                      " without a risk annotation (lowRiskRequest, medRiskRequest or highRiskRequest)",
                  in.span);
    requests.push_back({in.binding, in.capability, *in.annotation});
  }
  return requests;
}

}  // namespace tyche::dsl
