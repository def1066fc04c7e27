#include "tyche/ast.hpp"

#include <cctype>

namespace tyche::dsl {

std::string_view to_string(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
  }
  return "?";
}

const InputDecl* AppAst::find_input(std::string_view binding) const {
  for (const auto& in : inputs)
    if (in.binding == binding) return &in;
  return nullptr;
}

const HandlerDecl* AppAst::find_handler(std::string_view handler) const {
  for (const auto& h : handlers)
    if (h.name == handler) return &h;
  return nullptr;
}

std::optional<std::string> attribute_from_accessor(std::string_view accessor) {
  constexpr std::string_view prefix = "current";
  if (!accessor.starts_with(prefix) || accessor.size() == prefix.size()) return std::nullopt;
  char first = accessor[prefix.size()];
  if (!std::isupper(static_cast<unsigned char>(first))) return std::nullopt;
  std::string attr(accessor.substr(prefix.size()));
  attr[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(first)));
  return attr;
}

std::string accessor_for_attribute(std::string_view attribute) {
  std::string out = "current";
  out += attribute;
  out[7] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[7])));
  return out;
}

namespace {

void clear(AttrRead& r) { r.span = {}; }

void clear(Operand& o) {
  if (auto* r = std::get_if<AttrRead>(&o)) clear(*r);
  if (auto* g = std::get_if<GuardedRead>(&o)) clear(g->read);
}

void clear(Expr& e) {
  e.span = {};
  clear(e.lhs);
  if (e.cmp) clear(e.cmp->rhs);
}

void clear(CommandCall& c) {
  c.span = {};
  for (auto& a : c.args) clear(a);
}

void clear(std::vector<Stmt>& body);

void clear(Stmt& s) {
  std::visit(
      [](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, CommandCall>) {
          clear(n);
        } else if constexpr (std::is_same_v<T, GuardedCommand>) {
          clear(n.call);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          n.span = {};
          clear(n.condition);
          clear(n.then_body);
          clear(n.else_body);
        } else {
          n.span = {};
          clear(n.message);
        }
      },
      s.node);
}

void clear(std::vector<Stmt>& body) {
  for (auto& s : body) clear(s);
}

}  // namespace

AppAst without_spans(AppAst ast) {
  ast.span = {};
  for (auto& in : ast.inputs) in.span = in.annotation_span = {};
  for (auto& sub : ast.subscriptions) sub.span = {};
  for (auto& h : ast.handlers) {
    h.span = {};
    clear(h.body);
  }
  return ast;
}

}  // namespace tyche::dsl
