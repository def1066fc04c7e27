#include "tyche/printer.hpp"

#include "tyche/value.hpp"

namespace tyche::dsl {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string guard_marker(const OperationSig& op) { return "@guard(" + op.id() + ") "; }

class Printer {
 public:
  explicit Printer(PrintOptions opts) : opts_(opts) {}

  std::string run(const AppAst& ast) {
    out_ = "app " + quote(ast.name) + "\n";
    if (!ast.inputs.empty()) out_ += "\n";
    for (const auto& in : ast.inputs) {
      if (in.annotation) out_ += std::string(modifier(*in.annotation)) + "\n";
      out_ += "input " + quote(in.binding) + ", " + quote("capability." + in.capability) + "\n";
    }
    if (!ast.subscriptions.empty()) out_ += "\n";
    for (const auto& sub : ast.subscriptions) {
      if (opts_.show_guards && sub.guard) out_ += guard_marker(*sub.guard);
      std::string filter = sub.attribute;
      if (sub.value_filter) filter += "." + *sub.value_filter;
      out_ += "subscribe(" + sub.binding + ", " + quote(filter) + ", " + sub.handler + ")\n";
    }
    for (const auto& h : ast.handlers) {
      out_ += "\ndef " + h.name + "(evt) {\n";
      body(h.body, 1);
      out_ += "}\n";
    }
    return std::move(out_);
  }

 private:
  static std::string_view modifier(RiskLevel level) {
    switch (level) {
      case RiskLevel::Low: return "lowRiskRequest";
      case RiskLevel::Medium: return "medRiskRequest";
      case RiskLevel::High: return "highRiskRequest";
    }
    return "";
  }

  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  std::string operand(const Operand& o) const {
    return std::visit(
        [&](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, StringLit>) return quote(n.value);
          else if constexpr (std::is_same_v<T, NumberLit>) return format_number(n.value);
          else if constexpr (std::is_same_v<T, EventValue>) return "evt.value";
          else if constexpr (std::is_same_v<T, AttrRead>) return n.binding + "." + accessor_for_attribute(n.attribute);
          else {
            std::string read = n.read.binding + "." + accessor_for_attribute(n.read.attribute);
            return opts_.show_guards ? guard_marker(n.op) + read : read;
          }
        },
        o);
  }

  std::string expr(const Expr& e) const {
    std::string s = operand(e.lhs);
    if (e.cmp) s += " " + std::string(to_string(e.cmp->op)) + " " + operand(e.cmp->rhs);
    return s;
  }

  std::string call(const CommandCall& c) const {
    std::string s = c.binding + "." + c.command + "(";
    for (std::size_t i = 0; i < c.args.size(); ++i) {
      if (i) s += ", ";
      s += operand(c.args[i]);
    }
    return s + ")";
  }

  void body(const std::vector<Stmt>& stmts, int depth) {
    for (const auto& s : stmts) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            indent(depth);
            if constexpr (std::is_same_v<T, CommandCall>) {
              out_ += call(n) + "\n";
            } else if constexpr (std::is_same_v<T, GuardedCommand>) {
              if (opts_.show_guards) out_ += guard_marker(n.op);
              out_ += call(n.call) + "\n";
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              out_ += "if (" + expr(n.condition) + ") {\n";
              body(n.then_body, depth + 1);
              indent(depth);
              out_ += "}";
              if (n.has_else) {
                out_ += " else {\n";
                body(n.else_body, depth + 1);
                indent(depth);
                out_ += "}";
              }
              out_ += "\n";
            } else {
              out_ += "log(" + expr(n.message) + ")\n";
            }
          },
          s.node);
    }
  }

  PrintOptions opts_;
  std::string out_;
};

}  // namespace

std::string pretty_print(const AppAst& ast, PrintOptions options) { return Printer(options).run(ast); }

}  // namespace tyche::dsl
