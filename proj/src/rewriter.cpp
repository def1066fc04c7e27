#include "tyche/rewriter.hpp"

namespace tyche {

using namespace dsl;

namespace {

class Rewriter {
 public:
  Rewriter(const AppAst& ast, const RiskTable& table) : ast_(ast), table_(table) {}

  AppAst run() {
    AppAst out = ast_;
    for (auto& sub : out.subscriptions) {
      if (sub.binding == kClockBinding) continue;
      sub.guard = checked({capability_of(sub.binding), sub.attribute, OperationKind::Attribute}, sub.span);
    }
    for (auto& h : out.handlers) guard(h.body);
    return out;
  }

 private:
  const std::string& capability_of(const std::string& binding) const {
    // parse() already resolved every binding
    return ast_.find_input(binding)->capability;
  }

  OperationSig checked(OperationSig op, SourceSpan span) const {
    if (!table_.contains(op))
      throw Error(ErrorKind::UnknownOperationOnCapability,
                  "capability '" + op.capability + "' has no " +
                      (op.is_command() ? "command '" + op.name + "()'" : "attribute '" + op.name + "'"),
                  span);
    return op;
  }

  void guard(Operand& o) const {
    if (auto* g = std::get_if<GuardedRead>(&o)) {
      // already guarded: recompute, rewriting is idempotent
      AttrRead read = g->read;
      o = read;
    }
    if (auto* r = std::get_if<AttrRead>(&o)) {
      if (r->binding == kClockBinding) return;
      auto op = checked({capability_of(r->binding), r->attribute, OperationKind::Attribute}, r->span);
      o = GuardedRead{std::move(op), *r};
    }
  }

  void guard(Expr& e) const {
    guard(e.lhs);
    if (e.cmp) guard(e.cmp->rhs);
  }

  void guard(std::vector<Stmt>& body) const {
    for (auto& s : body) {
      if (auto* g = std::get_if<GuardedCommand>(&s.node)) {
        CommandCall call = g->call;
        s.node = call;
      }
      std::visit(
          [&](auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CommandCall>) {
              for (auto& a : n.args) guard(a);
              auto op = checked({capability_of(n.binding), n.command, OperationKind::Command}, n.span);
              s.node = GuardedCommand{std::move(op), n};
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              guard(n.condition);
              guard(n.then_body);
              guard(n.else_body);
            } else if constexpr (std::is_same_v<T, LogStmt>) {
              guard(n.message);
            }
          },
          s.node);
    }
  }

  const AppAst& ast_;
  const RiskTable& table_;
};

struct Counter {
  GuardCounts guarded;
  int unguarded = 0;

  void operand(const Operand& o) {
    if (std::holds_alternative<GuardedRead>(o)) ++guarded.attribute_reads;
    if (const auto* r = std::get_if<AttrRead>(&o); r && r->binding != kClockBinding) ++unguarded;
  }
  void expr(const Expr& e) {
    operand(e.lhs);
    if (e.cmp) operand(e.cmp->rhs);
  }
  void body(const std::vector<Stmt>& stmts) {
    for (const auto& s : stmts) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CommandCall>) {
              ++unguarded;
              for (const auto& a : n.args) operand(a);
            } else if constexpr (std::is_same_v<T, GuardedCommand>) {
              ++guarded.commands;
              for (const auto& a : n.call.args) operand(a);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              expr(n.condition);
              body(n.then_body);
              body(n.else_body);
            } else {
              expr(n.message);
            }
          },
          s.node);
    }
  }
  void app(const AppAst& ast) {
    for (const auto& sub : ast.subscriptions) {
      if (sub.guard) ++guarded.subscriptions;
      else if (sub.binding != kClockBinding) ++unguarded;
    }
    for (const auto& h : ast.handlers) body(h.body);
  }
};

}  // namespace

RewrittenApp rewrite(const AppAst& ast, const std::vector<PermissionRequest>& requests, const RiskTable& table) {
  for (const auto& req : requests)
    if (!table.has_capability(req.capability)) {
      const auto* in = ast.find_input(req.binding);
      throw Error(ErrorKind::UnknownCapability, "unknown capability '" + req.capability + "'",
                  in ? std::optional(in->span) : std::nullopt);
    }
  RewrittenApp app;
  app.ast_ = Rewriter(ast, table).run();
  app.requests_ = requests;
  for (const auto& req : requests) app.notice_.push_back({req.capability, req.level});
  return app;
}

GuardCounts guard_count(const AppAst& ast) {
  Counter c;
  c.app(ast);
  return c.guarded;
}

GuardCounts guard_count(const RewrittenApp& app) { return guard_count(app.ast()); }

int unguarded_count(const AppAst& ast) {
  Counter c;
  c.app(ast);
  return c.unguarded;
}

}  // namespace tyche
