#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tyche/capability.hpp"
#include "tyche/error.hpp"

namespace tyche::dsl {

/// Receiver name of the platform clock. Reading `time.currentClock` or
/// subscribing to `time` needs no permission request.
inline constexpr std::string_view kClockBinding = "time";
inline constexpr std::string_view kClockAttribute = "clock";
inline constexpr std::string_view kEventParam = "evt";

struct StringLit {
  std::string value;
  friend bool operator==(const StringLit&, const StringLit&) = default;
};

struct NumberLit {
  double value = 0;
  friend bool operator==(const NumberLit&, const NumberLit&) = default;
};

/// `evt.value`
struct EventValue {
  friend bool operator==(const EventValue&, const EventValue&) = default;
};

/// `frontDoor.currentLock` reads attribute "lock" of the device bound to frontDoor.
struct AttrRead {
  std::string binding;
  std::string attribute;
  SourceSpan span;
  friend bool operator==(const AttrRead&, const AttrRead&) = default;
};

/// An attribute read the rewriter has routed through the reference monitor.
struct GuardedRead {
  OperationSig op;
  AttrRead read;
  friend bool operator==(const GuardedRead&, const GuardedRead&) = default;
};

using Operand = std::variant<StringLit, NumberLit, EventValue, AttrRead, GuardedRead>;

enum class CompareOp { Eq, Ne, Lt, Gt };
std::string_view to_string(CompareOp op);

struct Comparison {
  CompareOp op = CompareOp::Eq;
  Operand rhs;
  friend bool operator==(const Comparison&, const Comparison&) = default;
};

struct Expr {
  Operand lhs;
  std::optional<Comparison> cmp;
  SourceSpan span;
  friend bool operator==(const Expr&, const Expr&) = default;
};

struct CommandCall {
  std::string binding;
  std::string command;
  std::vector<Operand> args;
  SourceSpan span;
  friend bool operator==(const CommandCall&, const CommandCall&) = default;
};

/// A device command the rewriter has routed through the reference monitor.
struct GuardedCommand {
  OperationSig op;
  CommandCall call;
  friend bool operator==(const GuardedCommand&, const GuardedCommand&) = default;
};

struct LogStmt {
  Expr message;
  SourceSpan span;
  friend bool operator==(const LogStmt&, const LogStmt&) = default;
};

struct Stmt;

struct IfStmt {
  Expr condition;
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  bool has_else = false;
  SourceSpan span;
  friend bool operator==(const IfStmt&, const IfStmt&);
};

struct Stmt {
  std::variant<CommandCall, GuardedCommand, IfStmt, LogStmt> node;
  friend bool operator==(const Stmt&, const Stmt&) = default;
};

inline bool operator==(const IfStmt& a, const IfStmt& b) {
  return a.condition == b.condition && a.then_body == b.then_body && a.else_body == b.else_body &&
         a.has_else == b.has_else && a.span == b.span;
}

struct InputDecl {
  std::string binding;
  std::string capability;
  std::optional<RiskLevel> annotation;
  SourceSpan span;             // the `input` keyword
  SourceSpan annotation_span;  // the risk modifier, when present
  friend bool operator==(const InputDecl&, const InputDecl&) = default;
};

struct SubscribeDecl {
  std::string binding;
  std::string attribute;
  std::optional<std::string> value_filter;  // "contact.closed" -> "closed"
  std::string handler;
  std::optional<OperationSig> guard;  // set by the rewriter for device subscriptions
  SourceSpan span;
  friend bool operator==(const SubscribeDecl&, const SubscribeDecl&) = default;
};

struct HandlerDecl {
  std::string name;
  std::vector<Stmt> body;
  SourceSpan span;
  friend bool operator==(const HandlerDecl&, const HandlerDecl&) = default;
};

struct AppAst {
  std::string name;
  std::vector<InputDecl> inputs;
  std::vector<SubscribeDecl> subscriptions;
  std::vector<HandlerDecl> handlers;
  SourceSpan span;

  const InputDecl* find_input(std::string_view binding) const;
  const HandlerDecl* find_handler(std::string_view name) const;

  friend bool operator==(const AppAst&, const AppAst&) = default;
};

struct PermissionRequest {
  std::string binding;
  std::string capability;
  RiskLevel level = RiskLevel::Low;
  friend bool operator==(const PermissionRequest&, const PermissionRequest&) = default;
};

/// Copy of `ast` with every span zeroed, for structural comparison.
AppAst without_spans(AppAst ast);

/// "currentLock" -> "lock"; "lock" -> "currentLock".
std::optional<std::string> attribute_from_accessor(std::string_view accessor);
std::string accessor_for_attribute(std::string_view attribute);

}  // namespace tyche::dsl
