#include "tyche/runtime.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace tyche {

using namespace dsl;

const Grant* InstalledApp::grant_for(std::string_view binding) const {
  for (const auto& g : grants_)
    if (g.binding == binding) return &g;
  return nullptr;
}

const std::string* InstalledApp::device_for(std::string_view binding) const {
  const Grant* g = grant_for(binding);
  return g ? &g->device : nullptr;
}

namespace {

std::vector<Grant> bind_devices(const std::string& app, const std::vector<PermissionRequest>& requests,
                                const HomeConfig& home, PromptSource& prompt) {
  std::vector<Grant> grants;
  for (const auto& req : requests) {
    std::vector<const Device*> candidates;
    for (const auto& d : home.devices)
      if (d.supports(req.capability)) candidates.push_back(&d);
    if (candidates.empty())
      throw Error(ErrorKind::NoMatchingDevice,
                  "app " + app + ": no device in the home supports capability '" + req.capability + "'");
    auto chosen = prompt.choose({app, req}, candidates);
    if (!chosen)
      throw Error(ErrorKind::UserDenied, "app " + app + ": user denied " + req.capability + " at " +
                                             std::string(to_upper_string(req.level)) + " risk");
    auto it = std::find_if(candidates.begin(), candidates.end(), [&](const Device* d) { return d->id == *chosen; });
    if (it == candidates.end())
      throw Error(ErrorKind::ParseError,
                  "app " + app + ": device '" + *chosen + "' does not support capability '" + req.capability + "'");
    grants.push_back({app, req.binding, *chosen, req.capability, req.level});
  }
  return grants;
}

}  // namespace

InstalledApp install(const RewrittenApp& app, const HomeConfig& home, PromptSource& prompt, Trace* trace) {
  const std::string& name = app.ast().name;
  if (trace)
    for (const auto& n : app.startup_notice()) trace->append(trace::StartupNotice{name, n.capability, n.level});

  InstalledApp installed;
  installed.grants_ = bind_devices(name, app.requests(), home, prompt);
  installed.program_ = std::make_shared<const AppAst>(app.ast());
  installed.notice_ = app.startup_notice();
  installed.monitored_ = true;
  return installed;
}

InstalledApp install_unmonitored(const AppAst& ast, const HomeConfig& home, PromptSource& prompt) {
  std::vector<PermissionRequest> bindings;
  for (const auto& in : ast.inputs)
    bindings.push_back({in.binding, in.capability, in.annotation.value_or(RiskLevel::High)});
  InstalledApp installed;
  installed.grants_ = bind_devices(ast.name, bindings, home, prompt);
  installed.program_ = std::make_shared<const AppAst>(ast);
  installed.monitored_ = false;
  return installed;
}

MonitorDecision monitor_check(const Grant& grant, const OperationSig& op, const RiskTable& table, Trace* trace) {
  if (op.capability != grant.capability)
    throw Error(ErrorKind::CapabilityMismatch, "operation '" + op.id() + "' checked against a grant for capability '" +
                                                   grant.capability + "'");
  MonitorDecision d;
  d.op = op;
  d.granted = grant.level;
  d.required = table.level_of(op);
  d.verdict = allowed(table, grant.level, op) ? Verdict::Allow : Verdict::Deny;
  if (trace) trace->append(trace::MonitorCheck{grant.app, grant.binding, op, d.verdict, d.granted, d.required});
  return d;
}

namespace {

struct Behavior {
  std::string_view capability;
  std::string_view command;
  std::string_view attribute;
  std::string_view value;
};

constexpr Behavior kBehaviors[] = {
    {"lock", "lock", "lock", "locked"},
    {"lock", "unlock", "lock", "unlocked"},
    {"switch", "on", "switch", "on"},
    {"switch", "off", "switch", "off"},
    {"alarm", "strobe", "alarm", "strobe"},
    {"alarm", "siren", "alarm", "siren"},
    {"alarm", "both", "alarm", "both"},
    {"alarm", "off", "alarm", "off"},
};

}  // namespace

std::optional<AttributeEvent> execute_command(Device& device, const OperationSig& op) {
  if (!op.is_command()) throw Error(ErrorKind::NotACommand, "'" + op.id() + "' is an attribute, not a command");
  if (!device.supports(op.capability))
    throw Error(ErrorKind::CapabilityMismatch,
                "device '" + device.id + "' does not support capability '" + op.capability + "'");
  for (const auto& b : kBehaviors) {
    if (b.capability != op.capability || b.command != op.name) continue;
    Value next = std::string(b.value);
    auto [it, inserted] = device.state.try_emplace(std::string(b.attribute), next);
    if (!inserted) {
      if (it->second == next) return std::nullopt;
      it->second = next;
    }
    return AttributeEvent{device.id, std::string(b.attribute), std::move(next)};
  }
  return std::nullopt;  // commands outside the behavior table have no simulated effect
}

namespace {

/// Thrown to end the current handler activation after a denied operation.
struct HandlerAborted {};

class Engine {
 public:
  Engine(std::span<const InstalledApp> apps, const HomeConfig& home, const RiskTable& table, const Catalog& catalog)
      : apps_(apps), home_(home), table_(table), catalog_(catalog) {}

  Trace run(std::span<const ScenarioEvent> scenario) {
    for (const auto& app : apps_)
      if (app.monitored())
        for (const auto& n : app.notice()) trace_.append(trace::StartupNotice{app.name(), n.capability, n.level});

    std::vector<const ScenarioEvent*> ordered;
    for (const auto& ev : scenario) {
      validate(ev);
      ordered.push_back(&ev);
    }
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ScenarioEvent* a, const ScenarioEvent* b) { return a->minute_of_day < b->minute_of_day; });

    for (const ScenarioEvent* ev : ordered) {
      clock_ = ev->time_text();
      trace_.append(trace::ScenarioEvent{clock_, ev->device, ev->attribute, ev->value});
      if (ev->device == kClockBinding) {
        trace_.append(trace::StateChanged{ev->device, ev->attribute, ev->value});
        pending_.push_back({ev->device, ev->attribute, ev->value});
      } else {
        set_state(*home_.find(ev->device), ev->attribute, ev->value);
      }
      drain();
    }
    return std::move(trace_);
  }

 private:
  void validate(const ScenarioEvent& ev) const {
    std::optional<SourceSpan> span;
    if (ev.line > 0) span = SourceSpan{ev.line, 1};
    if (ev.device == kClockBinding) {
      if (ev.attribute != kClockAttribute || format_value(ev.value) != ev.time_text())
        throw Error(ErrorKind::MalformedScenario, "clock events must read 'time.clock=<same HH:MM as t>'", span);
      return;
    }
    const Device* d = home_.find(ev.device);
    if (!d) throw Error(ErrorKind::UnknownDeviceInScenario, "no device '" + ev.device + "' in the home", span);
    if (!device_has_attribute(*d, ev.attribute, catalog_))
      throw Error(ErrorKind::MalformedScenario, "device '" + ev.device + "' has no attribute '" + ev.attribute + "'",
                  span);
  }

  void set_state(Device& d, const std::string& attribute, const Value& value) {
    auto [it, inserted] = d.state.try_emplace(attribute, value);
    if (!inserted) {
      if (it->second == value) return;
      it->second = value;
    }
    trace_.append(trace::StateChanged{d.id, attribute, value});
    pending_.push_back({d.id, attribute, value});
  }

  void drain() {
    int deliveries = 0;
    while (!pending_.empty()) {
      AttributeEvent ev = std::move(pending_.front());
      pending_.pop_front();
      for (const auto& app : apps_) {
        for (const auto& sub : app.program().subscriptions) {
          if (!matches(app, sub, ev)) continue;
          if (++deliveries > kMaxCascade) {
            trace_.append(trace::Log{"<runtime>", "event cascade limit reached; dropping pending events"});
            pending_.clear();
            return;
          }
          deliver(app, sub, ev);
        }
      }
    }
  }

  bool matches(const InstalledApp& app, const SubscribeDecl& sub, const AttributeEvent& ev) const {
    if (sub.attribute != ev.attribute) return false;
    if (sub.binding == kClockBinding) {
      if (ev.device != kClockBinding) return false;
    } else {
      const std::string* dev = app.device_for(sub.binding);
      if (!dev || *dev != ev.device) return false;
    }
    return !sub.value_filter || *sub.value_filter == format_value(ev.value);
  }

  std::optional<OperationSig> subscription_op(const InstalledApp& app, const SubscribeDecl& sub) const {
    if (sub.binding == kClockBinding) return std::nullopt;
    return OperationSig{app.program().find_input(sub.binding)->capability, sub.attribute, OperationKind::Attribute};
  }

  void deliver(const InstalledApp& app, const SubscribeDecl& sub, const AttributeEvent& ev) {
    auto op = subscription_op(app, sub);
    if (op && app.monitored()) {
      if (!sub.guard) throw std::logic_error("unguarded subscription in a monitored app");
      if (!check(app, sub.binding, *sub.guard, sub.handler)) return;
    }
    trace_.append(trace::EventDelivered{app.name(), sub.handler, ev.device, ev.attribute, ev.value, op});

    const HandlerDecl* handler = app.program().find_handler(sub.handler);
    Activation act{app, *handler, ev.value};
    try {
      exec(act, handler->body);
    } catch (const HandlerAborted&) {
    }
  }

  struct Activation {
    const InstalledApp& app;
    const HandlerDecl& handler;
    Value event_value;
  };

  /// Monitor check; on Deny records the violation and returns false.
  bool check(const InstalledApp& app, const std::string& binding, const OperationSig& op, const std::string& handler) {
    const Grant* grant = app.grant_for(binding);
    auto d = monitor_check(*grant, op, table_, &trace_);
    if (d.verdict == Verdict::Allow) return true;
    trace_.append(trace::PolicyViolation{app.name(), handler, grant->device, op, d.granted, d.required});
    return false;
  }

  void guard(Activation& act, const std::string& binding, const OperationSig& op) {
    if (!check(act.app, binding, op, act.handler.name)) throw HandlerAborted{};
  }

  void exec(Activation& act, const std::vector<Stmt>& body) {
    for (const auto& s : body) {
      std::visit(
          [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, CommandCall>) {
              if (act.app.monitored()) throw std::logic_error("unguarded command in a monitored app");
              OperationSig op{act.app.program().find_input(n.binding)->capability, n.command, OperationKind::Command};
              command(act, n, op);
            } else if constexpr (std::is_same_v<T, GuardedCommand>) {
              if (act.app.monitored()) guard(act, n.call.binding, n.op);
              command(act, n.call, n.op);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
              if (truthy(eval(act, n.condition))) exec(act, n.then_body);
              else exec(act, n.else_body);
            } else {
              trace_.append(trace::Log{act.app.name(), format_value(eval(act, n.message))});
            }
          },
          s.node);
    }
  }

  void command(Activation& act, const CommandCall& call, const OperationSig& op) {
    std::vector<Value> args;
    for (const auto& a : call.args) args.push_back(eval(act, a));
    const std::string& device_id = *act.app.device_for(call.binding);
    trace_.append(trace::CommandExecuted{act.app.name(), device_id, op, std::move(args)});
    Device& device = *home_.find(device_id);
    if (auto ev = execute_command(device, op)) {
      trace_.append(trace::StateChanged{ev->device, ev->attribute, ev->value});
      pending_.push_back(std::move(*ev));
    }
  }

  Value read(const Activation& act, const AttrRead& r) const {
    if (r.binding == kClockBinding) return clock_;
    const Device& d = *home_.find(*act.app.device_for(r.binding));
    auto it = d.state.find(r.attribute);
    return it == d.state.end() ? Value{std::string{}} : it->second;
  }

  Value eval(Activation& act, const Operand& o) {
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, StringLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, NumberLit>) {
            return n.value;
          } else if constexpr (std::is_same_v<T, EventValue>) {
            return act.event_value;
          } else if constexpr (std::is_same_v<T, AttrRead>) {
            if (act.app.monitored() && n.binding != kClockBinding)
              throw std::logic_error("unguarded attribute read in a monitored app");
            return read(act, n);
          } else {
            if (act.app.monitored()) guard(act, n.read.binding, n.op);
            return read(act, n.read);
          }
        },
        o);
  }

  Value eval(Activation& act, const Expr& e) {
    Value lhs = eval(act, e.lhs);
    if (!e.cmp) return lhs;
    Value rhs = eval(act, e.cmp->rhs);
    return std::string(compare(lhs, e.cmp->op, rhs) ? "true" : "false");
  }

  static bool compare(const Value& a, CompareOp op, const Value& b) {
    int order = 0;
    if (std::holds_alternative<double>(a) && std::holds_alternative<double>(b)) {
      double x = std::get<double>(a), y = std::get<double>(b);
      order = x < y ? -1 : (x > y ? 1 : 0);
    } else {
      std::string x = format_value(a), y = format_value(b);
      order = x.compare(y) < 0 ? -1 : (x.compare(y) > 0 ? 1 : 0);
    }
    switch (op) {
      case CompareOp::Eq: return order == 0;
      case CompareOp::Ne: return order != 0;
      case CompareOp::Lt: return order < 0;
      case CompareOp::Gt: return order > 0;
    }
    return false;
  }

  static bool truthy(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) return *d != 0;
    const auto& s = std::get<std::string>(v);
    return !s.empty() && s != "false";
  }

  std::span<const InstalledApp> apps_;
  HomeConfig home_;
  const RiskTable& table_;
  const Catalog& catalog_;
  Trace trace_;
  std::deque<AttributeEvent> pending_;
  std::string clock_ = "00:00";
};

}  // namespace

Trace run_scenario(std::span<const InstalledApp> apps, const HomeConfig& home, std::span<const ScenarioEvent> scenario,
                   const RiskTable& table, const Catalog& catalog) {
  return Engine(apps, home, table, catalog).run(scenario);
}

}  // namespace tyche
