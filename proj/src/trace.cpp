#include "tyche/trace.hpp"

namespace tyche {

std::string_view to_string(Verdict v) { return v == Verdict::Allow ? "Allow" : "Deny"; }

std::string_view to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::ScenarioEvent: return "ScenarioEvent";
    case TraceKind::MonitorCheck: return "MonitorCheck";
    case TraceKind::CommandExecuted: return "CommandExecuted";
    case TraceKind::StateChanged: return "StateChanged";
    case TraceKind::EventDelivered: return "EventDelivered";
    case TraceKind::PolicyViolation: return "PolicyViolation";
    case TraceKind::Log: return "Log";
    case TraceKind::StartupNotice: return "StartupNotice";
  }
  return "?";
}

const TraceEvent& Trace::append(TracePayload payload) {
  events_.push_back({events_.size() + 1, std::move(payload)});
  return events_.back();
}

namespace {

std::string field_text(std::string_view s) {
  bool plain = !s.empty();
  for (char c : s)
    if (c == ' ' || c == '"' || c == '=' || c == '\\' || c == '\t' || c == '\n') plain = false;
  if (plain) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  return out + "\"";
}

struct Fields {
  std::string out;
  Fields& add(std::string_view key, std::string_view value) {
    out += ' ';
    out += key;
    out += '=';
    out += field_text(value);
    return *this;
  }
};

}  // namespace

std::string render_body(const TraceEvent& event) {
  Fields f;
  f.out = std::string(to_string(event.kind()));
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, trace::StartupNotice>) {
          f.add("app", p.app).add("capability", p.capability).add("level", to_upper_string(p.level));
        } else if constexpr (std::is_same_v<T, trace::ScenarioEvent>) {
          f.add("t", p.time).add("device", p.device).add("attribute", p.attribute).add("value", format_value(p.value));
        } else if constexpr (std::is_same_v<T, trace::MonitorCheck>) {
          f.add("app", p.app).add("binding", p.binding).add("op", p.op.id()).add("verdict", to_string(p.verdict));
          f.add("granted", to_upper_string(p.granted)).add("required", to_upper_string(p.required));
        } else if constexpr (std::is_same_v<T, trace::CommandExecuted>) {
          f.add("app", p.app).add("device", p.device).add("op", p.op.id());
          if (!p.args.empty()) {
            std::string args;
            for (std::size_t i = 0; i < p.args.size(); ++i) {
              if (i) args += ',';
              args += format_value(p.args[i]);
            }
            f.add("args", args);
          }
        } else if constexpr (std::is_same_v<T, trace::StateChanged>) {
          f.add("device", p.device).add("attribute", p.attribute).add("value", format_value(p.value));
        } else if constexpr (std::is_same_v<T, trace::EventDelivered>) {
          f.add("app", p.app).add("handler", p.handler).add("device", p.device).add("attribute", p.attribute);
          f.add("value", format_value(p.value));
          if (p.op) f.add("op", p.op->id());
        } else if constexpr (std::is_same_v<T, trace::PolicyViolation>) {
          f.add("app", p.app).add("handler", p.handler).add("device", p.device).add("op", p.op.id());
          f.add("granted", to_upper_string(p.granted)).add("required", to_upper_string(p.required));
        } else {
          f.add("app", p.app).add("message", p.message);
        }
      },
      event.payload);
  return std::move(f.out);
}

std::string render(const TraceEvent& event) { return std::to_string(event.seq) + " " + render_body(event); }

std::string render(const Trace& trace) {
  std::string out;
  for (const auto& e : trace.events()) {
    out += render(e);
    out += '\n';
  }
  return out;
}

}  // namespace tyche
