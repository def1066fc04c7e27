#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tyche/capability.hpp"
#include "tyche/value.hpp"

namespace tyche {

enum class Verdict { Allow, Deny };
std::string_view to_string(Verdict v);

namespace trace {

struct StartupNotice {
  std::string app;
  std::string capability;
  RiskLevel level;
};

struct ScenarioEvent {
  std::string time;
  std::string device;
  std::string attribute;
  Value value;
};

struct MonitorCheck {
  std::string app;
  std::string binding;
  OperationSig op;
  Verdict verdict;
  RiskLevel granted;
  RiskLevel required;
};

struct CommandExecuted {
  std::string app;
  std::string device;
  OperationSig op;
  std::vector<Value> args;
};

struct StateChanged {
  std::string device;
  std::string attribute;
  Value value;
};

struct EventDelivered {
  std::string app;
  std::string handler;
  std::string device;
  std::string attribute;
  Value value;
  std::optional<OperationSig> op;  // empty for platform clock events
};

struct PolicyViolation {
  std::string app;
  std::string handler;
  std::string device;
  OperationSig op;
  RiskLevel granted;
  RiskLevel required;
};

struct Log {
  std::string app;
  std::string message;
};

}  // namespace trace

enum class TraceKind {
  ScenarioEvent,
  MonitorCheck,
  CommandExecuted,
  StateChanged,
  EventDelivered,
  PolicyViolation,
  Log,
  StartupNotice,
};
std::string_view to_string(TraceKind kind);

using TracePayload = std::variant<trace::ScenarioEvent, trace::MonitorCheck, trace::CommandExecuted,
                                  trace::StateChanged, trace::EventDelivered, trace::PolicyViolation,
                                  trace::Log, trace::StartupNotice>;

struct TraceEvent {
  std::uint64_t seq = 0;
  TracePayload payload;

  TraceKind kind() const { return static_cast<TraceKind>(payload.index()); }
  template <typename T>
  const T* as() const { return std::get_if<T>(&payload); }
};

/// Append-only event log with monotonically increasing sequence numbers (from 1).
class Trace {
 public:
  const TraceEvent& append(TracePayload payload);

  const std::vector<TraceEvent>& events() const { return events_; }
  std::size_t size() const { return events_.size(); }
  bool empty() const { return events_.empty(); }

 private:
  std::vector<TraceEvent> events_;
};

/// `kind payload`, fields in fixed order, without the sequence number.
std::string render_body(const TraceEvent& event);
/// `seq kind payload`
std::string render(const TraceEvent& event);
/// One line per event, newline terminated.
std::string render(const Trace& trace);

}  // namespace tyche
