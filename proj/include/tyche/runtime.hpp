#pragma once

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tyche/home.hpp"
#include "tyche/prompt.hpp"
#include "tyche/rewriter.hpp"
#include "tyche/risk_table.hpp"
#include "tyche/trace.hpp"

namespace tyche {

struct Grant {
  std::string app;
  std::string binding;
  std::string device;
  std::string capability;
  RiskLevel level = RiskLevel::Low;
  friend bool operator==(const Grant&, const Grant&) = default;
};

struct MonitorDecision {
  Verdict verdict = Verdict::Deny;
  OperationSig op;
  RiskLevel granted = RiskLevel::Low;
  RiskLevel required = RiskLevel::Low;
};

/// An app bound to concrete devices. Produced by install() (monitored) or
/// install_unmonitored() (test mode only).
class InstalledApp {
 public:
  const std::string& name() const { return program_->name; }
  const dsl::AppAst& program() const { return *program_; }
  const std::vector<Grant>& grants() const { return grants_; }
  const std::vector<NoticeEntry>& notice() const { return notice_; }
  bool monitored() const { return monitored_; }

  const Grant* grant_for(std::string_view binding) const;
  /// Device id bound to `binding`, or nullptr.
  const std::string* device_for(std::string_view binding) const;

 private:
  friend InstalledApp install(const RewrittenApp&, const HomeConfig&, PromptSource&, Trace*);
  friend InstalledApp install_unmonitored(const dsl::AppAst&, const HomeConfig&, PromptSource&);

  std::shared_ptr<const dsl::AppAst> program_;
  std::vector<Grant> grants_;
  std::vector<NoticeEntry> notice_;
  bool monitored_ = true;
};

/// Announces the requested risk levels (StartupNotice events, when `trace`
/// is given), then asks `prompt` for a device per request. All or nothing:
/// throws NoMatchingDevice or UserDenied and records no grants.
InstalledApp install(const RewrittenApp& app, const HomeConfig& home, PromptSource& prompt,
                     Trace* trace = nullptr);

/// Binds devices for an app that was never rewritten. Its operations run
/// without any reference-monitor checks; used to compare traces in tests.
InstalledApp install_unmonitored(const dsl::AppAst& ast, const HomeConfig& home, PromptSource& prompt);

/// The reference-monitor decision for `op` under `grant`, appended to `trace` when given.
MonitorDecision monitor_check(const Grant& grant, const OperationSig& op, const RiskTable& table,
                              Trace* trace = nullptr);

struct AttributeEvent {
  std::string device;
  std::string attribute;
  Value value;
};

/// Applies the device behavior for `op`. Returns the resulting attribute
/// event, or nullopt when the command changes nothing.
std::optional<AttributeEvent> execute_command(Device& device, const OperationSig& op);

/// Runs scenario events through the installed apps in one deterministic loop.
Trace run_scenario(std::span<const InstalledApp> apps, const HomeConfig& home,
                   std::span<const ScenarioEvent> scenario, const RiskTable& table, const Catalog& catalog);

/// Upper bound on handler deliveries caused by a single scenario event.
inline constexpr int kMaxCascade = 10000;

}  // namespace tyche
