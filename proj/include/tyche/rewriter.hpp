#pragma once

#include <vector>

#include "tyche/ast.hpp"
#include "tyche/risk_table.hpp"

namespace tyche {

struct NoticeEntry {
  std::string capability;
  RiskLevel level = RiskLevel::Low;
  friend bool operator==(const NoticeEntry&, const NoticeEntry&) = default;
};

/// An app whose every device command, attribute read and device subscription
/// is routed through the reference monitor. Only rewrite() produces one.
class RewrittenApp {
 public:
  const dsl::AppAst& ast() const { return ast_; }
  const std::vector<dsl::PermissionRequest>& requests() const { return requests_; }
  /// Risk levels announced to the user at install and at app start.
  const std::vector<NoticeEntry>& startup_notice() const { return notice_; }

 private:
  friend RewrittenApp rewrite(const dsl::AppAst&, const std::vector<dsl::PermissionRequest>&,
                              const RiskTable&);
  dsl::AppAst ast_;
  std::vector<dsl::PermissionRequest> requests_;
  std::vector<NoticeEntry> notice_;
};

/// Guards every device operation of a checked AST. Throws
/// UnknownOperationOnCapability when a call or read names an operation the
/// bound capability does not have.
RewrittenApp rewrite(const dsl::AppAst& ast, const std::vector<dsl::PermissionRequest>& requests,
                     const RiskTable& table);

struct GuardCounts {
  int commands = 0;
  int attribute_reads = 0;
  int subscriptions = 0;
  friend bool operator==(const GuardCounts&, const GuardCounts&) = default;
};

GuardCounts guard_count(const RewrittenApp& app);
GuardCounts guard_count(const dsl::AppAst& ast);

/// Device commands, device attribute reads and device subscriptions that are
/// not guarded. Zero for every rewritten app.
int unguarded_count(const dsl::AppAst& ast);

}  // namespace tyche
