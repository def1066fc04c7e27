#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tyche/capability.hpp"
#include "tyche/error.hpp"

namespace tyche {

/// One `<capability>.<operation> = <level>` line as read from a risk-table file.
struct RiskEntry {
  OperationSig op;
  RiskLevel level = RiskLevel::Low;
  int line = 0;  // 0 when not read from a file
};

struct Violation {
  ErrorKind kind;
  std::string message;
  int line = 0;
};

using ValidationReport = std::vector<Violation>;

/// Checks raw entries against the catalog: every entry names a cataloged
/// operation, appears once, and every cataloged operation has an entry.
ValidationReport validate(std::span<const RiskEntry> entries, const Catalog& catalog);

/// Validated mapping from operation to risk level. Immutable once built.
class RiskTable {
 public:
  /// Throws the first violation reported by validate().
  static RiskTable from_entries(std::span<const RiskEntry> entries, const Catalog& catalog);

  RiskLevel level_of(const OperationSig& op) const;  // throws UnknownOperation
  bool contains(const OperationSig& op) const { return levels_.contains(op); }
  bool has_capability(std::string_view capability) const;

  const std::map<OperationSig, RiskLevel>& entries() const { return levels_; }

  friend bool operator==(const RiskTable&, const RiskTable&) = default;

 private:
  std::map<OperationSig, RiskLevel> levels_;
};

/// Parses risk-table text. Only syntax is checked here; see validate().
std::vector<RiskEntry> parse_risk_entries(std::string_view text);

RiskTable parse_risk_table(std::string_view text, const Catalog& catalog);
RiskTable load_risk_table(const std::string& path, const Catalog& catalog);

/// Canonical file form, one line per operation in catalog order.
std::string serialize(const RiskTable& table);

bool allowed(const RiskTable& table, RiskLevel granted, const OperationSig& op);

/// Operations of `capability` permitted at `granted`, attributes first then
/// commands, each lexicographic.
std::vector<OperationSig> accessible_ops(const RiskTable& table, std::string_view capability,
                                         RiskLevel granted);

/// Text of the bundled default table.
std::string_view default_risk_table_text();
const RiskTable& default_risk_table();

/// Every cataloged operation mapped to `level`.
RiskTable uniform_risk_table(const Catalog& catalog, RiskLevel level);

}  // namespace tyche
