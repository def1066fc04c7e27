#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace tyche {

/// Three-level ordered risk scale. Grants are cumulative: a grant at level g
/// confers every operation whose level is <= g.
enum class RiskLevel { Low = 0, Medium = 1, High = 2 };

inline constexpr RiskLevel kAllRiskLevels[] = {RiskLevel::Low, RiskLevel::Medium, RiskLevel::High};

/// "low" / "medium" / "high"
std::string_view to_string(RiskLevel level);
/// "LOW" / "MEDIUM" / "HIGH", as shown in prompts and traces.
std::string_view to_upper_string(RiskLevel level);
/// Source-level request modifier: lowRisk / medRisk / highRisk.
std::string_view request_suffix(RiskLevel level);
std::optional<RiskLevel> parse_risk_level(std::string_view text);

// Attribute sorts before Command so that ordered sets list attributes first.
enum class OperationKind { Attribute = 0, Command = 1 };

struct OperationSig {
  std::string capability;
  std::string name;
  OperationKind kind = OperationKind::Command;

  bool is_command() const { return kind == OperationKind::Command; }
  /// "lock.unlock()" for commands, "lock.lock" for attributes.
  std::string id() const;
  /// "unlock()" / "lock"
  std::string display_name() const;

  friend auto operator<=>(const OperationSig& a, const OperationSig& b) {
    if (auto c = a.capability <=> b.capability; c != 0) return c;
    if (auto c = a.kind <=> b.kind; c != 0) return c;
    return a.name <=> b.name;
  }
  friend bool operator==(const OperationSig&, const OperationSig&) = default;
};

/// Parses an operation id of the form `<capability>.<name>` or `<capability>.<name>()`.
std::optional<OperationSig> parse_operation_id(std::string_view id);

struct Capability {
  std::string name;
  std::set<std::string> commands;
  std::set<std::string> attributes;

  bool has_command(std::string_view n) const { return commands.contains(std::string(n)); }
  bool has_attribute(std::string_view n) const { return attributes.contains(std::string(n)); }
  /// Attributes first, then commands, each in lexicographic order.
  std::vector<OperationSig> operations() const;
};

/// The set of capabilities known to the platform, keyed by name.
class Catalog {
 public:
  Catalog() = default;
  explicit Catalog(std::vector<Capability> capabilities);

  const Capability* find(std::string_view name) const;
  const Capability& at(std::string_view name) const;  // throws UnknownCapability
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  bool contains(const OperationSig& op) const;

  const std::map<std::string, Capability, std::less<>>& capabilities() const { return caps_; }
  std::vector<OperationSig> all_operations() const;

 private:
  std::map<std::string, Capability, std::less<>> caps_;
};

/// Parses the JSON catalog format: an array of {name, commands:[...], attributes:[...]}.
Catalog parse_catalog(std::string_view json_text);
Catalog load_catalog(const std::string& path);

/// The six capabilities used by the bundled case-study apps.
const Catalog& builtin_catalog();

}  // namespace tyche
