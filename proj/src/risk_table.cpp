#include "tyche/risk_table.hpp"

#include <fstream>
#include <sstream>

namespace tyche {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

constexpr std::string_view kDefaultTable = R"(# Bundled default risk table.
alarm.alarm = medium
alarm.both() = medium
alarm.off() = high
alarm.siren() = medium
alarm.strobe() = medium

contactSensor.contact = low

lock.lock = high
lock.lock() = medium
lock.unlock() = high

powerMeter.power = medium

smokeDetector.smoke = medium

switch.switch = low
switch.off() = high
switch.on() = high
)";

}  // namespace

std::vector<RiskEntry> parse_risk_entries(std::string_view text) {
  std::vector<RiskEntry> entries;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::string_view line = trim(raw);
    if (line.empty()) continue;

    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::ParseError, "expected '<capability>.<operation> = <level>'",
                  SourceSpan{line_no, 1});
    auto op = parse_operation_id(trim(line.substr(0, eq)));
    if (!op)
      throw Error(ErrorKind::ParseError,
                  "malformed operation '" + std::string(trim(line.substr(0, eq))) + "'",
                  SourceSpan{line_no, 1});
    auto level = parse_risk_level(trim(line.substr(eq + 1)));
    if (!level)
      throw Error(ErrorKind::ParseError,
                  "risk level must be low, medium or high, got '" +
                      std::string(trim(line.substr(eq + 1))) + "'",
                  SourceSpan{line_no, static_cast<int>(eq) + 2});
    entries.push_back({std::move(*op), *level, line_no});
  }
  return entries;
}

ValidationReport validate(std::span<const RiskEntry> entries, const Catalog& catalog) {
  ValidationReport report;
  std::set<OperationSig> seen;
  for (const auto& e : entries) {
    if (!catalog.contains(e.op)) {
      report.push_back({ErrorKind::UnknownOperation,
                        "'" + e.op.id() + "' is not an operation of the capability catalog", e.line});
      continue;
    }
    if (!seen.insert(e.op).second)
      report.push_back({ErrorKind::DuplicateEntry, "'" + e.op.id() + "' mapped more than once", e.line});
  }
  for (const auto& op : catalog.all_operations())
    if (!seen.contains(op))
      report.push_back({ErrorKind::MissingOperation, "no risk level for '" + op.id() + "'", 0});
  return report;
}

RiskTable RiskTable::from_entries(std::span<const RiskEntry> entries, const Catalog& catalog) {
  auto report = validate(entries, catalog);
  if (!report.empty()) {
    const auto& v = report.front();
    std::optional<SourceSpan> span;
    if (v.line > 0) span = SourceSpan{v.line, 1};
    throw Error(v.kind, v.message, span);
  }
  RiskTable table;
  for (const auto& e : entries) table.levels_.emplace(e.op, e.level);
  return table;
}

RiskLevel RiskTable::level_of(const OperationSig& op) const {
  auto it = levels_.find(op);
  if (it == levels_.end())
    throw Error(ErrorKind::UnknownOperation, "'" + op.id() + "' is not in the risk table");
  return it->second;
}

bool RiskTable::has_capability(std::string_view capability) const {
  auto it = levels_.lower_bound(OperationSig{std::string(capability), "", OperationKind::Attribute});
  return it != levels_.end() && it->first.capability == capability;
}

RiskTable parse_risk_table(std::string_view text, const Catalog& catalog) {
  auto entries = parse_risk_entries(text);
  return RiskTable::from_entries(entries, catalog);
}

RiskTable load_risk_table(const std::string& path, const Catalog& catalog) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open risk table '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_risk_table(buf.str(), catalog);
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

std::string serialize(const RiskTable& table) {
  std::string out;
  std::string last_cap;
  for (const auto& [op, level] : table.entries()) {
    if (!last_cap.empty() && op.capability != last_cap) out += '\n';
    last_cap = op.capability;
    out += op.id() + " = " + std::string(to_string(level)) + "\n";
  }
  return out;
}

bool allowed(const RiskTable& table, RiskLevel granted, const OperationSig& op) {
  return table.level_of(op) <= granted;
}

std::vector<OperationSig> accessible_ops(const RiskTable& table, std::string_view capability,
                                         RiskLevel granted) {
  if (!table.has_capability(capability))
    throw Error(ErrorKind::UnknownCapability, "unknown capability '" + std::string(capability) + "'");
  std::vector<OperationSig> ops;
  for (const auto& [op, level] : table.entries())
    if (op.capability == capability && level <= granted) ops.push_back(op);
  return ops;  // map order is (capability, kind, name): attributes first
}

std::string_view default_risk_table_text() { return kDefaultTable; }

const RiskTable& default_risk_table() {
  static const RiskTable table = parse_risk_table(kDefaultTable, builtin_catalog());
  return table;
}

RiskTable uniform_risk_table(const Catalog& catalog, RiskLevel level) {
  std::vector<RiskEntry> entries;
  for (auto& op : catalog.all_operations()) entries.push_back({std::move(op), level, 0});
  return RiskTable::from_entries(entries, catalog);
}

}  // namespace tyche
