#include "tyche/capability.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tyche/error.hpp"

namespace tyche {

std::string_view to_string(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low: return "low";
    case RiskLevel::Medium: return "medium";
    case RiskLevel::High: return "high";
  }
  return "?";
}

std::string_view to_upper_string(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low: return "LOW";
    case RiskLevel::Medium: return "MEDIUM";
    case RiskLevel::High: return "HIGH";
  }
  return "?";
}

std::string_view request_suffix(RiskLevel level) {
  switch (level) {
    case RiskLevel::Low: return "lowRisk";
    case RiskLevel::Medium: return "medRisk";
    case RiskLevel::High: return "highRisk";
  }
  return "?";
}

std::optional<RiskLevel> parse_risk_level(std::string_view text) {
  if (text == "low") return RiskLevel::Low;
  if (text == "medium") return RiskLevel::Medium;
  if (text == "high") return RiskLevel::High;
  return std::nullopt;
}

std::string OperationSig::id() const { return capability + "." + display_name(); }

std::string OperationSig::display_name() const { return is_command() ? name + "()" : name; }

namespace {

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(s.front())) return false;
  for (char c : s)
    if (!alpha(c) && !digit(c)) return false;
  return true;
}

}  // namespace

std::optional<OperationSig> parse_operation_id(std::string_view id) {
  auto dot = id.find('.');
  if (dot == std::string_view::npos) return std::nullopt;
  std::string_view cap = id.substr(0, dot);
  std::string_view rest = id.substr(dot + 1);
  OperationKind kind = OperationKind::Attribute;
  if (rest.ends_with("()")) {
    kind = OperationKind::Command;
    rest.remove_suffix(2);
  }
  if (!is_identifier(cap) || !is_identifier(rest)) return std::nullopt;
  return OperationSig{std::string(cap), std::string(rest), kind};
}

std::vector<OperationSig> Capability::operations() const {
  std::vector<OperationSig> ops;
  for (const auto& a : attributes) ops.push_back({name, a, OperationKind::Attribute});
  for (const auto& c : commands) ops.push_back({name, c, OperationKind::Command});
  return ops;
}

Catalog::Catalog(std::vector<Capability> capabilities) {
  for (auto& cap : capabilities) {
    std::string key = cap.name;
    if (!caps_.emplace(key, std::move(cap)).second)
      throw Error(ErrorKind::DuplicateEntry, "capability '" + key + "' defined twice in catalog");
  }
}

const Capability* Catalog::find(std::string_view name) const {
  auto it = caps_.find(name);
  return it == caps_.end() ? nullptr : &it->second;
}

const Capability& Catalog::at(std::string_view name) const {
  if (const auto* cap = find(name)) return *cap;
  throw Error(ErrorKind::UnknownCapability, "unknown capability '" + std::string(name) + "'");
}

bool Catalog::contains(const OperationSig& op) const {
  const auto* cap = find(op.capability);
  if (!cap) return false;
  return op.is_command() ? cap->has_command(op.name) : cap->has_attribute(op.name);
}

std::vector<OperationSig> Catalog::all_operations() const {
  std::vector<OperationSig> ops;
  for (const auto& [_, cap] : caps_) {
    auto more = cap.operations();
    ops.insert(ops.end(), more.begin(), more.end());
  }
  return ops;
}

Catalog parse_catalog(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("catalog JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "catalog must be a JSON array");

  std::vector<Capability> caps;
  for (const auto& rec : doc) {
    try {
      Capability cap;
      cap.name = rec.at("name").get<std::string>();
      const auto commands = rec.value("commands", nlohmann::json::array());
      const auto attributes = rec.value("attributes", nlohmann::json::array());
      for (const auto& c : commands) cap.commands.insert(c.get<std::string>());
      for (const auto& a : attributes) cap.attributes.insert(a.get<std::string>());
      if (!is_identifier(cap.name))
        throw Error(ErrorKind::ParseError, "invalid capability name '" + cap.name + "'");
      caps.push_back(std::move(cap));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("catalog record: ") + e.what());
    }
  }
  return Catalog(std::move(caps));
}

Catalog load_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open catalog '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_catalog(buf.str());
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

const Catalog& builtin_catalog() {
  static const Catalog catalog({
      {"alarm", {"both", "off", "siren", "strobe"}, {"alarm"}},
      {"contactSensor", {}, {"contact"}},
      {"lock", {"lock", "unlock"}, {"lock"}},
      {"powerMeter", {}, {"power"}},
      {"smokeDetector", {}, {"smoke"}},
      {"switch", {"off", "on"}, {"switch"}},
  });
  return catalog;
}

}  // namespace tyche
