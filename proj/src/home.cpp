#include "tyche/home.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tyche/ast.hpp"
#include "tyche/error.hpp"

namespace tyche {

namespace {

std::string read_file(const std::string& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + std::string(what) + " '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

bool Device::supports(std::string_view capability) const {
  return std::find(capabilities.begin(), capabilities.end(), capability) != capabilities.end();
}

const Device* HomeConfig::find(std::string_view id) const {
  for (const auto& d : devices)
    if (d.id == id) return &d;
  return nullptr;
}

Device* HomeConfig::find(std::string_view id) {
  for (auto& d : devices)
    if (d.id == id) return &d;
  return nullptr;
}

bool device_has_attribute(const Device& device, std::string_view attribute, const Catalog& catalog) {
  for (const auto& cap : device.capabilities)
    if (const auto* c = catalog.find(cap); c && c->has_attribute(attribute)) return true;
  return false;
}

HomeConfig parse_home(std::string_view json_text, const Catalog& catalog) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("home JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorKind::ParseError, "home file must be a JSON array of devices");

  HomeConfig home;
  std::set<std::string> ids;
  for (const auto& rec : doc) {
    Device d;
    try {
      d.id = rec.at("id").get<std::string>();
      d.label = rec.value("label", d.id);
      for (const auto& c : rec.at("capabilities")) d.capabilities.push_back(c.get<std::string>());
      const auto initial = rec.value("initial_state", nlohmann::json::object());
      for (const auto& [key, val] : initial.items()) {
        if (val.is_number()) d.state[key] = val.get<double>();
        else if (val.is_string()) d.state[key] = val.get<std::string>();
        else throw Error(ErrorKind::ParseError, "device '" + d.id + "': state value of '" + key + "' must be a string or number");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, std::string("home device record: ") + e.what());
    }
    if (d.id == dsl::kClockBinding)
      throw Error(ErrorKind::ParseError, "device id 'time' is reserved for the platform clock");
    if (!ids.insert(d.id).second) throw Error(ErrorKind::ParseError, "device id '" + d.id + "' used twice");
    for (const auto& c : d.capabilities) catalog.at(c);
    for (const auto& [key, _] : d.state)
      if (!device_has_attribute(d, key, catalog))
        throw Error(ErrorKind::ParseError,
                    "device '" + d.id + "': '" + key + "' is not an attribute of its capabilities");
    home.devices.push_back(std::move(d));
  }
  return home;
}

HomeConfig load_home(const std::string& path, const Catalog& catalog) {
  auto text = read_file(path, "home file");
  try {
    return parse_home(text, catalog);
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

std::vector<const Device*> enumerate_devices(const HomeConfig& home, std::string_view capability,
                                             const Catalog& catalog) {
  catalog.at(capability);
  std::vector<const Device*> out;
  for (const auto& d : home.devices)
    if (d.supports(capability)) out.push_back(&d);
  return out;
}

std::string format_clock(int minute_of_day) {
  std::string s = "00:00";
  s[0] = static_cast<char>('0' + minute_of_day / 600);
  s[1] = static_cast<char>('0' + (minute_of_day / 60) % 10);
  s[3] = static_cast<char>('0' + (minute_of_day % 60) / 10);
  s[4] = static_cast<char>('0' + minute_of_day % 10);
  return s;
}

std::string ScenarioEvent::time_text() const { return format_clock(minute_of_day); }

std::vector<ScenarioEvent> parse_scenario(std::string_view text) {
  std::vector<ScenarioEvent> events;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    auto bad = [&](const std::string& why) {
      return Error(ErrorKind::MalformedScenario, why + " (expected 't=<HH:MM> <device>.<attribute>=<value>')",
                   SourceSpan{line_no, 1});
    };
    if (!line.starts_with("t=") || line.size() < 8 || line[4] != ':' || line[7] != ' ')
      throw bad("bad timestamp");
    auto two = [](char a, char b) -> int {
      if (a < '0' || a > '9' || b < '0' || b > '9') return -1;
      return (a - '0') * 10 + (b - '0');
    };
    int hh = two(line[2], line[3]);
    int mm = two(line[5], line[6]);
    if (hh < 0 || hh > 23 || mm < 0 || mm > 59) throw bad("bad timestamp");

    std::string_view rest = trim(line.substr(8));
    auto eq = rest.find('=');
    auto dot = rest.find('.');
    if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq || dot == 0 || dot + 1 == eq)
      throw bad("bad event");
    ScenarioEvent ev;
    ev.minute_of_day = hh * 60 + mm;
    ev.device = std::string(rest.substr(0, dot));
    ev.attribute = std::string(rest.substr(dot + 1, eq - dot - 1));
    ev.value = parse_value(trim(rest.substr(eq + 1)));
    ev.line = line_no;
    events.push_back(std::move(ev));
  }
  return events;
}

std::vector<ScenarioEvent> load_scenario(const std::string& path) {
  auto text = read_file(path, "scenario");
  try {
    return parse_scenario(text);
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

}  // namespace tyche
