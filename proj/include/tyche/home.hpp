#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tyche/capability.hpp"
#include "tyche/value.hpp"

namespace tyche {

struct Device {
  std::string id;
  std::string label;
  std::vector<std::string> capabilities;
  std::map<std::string, Value> state;

  bool supports(std::string_view capability) const;
};

/// The simulated home: devices in file order.
struct HomeConfig {
  std::vector<Device> devices;

  const Device* find(std::string_view id) const;
  Device* find(std::string_view id);
};

/// Parses the home JSON format: an array of
/// {id, label, capabilities:[...], initial_state:{...}}.
HomeConfig parse_home(std::string_view json_text, const Catalog& catalog);
HomeConfig load_home(const std::string& path, const Catalog& catalog);

/// Devices supporting `capability`, in home-file order.
std::vector<const Device*> enumerate_devices(const HomeConfig& home, std::string_view capability,
                                             const Catalog& catalog);

/// Whether `attribute` belongs to one of the device's capabilities.
bool device_has_attribute(const Device& device, std::string_view attribute, const Catalog& catalog);

/// One line of a scenario file: `t=<HH:MM> <deviceId>.<attribute>=<value>`.
struct ScenarioEvent {
  int minute_of_day = 0;
  std::string device;
  std::string attribute;
  Value value;
  int line = 0;

  std::string time_text() const;
};

std::vector<ScenarioEvent> parse_scenario(std::string_view text);
std::vector<ScenarioEvent> load_scenario(const std::string& path);

std::string format_clock(int minute_of_day);

}  // namespace tyche
