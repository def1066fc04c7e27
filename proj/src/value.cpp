#include "tyche/value.hpp"

#include <charconv>
#include <cmath>

namespace tyche {

std::string format_number(double d) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

std::string format_value(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return format_number(*d);
  return std::get<std::string>(v);
}

Value parse_value(std::string_view text) {
  if (text.empty()) return std::string{};
  double d = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
  if (ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(d)) return d;
  return std::string(text);
}

}  // namespace tyche
