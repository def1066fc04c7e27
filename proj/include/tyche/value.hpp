#pragma once

#include <string>
#include <string_view>
#include <variant>

namespace tyche {

/// Device attribute and expression value: a number or a string.
using Value = std::variant<double, std::string>;

/// Shortest round-trip spelling for numbers ("1200", "0.5"); strings verbatim.
std::string format_value(const Value& v);
std::string format_number(double d);

/// A number when the whole text parses as one, otherwise the text itself.
Value parse_value(std::string_view text);

}  // namespace tyche
