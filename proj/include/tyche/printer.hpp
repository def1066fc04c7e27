#pragma once

#include <string>

#include "tyche/ast.hpp"

namespace tyche::dsl {

struct PrintOptions {
  /// Prefix monitored nodes with `@guard(<capability>.<op>)`. The result is
  /// for inspection only and does not parse.
  bool show_guards = false;
};

/// Canonical source form: inputs, then subscriptions, then handlers, 2-space indent.
std::string pretty_print(const AppAst& ast, PrintOptions options = {});

}  // namespace tyche::dsl
