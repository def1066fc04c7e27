#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "tyche/ast.hpp"
#include "tyche/home.hpp"

namespace tyche {

struct InstallRequest {
  std::string app;
  dsl::PermissionRequest request;
};

/// Answers install-time permission prompts.
class PromptSource {
 public:
  virtual ~PromptSource() = default;
  /// Id of the chosen device among `candidates`, or nullopt to deny.
  virtual std::optional<std::string> choose(const InstallRequest& request,
                                            std::span<const Device* const> candidates) = 0;
};

/// Accepts every request with the first candidate device.
class AcceptAllPrompt final : public PromptSource {
 public:
  std::optional<std::string> choose(const InstallRequest&, std::span<const Device* const> candidates) override;
};

/// Answers from an answers file, one line per binding:
///   <binding> = <deviceId> | accept | deny
/// `accept` picks the first candidate. A key may be qualified as
/// `<App>.<binding>`, which wins over the bare binding. Bindings without a
/// line are denied.
class ScriptedPrompt final : public PromptSource {
 public:
  explicit ScriptedPrompt(std::map<std::string, std::string> answers) : answers_(std::move(answers)) {}

  static ScriptedPrompt parse(std::string_view text);
  static ScriptedPrompt load(const std::string& path);

  std::optional<std::string> choose(const InstallRequest& request,
                                    std::span<const Device* const> candidates) override;

 private:
  std::map<std::string, std::string> answers_;
};

/// Prints the request and the numbered candidates, reads a device number, id or "deny".
class ConsolePrompt final : public PromptSource {
 public:
  ConsolePrompt(std::istream& in, std::ostream& out) : in_(in), out_(out) {}

  std::optional<std::string> choose(const InstallRequest& request,
                                    std::span<const Device* const> candidates) override;

 private:
  std::istream& in_;
  std::ostream& out_;
};

/// The install prompt: app, capability, upper-case level and the numbered candidates.
std::string prompt_line(const InstallRequest& request, std::span<const Device* const> candidates);

}  // namespace tyche
