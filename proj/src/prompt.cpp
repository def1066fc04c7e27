#include "tyche/prompt.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "tyche/error.hpp"

namespace tyche {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::optional<std::string> AcceptAllPrompt::choose(const InstallRequest&,
                                                   std::span<const Device* const> candidates) {
  if (candidates.empty()) return std::nullopt;
  return candidates.front()->id;
}

ScriptedPrompt ScriptedPrompt::parse(std::string_view text) {
  std::map<std::string, std::string> answers;
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
      throw Error(ErrorKind::ParseError, "expected '<binding> = <deviceId>|accept|deny'", SourceSpan{line_no, 1});
    std::string binding(trim(line.substr(0, eq)));
    std::string answer(trim(line.substr(eq + 1)));
    if (binding.empty() || answer.empty())
      throw Error(ErrorKind::ParseError, "expected '<binding> = <deviceId>|accept|deny'", SourceSpan{line_no, 1});
    if (!answers.emplace(binding, answer).second)
      throw Error(ErrorKind::ParseError, "binding '" + binding + "' answered twice", SourceSpan{line_no, 1});
  }
  return ScriptedPrompt(std::move(answers));
}

ScriptedPrompt ScriptedPrompt::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open answers file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const Error& e) {
    throw e.in_file(path);
  }
}

std::optional<std::string> ScriptedPrompt::choose(const InstallRequest& request,
                                                  std::span<const Device* const> candidates) {
  auto it = answers_.find(request.app + "." + request.request.binding);
  if (it == answers_.end()) it = answers_.find(request.request.binding);
  if (it == answers_.end() || it->second == "deny") return std::nullopt;
  if (it->second == "accept") return candidates.empty() ? std::nullopt : std::optional(candidates.front()->id);
  return it->second;
}

std::string prompt_line(const InstallRequest& request, std::span<const Device* const> candidates) {
  std::string list;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (i) list += ", ";
    list += std::to_string(i + 1) + ":" + candidates[i]->id;
  }
  return "App " + request.app + " requests " + request.request.capability + " at " +
         std::string(to_upper_string(request.request.level)) + " risk — select device [" + list + "] / deny";
}

std::optional<std::string> ConsolePrompt::choose(const InstallRequest& request,
                                                 std::span<const Device* const> candidates) {
  for (;;) {
    out_ << prompt_line(request, candidates) << "\n> " << std::flush;
    std::string answer;
    if (!std::getline(in_, answer)) return std::nullopt;
    std::string_view a = trim(answer);
    if (a == "deny") return std::nullopt;
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (a == std::to_string(i + 1) || a == candidates[i]->id) return candidates[i]->id;
    out_ << "unrecognized answer '" << a << "'\n";
  }
}

}  // namespace tyche
