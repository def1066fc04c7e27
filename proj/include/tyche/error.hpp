#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tyche {

/// 1-based position in a source or data file.
struct SourceSpan {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

enum class ErrorKind {
  // risk table / catalog
  ParseError,
  UnknownOperation,
  MissingOperation,
  DuplicateEntry,
  UnknownCapability,
  // DSL frontend and rewriter
  LexError,
  SyntaxError,
  UnresolvedBinding,
  UnknownHandler,
  DuplicateBinding,
  DuplicateHandler,
  MissingAnnotation,
  UnknownOperationOnCapability,
  // runtime
  NoMatchingDevice,
  UserDenied,
  CapabilityMismatch,
  NotACommand,
  UnknownDeviceInScenario,
  MalformedScenario,
  // survey analysis
  UnknownOperationId,
  RatingOutOfRange,
  UnratedOperation,
  DegenerateInput,
  ConstantVector,
  LengthMismatch,
  CoverageGap,
  NoHighRiskBaseline,
  // plumbing
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Broad class of an error; the CLI maps each category to an exit status.
enum class ErrorCategory { Compile, Denial, Data };

ErrorCategory category_of(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message, std::optional<SourceSpan> span = std::nullopt,
        std::string file = {});

  ErrorKind kind() const noexcept { return kind_; }
  const std::optional<SourceSpan>& span() const noexcept { return span_; }
  const std::string& file() const noexcept { return file_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same error, attributed to `file` (keeps an existing attribution).
  Error in_file(std::string file) const;

 private:
  static std::string render(ErrorKind kind, const std::string& message,
                            const std::optional<SourceSpan>& span, const std::string& file);

  ErrorKind kind_;
  std::optional<SourceSpan> span_;
  std::string file_;
  std::string detail_;
};

}  // namespace tyche
