#include "tyche/error.hpp"

namespace tyche {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownOperation: return "UnknownOperation";
    case ErrorKind::MissingOperation: return "MissingOperation";
    case ErrorKind::DuplicateEntry: return "DuplicateEntry";
    case ErrorKind::UnknownCapability: return "UnknownCapability";
    case ErrorKind::LexError: return "LexError";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnresolvedBinding: return "UnresolvedBinding";
    case ErrorKind::UnknownHandler: return "UnknownHandler";
    case ErrorKind::DuplicateBinding: return "DuplicateBinding";
    case ErrorKind::DuplicateHandler: return "DuplicateHandler";
    case ErrorKind::MissingAnnotation: return "MissingAnnotation";
    case ErrorKind::UnknownOperationOnCapability: return "UnknownOperationOnCapability";
    case ErrorKind::NoMatchingDevice: return "NoMatchingDevice";
    case ErrorKind::UserDenied: return "UserDenied";
    case ErrorKind::CapabilityMismatch: return "CapabilityMismatch";
    case ErrorKind::NotACommand: return "NotACommand";
    case ErrorKind::UnknownDeviceInScenario: return "UnknownDeviceInScenario";
    case ErrorKind::MalformedScenario: return "MalformedScenario";
    case ErrorKind::UnknownOperationId: return "UnknownOperationId";
    case ErrorKind::RatingOutOfRange: return "RatingOutOfRange";
    case ErrorKind::UnratedOperation: return "UnratedOperation";
    case ErrorKind::DegenerateInput: return "DegenerateInput";
    case ErrorKind::ConstantVector: return "ConstantVector";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::CoverageGap: return "CoverageGap";
    case ErrorKind::NoHighRiskBaseline: return "NoHighRiskBaseline";
    case ErrorKind::IoError: return "IoError";
  }
  return "Error";
}

ErrorCategory category_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LexError:
    case ErrorKind::SyntaxError:
    case ErrorKind::UnresolvedBinding:
    case ErrorKind::UnknownHandler:
    case ErrorKind::DuplicateBinding:
    case ErrorKind::DuplicateHandler:
    case ErrorKind::MissingAnnotation:
    case ErrorKind::UnknownOperationOnCapability:
      return ErrorCategory::Compile;
    case ErrorKind::NoMatchingDevice:
    case ErrorKind::UserDenied:
      return ErrorCategory::Denial;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorKind kind, std::string message, std::optional<SourceSpan> span, std::string file)
    : std::runtime_error(render(kind, message, span, file)),
      kind_(kind),
      span_(span),
      file_(std::move(file)),
      detail_(std::move(message)) {}

Error Error::in_file(std::string file) const {
  if (!file_.empty()) return *this;
  return Error(kind_, detail_, span_, std::move(file));
}

std::string Error::render(ErrorKind kind, const std::string& message,
                          const std::optional<SourceSpan>& span, const std::string& file) {
  std::string out;
  if (!file.empty()) out += file + ":";
  if (span) out += std::to_string(span->line) + ":" + std::to_string(span->column) + ":";
  if (!out.empty()) out += " ";
  out += std::string(to_string(kind)) + ": " + message;
  if (span) out += " (line " + std::to_string(span->line) + ")";
  return out;
}

}  // namespace tyche
