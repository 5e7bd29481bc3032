#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eas/taxonomy.hpp"

namespace eas {

enum class CodeStatus { Known, UnknownCode, MalformedCode };

std::string_view code_status_label(CodeStatus status);

// One numbered finding from a response block. The parser fills everything
// except the Known/UnknownCode distinction, which needs the taxonomy and is
// refined by the resolver.
struct ErrorFinding {
  int ordinal{1};               // 1-based, consecutive within its record
  std::string code_text;        // verbatim code string
  std::optional<ErrorCode> code;  // absent when code_text is malformed
  std::string span;             // text excerpt the finding targets
  std::string explanation;
  CodeStatus code_status{CodeStatus::Known};
  bool span_in_original{true};  // false = SpanNotInOT warning

  bool operator==(const ErrorFinding&) const = default;
};

struct AnalysisRecord {
  std::string original_text;   // the OT payload
  std::string corrected_text;
  std::vector<ErrorFinding> findings;
  bool no_errors_declared{false};

  bool operator==(const AnalysisRecord&) const = default;
};

struct ResponseFormatError : std::runtime_error {
  enum class Kind {
    MissingCorrectedLine,
    NonConsecutiveOrdinals,
    EmptyRecord,
    GarbageLine,
    OrdinalMismatch,
    TooFewFields,
  };
  Kind kind;
  int line_no;  // 1-based line in the raw text, 0 when unknown

  ResponseFormatError(Kind kind_, int line_no_, const std::string& message)
      : std::runtime_error(message), kind(kind_), line_no(line_no_) {}
};

// Splits raw text into records at each "OT:" line. Every record needs one
// "Corrected:" line followed by either "[No errors]" or numbered
// "Nth Error & Reason:" lines with consecutive ordinals from 1. Lines
// before the first "OT:" (reasoning preambles) are discarded; blank lines
// are ignored. Throws ResponseFormatError.
std::vector<AnalysisRecord> parse_response(const std::string& raw);

// Parses a single "Nth Error & Reason: code, span, explanation" line. The
// payload splits at the first two commas; everything after the second comma
// is the explanation. A malformed code is captured in code_status, not
// fatal. Throws on OrdinalMismatch and TooFewFields.
ErrorFinding parse_finding_line(const std::string& line, int expected_ordinal);

// "1st", "2nd", "3rd", "4th", ... "21st", ...
std::string render_ordinal(int n);

// Inverse of parse_finding_line for well-formed sources:
// "<ordinal> Error & Reason: <code>, <span>, <explanation>".
std::string render_finding_line(const ErrorFinding& finding);

}  // namespace eas
