#include "eas/parser.hpp"

#include <cctype>
#include <sstream>

namespace eas {

std::string_view code_status_label(CodeStatus status) {
  switch (status) {
    case CodeStatus::Known: return "known";
    case CodeStatus::UnknownCode: return "unknown_code";
    case CodeStatus::MalformedCode: return "malformed_code";
  }
  return "";
}

std::string render_ordinal(int n) {
  const int mod100 = n % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (n % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(n) + suffix;
}

namespace {

constexpr std::string_view kOtPrefix = "OT:";
constexpr std::string_view kCorrectedPrefix = "Corrected:";
constexpr std::string_view kNoErrors = "[No errors]";
constexpr std::string_view kFindingMarker = " Error & Reason:";

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

std::string_view strip(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size() && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  std::size_t end = s.size();
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

// Ordinal prefix "12th" -> 12; accepts st/nd/rd/th up to 99.
std::optional<int> parse_ordinal_prefix(std::string_view line, std::size_t& consumed) {
  std::size_t i = 0;
  while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i > 2) return std::nullopt;
  if (i + 2 > line.size()) return std::nullopt;
  std::string_view suffix = line.substr(i, 2);
  if (suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") {
    return std::nullopt;
  }
  consumed = i + 2;
  int value = 0;
  for (std::size_t k = 0; k < i; ++k) value = value * 10 + (line[k] - '0');
  return value;
}

bool is_finding_line(std::string_view line) {
  std::size_t consumed = 0;
  if (!parse_ordinal_prefix(line, consumed)) return false;
  return starts_with(line.substr(consumed), kFindingMarker);
}

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t end = raw.find('\n', pos);
    if (end == std::string::npos) end = raw.size();
    std::string line = raw.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    if (end == raw.size()) break;
    pos = end + 1;
  }
  return lines;
}

}  // namespace

ErrorFinding parse_finding_line(const std::string& line, int expected_ordinal) {
  std::string_view view = strip(line);
  std::size_t consumed = 0;
  auto ordinal = parse_ordinal_prefix(view, consumed);
  if (!ordinal || !starts_with(view.substr(consumed), kFindingMarker)) {
    throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, 0,
                              "not a finding line: \"" + line + "\"");
  }
  if (*ordinal != expected_ordinal) {
    throw ResponseFormatError(
        ResponseFormatError::Kind::OrdinalMismatch, 0,
        "expected ordinal " + std::to_string(expected_ordinal) + ", found " +
            std::to_string(*ordinal));
  }

  std::string_view payload = view.substr(consumed + kFindingMarker.size());
  std::size_t first_comma = payload.find(',');
  std::size_t second_comma =
      first_comma == std::string_view::npos ? std::string_view::npos
                                            : payload.find(',', first_comma + 1);
  if (second_comma == std::string_view::npos) {
    throw ResponseFormatError(ResponseFormatError::Kind::TooFewFields, 0,
                              "finding needs code, span and explanation: \"" + line + "\"");
  }

  ErrorFinding finding;
  finding.ordinal = *ordinal;
  finding.code_text = std::string(strip(payload.substr(0, first_comma)));
  finding.span =
      std::string(strip(payload.substr(first_comma + 1, second_comma - first_comma - 1)));
  finding.explanation = std::string(strip(payload.substr(second_comma + 1)));
  if (finding.code_text.empty() || finding.span.empty() || finding.explanation.empty()) {
    throw ResponseFormatError(ResponseFormatError::Kind::TooFewFields, 0,
                              "finding has an empty field: \"" + line + "\"");
  }
  try {
    finding.code = parse_code(finding.code_text);
    finding.code_status = CodeStatus::Known;  // Known vs UnknownCode decided later
  } catch (const MalformedCode&) {
    finding.code = std::nullopt;
    finding.code_status = CodeStatus::MalformedCode;
  }
  return finding;
}

std::vector<AnalysisRecord> parse_response(const std::string& raw) {
  const std::vector<std::string> lines = split_lines(raw);

  std::vector<AnalysisRecord> records;
  AnalysisRecord current;
  bool in_record = false;
  bool has_corrected = false;
  bool has_no_errors = false;
  int ot_line_no = 0;

  const auto finish_record = [&](int line_no) {
    if (!in_record) return;
    if (!has_corrected) {
      throw ResponseFormatError(ResponseFormatError::Kind::MissingCorrectedLine, ot_line_no,
                                "record \"" + current.original_text +
                                    "\" has no Corrected: line");
    }
    if (!has_no_errors && current.findings.empty()) {
      throw ResponseFormatError(ResponseFormatError::Kind::EmptyRecord, line_no,
                                "record \"" + current.original_text +
                                    "\" has neither findings nor [No errors]");
    }
    current.no_errors_declared = has_no_errors;
    for (auto& finding : current.findings) {
      finding.span_in_original = current.original_text.find(finding.span) != std::string::npos;
    }
    records.push_back(std::move(current));
    current = AnalysisRecord{};
    in_record = false;
    has_corrected = false;
    has_no_errors = false;
  };

  int line_no = 0;
  for (const std::string& line : lines) {
    ++line_no;
    std::string_view view = strip(line);
    if (view.empty()) continue;

    if (starts_with(view, kOtPrefix)) {
      finish_record(line_no);
      std::string_view payload = strip(view.substr(kOtPrefix.size()));
      if (payload.empty()) {
        throw ResponseFormatError(ResponseFormatError::Kind::EmptyRecord, line_no,
                                  "OT line with empty payload");
      }
      in_record = true;
      ot_line_no = line_no;
      current.original_text = std::string(payload);
      continue;
    }
    if (!in_record) continue;  // reasoning preamble before the first OT

    if (starts_with(view, kCorrectedPrefix)) {
      if (has_corrected) {
        throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, line_no,
                                  "second Corrected: line in one record");
      }
      std::string_view payload = strip(view.substr(kCorrectedPrefix.size()));
      if (payload.empty()) {
        throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, line_no,
                                  "Corrected: line with empty payload");
      }
      has_corrected = true;
      current.corrected_text = std::string(payload);
      continue;
    }
    if (view == kNoErrors) {
      if (!has_corrected) {
        throw ResponseFormatError(ResponseFormatError::Kind::MissingCorrectedLine, line_no,
                                  "[No errors] before Corrected: line");
      }
      if (!current.findings.empty() || has_no_errors) {
        throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, line_no,
                                  "[No errors] conflicts with findings");
      }
      has_no_errors = true;
      continue;
    }
    if (is_finding_line(view)) {
      if (!has_corrected) {
        throw ResponseFormatError(ResponseFormatError::Kind::MissingCorrectedLine, line_no,
                                  "finding before Corrected: line");
      }
      if (has_no_errors) {
        throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, line_no,
                                  "finding after [No errors]");
      }
      const int expected = static_cast<int>(current.findings.size()) + 1;
      try {
        current.findings.push_back(parse_finding_line(line, expected));
      } catch (ResponseFormatError& e) {
        if (e.kind == ResponseFormatError::Kind::OrdinalMismatch) {
          throw ResponseFormatError(ResponseFormatError::Kind::NonConsecutiveOrdinals,
                                    line_no, e.what());
        }
        throw ResponseFormatError(e.kind, line_no, e.what());
      }
      continue;
    }
    throw ResponseFormatError(ResponseFormatError::Kind::GarbageLine, line_no,
                              "unrecognized line inside a record: \"" + line + "\"");
  }
  finish_record(line_no);
  return records;
}

std::string render_finding_line(const ErrorFinding& finding) {
  return render_ordinal(finding.ordinal) + std::string(kFindingMarker) + " " +
         finding.code_text + ", " + finding.span + ", " + finding.explanation;
}

}  // namespace eas
