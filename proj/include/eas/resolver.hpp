#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eas/parser.hpp"
#include "eas/taxonomy.hpp"

namespace eas {

// Verdict on one finding's code against the taxonomy.
struct CodeStatusReport {
  int finding_ordinal{1};
  CodeStatus status{CodeStatus::Known};
  std::optional<ErrorCode> nearest_known;  // same T1+T2 parent, when it resolves
  bool label_drift{false};  // explanation disagrees with the taxonomy's name
};

// Known iff the code resolves in the index; UnknownCode gets the T2 parent
// as nearest_known when that parent exists; MalformedCode passes through
// from the parser. label_drift fires when a Known finding's explanation
// shares no content token with the node's name + description.
CodeStatusReport classify_code_status(const Taxonomy& tax, const ErrorFinding& finding);

struct Suppression {
  ErrorFinding finding;
  int winner_ordinal{0};
  std::string winner_code_text;
  int rule_ordinal{0};
};

// Nothing is silently dropped: kept + suppressed losers = input findings.
struct ResolutionOutcome {
  std::vector<ErrorFinding> kept;  // SP findings first, then ordinal order
  std::vector<Suppression> suppressed;
  bool spelling_first{false};  // a SpellingFirst rule put SP findings ahead
};

// Applies the taxonomy's hierarchy rules to findings whose spans overlap in
// original_text. Spans locate at their first occurrence; spans not found
// verbatim participate with the whole sentence. A rule naming both codes
// takes precedence over the generic tier rules; within the same specificity
// the metadata order decides.
ResolutionOutcome resolve_conflicts(const Taxonomy& tax, const AnalysisRecord& record);

}  // namespace eas
