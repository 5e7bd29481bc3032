#include "eas/resolver.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <unordered_set>

namespace eas {

namespace {

const std::unordered_set<std::string>& stopwords() {
  static const std::unordered_set<std::string> words{
      "a",    "an",   "and",  "are",  "as",    "at",   "be",   "been", "but",
      "by",   "can",  "could", "did", "do",    "does", "e", "for", "from",
      "g",    "had",  "has",  "have", "i",     "in",   "into", "is",   "it",
      "its",  "may",  "might", "no",  "not",   "of",   "on",   "or",   "shall",
      "should", "than", "that", "the", "their", "them", "then", "these",
      "they", "this", "those", "to",  "was",   "were", "when", "where",
      "which", "who", "will", "with", "would",
  };
  return words;
}

std::set<std::string> content_tokens(std::string_view text) {
  std::set<std::string> tokens;
  std::string current;
  const auto flush = [&] {
    if (current.size() > 1 && !stopwords().count(current)) tokens.insert(current);
    current.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

bool shares_content_token(std::string_view a, std::string_view b) {
  const auto ta = content_tokens(a);
  const auto tb = content_tokens(b);
  return std::any_of(ta.begin(), ta.end(), [&](const std::string& t) { return tb.count(t); });
}

}  // namespace

CodeStatusReport classify_code_status(const Taxonomy& tax, const ErrorFinding& finding) {
  CodeStatusReport report;
  report.finding_ordinal = finding.ordinal;

  if (!finding.code) {
    report.status = CodeStatus::MalformedCode;
    return report;
  }
  const TaxonomyNode* node = tax.find(*finding.code);
  if (node == nullptr) {
    report.status = CodeStatus::UnknownCode;
    if (finding.code->tier3) {
      ErrorCode parent{finding.code->tier1, finding.code->tier2, std::nullopt};
      if (tax.find(parent)) report.nearest_known = parent;
    }
    return report;
  }

  report.status = CodeStatus::Known;
  // A finding whose explanation shares no content word with the node's name
  // and description is using the code under a different label.
  report.label_drift =
      !shares_content_token(finding.explanation, node->name + " " + node->description);
  return report;
}

namespace {

struct Located {
  ErrorFinding finding;
  std::size_t begin{0};
  std::size_t end{0};
  bool suppressed{false};
  int winner_ordinal{0};
  std::string winner_code_text;
  std::size_t winner_begin{0};
  std::size_t winner_end{0};
  int rule_ordinal{0};
  bool rule_kind_generic{false};
};

bool overlaps(const Located& a, const Located& b) {
  return a.begin < b.end && b.begin < a.end;
}

bool is_sp(const ErrorFinding& f) { return f.code && f.code->tier1 == Tier1::SP; }

// A rule code without tier3 covers its whole T2 family (GW11 covers GW11A);
// with tier3 it names one exact code.
bool rule_code_covers(const ErrorCode& rule_code, const ErrorCode& code) {
  if (rule_code.tier1 != code.tier1) return false;
  if (rule_code.tier2 != code.tier2) return false;
  if (rule_code.tier3) return code.tier3 == rule_code.tier3;
  return true;
}

bool specific_rule_applies(const HierarchyRule& rule, const ErrorFinding& winner,
                           const ErrorFinding& loser) {
  return rule.winner && rule.loser && winner.code && loser.code &&
         rule_code_covers(*rule.winner, *winner.code) &&
         rule_code_covers(*rule.loser, *loser.code);
}

bool generic_rule_applies(const HierarchyRule& rule, const ErrorFinding& winner,
                          const ErrorFinding& loser) {
  if (!winner.code || !loser.code) return false;
  switch (rule.kind) {
    case RuleKind::SyntaxOverridesWord:
      return winner.code->tier1 == Tier1::GS && loser.code->tier1 == Tier1::GW;
    case RuleKind::SpecificOverridesParent:
      return winner.code->depth() == 3 && loser.code->depth() == 2 &&
             winner.code->tier1 == loser.code->tier1 &&
             winner.code->tier2 == loser.code->tier2;
    default:
      return false;
  }
}

// Settles one overlapping pair. A rule that names both codes decides the
// pair outright, whichever direction it points; the generic tier rules
// apply only when no specific rule touches the pair. Metadata order breaks
// ties within each group. Returns which side loses (0 or 1), or -1.
int pick_loser(const std::vector<HierarchyRule>& rules, const ErrorFinding& a,
               const ErrorFinding& b, const HierarchyRule** out_rule) {
  for (const auto& rule : rules) {
    if (rule.kind != RuleKind::CodeSupersedesCode) continue;
    if (specific_rule_applies(rule, a, b)) {
      *out_rule = &rule;
      return 1;
    }
    if (specific_rule_applies(rule, b, a)) {
      *out_rule = &rule;
      return 0;
    }
  }
  for (const auto& rule : rules) {
    if (generic_rule_applies(rule, a, b)) {
      *out_rule = &rule;
      return 1;
    }
    if (generic_rule_applies(rule, b, a)) {
      *out_rule = &rule;
      return 0;
    }
  }
  return -1;
}

}  // namespace

ResolutionOutcome resolve_conflicts(const Taxonomy& tax, const AnalysisRecord& record) {
  const auto& rules = tax.metadata().hierarchy_rules;
  const bool spelling_first =
      std::any_of(rules.begin(), rules.end(), [](const HierarchyRule& r) {
        return r.kind == RuleKind::SpellingFirst;
      });

  std::vector<Located> located;
  located.reserve(record.findings.size());
  for (const auto& finding : record.findings) {
    Located item;
    item.finding = finding;
    std::size_t pos = record.original_text.find(finding.span);
    if (pos == std::string::npos) {
      // SpanNotInOT: participate with the whole sentence.
      item.begin = 0;
      item.end = record.original_text.size();
    } else {
      item.begin = pos;
      item.end = pos + finding.span.size();
    }
    located.push_back(std::move(item));
  }

  // Spelling goes first in the output; it suppresses nothing.
  std::stable_sort(located.begin(), located.end(), [&](const Located& a, const Located& b) {
    if (spelling_first && is_sp(a.finding) != is_sp(b.finding)) return is_sp(a.finding);
    return a.finding.ordinal < b.finding.ordinal;
  });

  // Every overlapping pair is settled independently against the full input
  // set, so the outcome does not depend on the order findings arrived in.
  // When several winners claim one loser, the lowest-ranked rule is
  // recorded; span position breaks the remaining tie.
  for (std::size_t i = 0; i < located.size(); ++i) {
    for (std::size_t j = i + 1; j < located.size(); ++j) {
      if (!overlaps(located[i], located[j])) continue;
      const HierarchyRule* rule = nullptr;
      const int losing_side = pick_loser(rules, located[i].finding, located[j].finding, &rule);
      if (losing_side < 0) continue;
      Located& loser = losing_side == 0 ? located[i] : located[j];
      const Located& winner = losing_side == 0 ? located[j] : located[i];
      const bool specific = rule->kind == RuleKind::CodeSupersedesCode;
      const auto claim = std::make_tuple(!specific, rule->ordinal, winner.begin, winner.end,
                                         winner.finding.code_text);
      const auto previous =
          std::make_tuple(loser.rule_kind_generic, loser.rule_ordinal, loser.winner_begin,
                          loser.winner_end, loser.winner_code_text);
      if (loser.suppressed && previous <= claim) continue;
      loser.suppressed = true;
      loser.winner_ordinal = winner.finding.ordinal;
      loser.winner_code_text = winner.finding.code_text;
      loser.winner_begin = winner.begin;
      loser.winner_end = winner.end;
      loser.rule_ordinal = rule->ordinal;
      loser.rule_kind_generic = !specific;
    }
  }

  ResolutionOutcome outcome;
  outcome.spelling_first = spelling_first;
  for (auto& item : located) {
    if (item.suppressed) {
      outcome.suppressed.push_back(Suppression{std::move(item.finding), item.winner_ordinal,
                                               std::move(item.winner_code_text),
                                               item.rule_ordinal});
    } else {
      outcome.kept.push_back(std::move(item.finding));
    }
  }
  return outcome;
}

}  // namespace eas
