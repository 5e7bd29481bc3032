#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eas/parser.hpp"
#include "eas/taxonomy.hpp"

namespace eas {

// How a predicted code relates to a gold code, by shared prefix depth.
enum class MatchClass { ExactT3, T2Match, T1Match, Outlier, MissingGold, Spurious };

std::string_view match_class_label(MatchClass cls);

// ExactT3: identical including tier 3. T2Match: same tier1+tier2 but
// different (or one missing) tier3. T1Match: same tier1 only. Outlier:
// nothing shared.
MatchClass classify_match(const ErrorCode& predicted, const ErrorCode& gold);

struct AlignedPair {
  MatchClass cls{MatchClass::Outlier};
  std::optional<ErrorCode> predicted;  // absent for MissingGold
  std::optional<ErrorCode> gold;       // absent for Spurious
};

// Greedy best-first alignment over multisets: all ExactT3 pairs first, then
// T2Match, then T1Match, then remaining cross pairs as Outlier; unpaired
// codes become MissingGold / Spurious. Leftmost-first within each tier.
std::vector<AlignedPair> align_findings(const std::vector<ErrorCode>& predicted,
                                        const std::vector<ErrorCode>& gold);

enum class Verdict { Correct, Partial, Incorrect };

struct VerdictEntry {
  int ordinal{1};
  Verdict verdict{Verdict::Correct};
  std::string note;
};

struct GoldEntry {
  std::string sentence;  // normalized on load
  std::vector<ErrorCode> expected_codes;
  std::vector<VerdictEntry> verdicts;
};

struct MalformedGold : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateSentence : std::runtime_error {
  std::string sentence;
  explicit DuplicateSentence(std::string sentence_)
      : std::runtime_error("duplicate gold sentence: \"" + sentence_ + "\""),
        sentence(std::move(sentence_)) {}
};
struct SentenceMismatch : std::runtime_error {
  std::string sentence;
  explicit SentenceMismatch(std::string sentence_)
      : std::runtime_error("gold sentence absent from predictions: \"" + sentence_ + "\""),
        sentence(std::move(sentence_)) {}
};

std::vector<GoldEntry> parse_gold(const std::string& text);
std::vector<GoldEntry> load_gold(const std::filesystem::path& path);

struct SentenceScore {
  std::string sentence;
  std::vector<AlignedPair> matches;
};

struct MatchCounts {
  int exact{0};
  int t2{0};
  int t1{0};
  int outlier{0};
  int missing_gold{0};
  int spurious{0};

  int total() const { return exact + t2 + t1 + outlier + missing_gold + spurious; }
  bool operator==(const MatchCounts&) const = default;
};

struct ScoreReport {
  std::vector<SentenceScore> sentences;
  MatchCounts counts;
  bool has_verdicts{false};
  int verdict_correct{0};
  int verdict_partial{0};
  int verdict_incorrect{0};

  int verdict_total() const {
    return verdict_correct + verdict_partial + verdict_incorrect;
  }
};

// Aligns each gold sentence's expected codes against the predicted record
// with the same normalized text and tallies the verdict entries. Every gold
// sentence must appear among the predictions.
ScoreReport score_run(const std::vector<AnalysisRecord>& predictions,
                      const std::vector<GoldEntry>& gold);

// Percentage with one decimal digit, exact integer arithmetic, ties to
// even: 27/32 -> "84.4", 3/32 -> "9.4", 2/32 -> "6.2".
std::string render_percent(long long numerator, long long denominator);

// three_class folds T1Match into Outlier for the three-outcome view.
std::string render_score_text(const ScoreReport& report, bool three_class = false);
std::string render_score_json(const ScoreReport& report, bool three_class = false);

}  // namespace eas
