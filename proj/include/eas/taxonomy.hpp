#pragma once

#include <compare>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eas {

// Top-tier categories: Grammar Words, Grammar Sentences, Spelling.
enum class Tier1 { GW, GS, SP };

std::string_view tier1_prefix(Tier1 t);
std::string_view tier1_label(Tier1 t);
std::optional<Tier1> tier1_from_prefix(std::string_view s);

// Structured taxonomy code, e.g. GW1A = {GW, 1, 'A'}. tier2 is absent only
// for bare tier-1 references (the GW/GS/SP roots); parse_code always
// requires digits.
struct ErrorCode {
  Tier1 tier1{Tier1::GW};
  std::optional<int> tier2;
  std::optional<char> tier3;

  int depth() const { return tier3 ? 3 : tier2 ? 2 : 1; }
  auto operator<=>(const ErrorCode&) const = default;
};

// Canonical text form: prefix + decimal + optional letter, no separators.
std::string render(const ErrorCode& code);

struct MalformedCode : std::runtime_error {
  std::string text;
  explicit MalformedCode(std::string text_)
      : std::runtime_error("malformed error code: \"" + text_ + "\""),
        text(std::move(text_)) {}
};

// Parses the grammar (GW|GS|SP) digits [A-Z]. Throws MalformedCode on
// anything else (wrong prefix, missing digits, lowercase letter, junk).
ErrorCode parse_code(std::string_view text);

enum class RuleKind {
  SpellingFirst,
  SyntaxOverridesWord,
  SpecificOverridesParent,
  CodeSupersedesCode,
  Unrecognized,
};

struct HierarchyRule {
  int ordinal{0};
  std::string raw_text;
  RuleKind kind{RuleKind::Unrecognized};
  std::optional<ErrorCode> winner;  // CodeSupersedesCode only
  std::optional<ErrorCode> loser;   // CodeSupersedesCode only

  bool operator==(const HierarchyRule&) const = default;
};

// Derives the rule kind from its sentence by pattern recognition.
// Unrecognized sentences are retained, never dropped.
HierarchyRule recognize_rule(int position, std::string_view raw_text);

struct TaxonomyMetadata {
  std::string version;
  std::string focus;
  std::string revision_date;  // verbatim, never parsed as a date
  std::vector<HierarchyRule> hierarchy_rules;  // file order
  std::vector<std::pair<std::string, std::string>> exclusion_criteria;

  bool operator==(const TaxonomyMetadata&) const = default;
};

struct TaxonomyNode {
  ErrorCode code;
  std::string name;
  std::string description;
  std::optional<std::string> example;  // required non-empty at tier 3
  bool reconstructed{false};
  std::vector<TaxonomyNode> children;  // file order

  bool operator==(const TaxonomyNode&) const = default;
};

struct TaxonomyParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DuplicateCode : std::runtime_error {
  std::string code;
  explicit DuplicateCode(std::string code_)
      : std::runtime_error("duplicate code: " + code_), code(std::move(code_)) {}
};
struct DanglingRuleReference : std::runtime_error {
  std::string code;
  explicit DanglingRuleReference(std::string code_)
      : std::runtime_error("hierarchy rule references undefined code: " + code_),
        code(std::move(code_)) {}
};
struct UnknownCode : std::runtime_error {
  std::string code;
  explicit UnknownCode(std::string code_)
      : std::runtime_error("unknown code: " + code_), code(std::move(code_)) {}
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity{Severity::Error};
  std::string subject;  // offending code or "rule N"
  std::string message;
};

// Immutable after construction; cheap to copy and safe to share across
// concurrent readers.
class Taxonomy {
 public:
  Taxonomy();
  Taxonomy(TaxonomyMetadata metadata, std::vector<TaxonomyNode> roots);

  const TaxonomyMetadata& metadata() const;
  const std::vector<TaxonomyNode>& roots() const;

  // nullptr when the code is not indexed.
  const TaxonomyNode* find(const ErrorCode& code) const;
  const TaxonomyNode* find(std::string_view code_text) const;

  std::size_t size() const;  // number of indexed nodes

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
};

// Loads a taxonomy document (the JSON layout with a top-level "taxonomy"
// object holding "metadata" and "error categories"). Node order follows
// file order. Throws TaxonomyParseError, SchemaError, DuplicateCode or
// DanglingRuleReference.
Taxonomy load_taxonomy(const std::string& document);
Taxonomy load_taxonomy_file(const std::filesystem::path& path);

// Inverse of load_taxonomy: load(serialize(t)) yields an identical tree.
std::string serialize_taxonomy(const Taxonomy& tax);

const TaxonomyNode* lookup(const Taxonomy& tax, const ErrorCode& code);

// Codes from immediate parent up to the T1 root. Throws UnknownCode when
// the queried code does not resolve.
std::vector<ErrorCode> ancestors(const Taxonomy& tax, const ErrorCode& code);

// Empty result iff every structural invariant holds. Unrecognized
// hierarchy rules surface as warnings, everything else as errors.
std::vector<Diagnostic> validate(const Taxonomy& tax);

}  // namespace eas
