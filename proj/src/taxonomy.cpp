#include "eas/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

namespace eas {

using ordered_json = nlohmann::ordered_json;

std::string_view tier1_prefix(Tier1 t) {
  switch (t) {
    case Tier1::GW: return "GW";
    case Tier1::GS: return "GS";
    case Tier1::SP: return "SP";
  }
  return "";
}

std::string_view tier1_label(Tier1 t) {
  switch (t) {
    case Tier1::GW: return "Grammar Words";
    case Tier1::GS: return "Grammar Sentences";
    case Tier1::SP: return "Spelling";
  }
  return "";
}

std::optional<Tier1> tier1_from_prefix(std::string_view s) {
  if (s == "GW") return Tier1::GW;
  if (s == "GS") return Tier1::GS;
  if (s == "SP") return Tier1::SP;
  return std::nullopt;
}

std::string render(const ErrorCode& code) {
  std::string out{tier1_prefix(code.tier1)};
  if (code.tier2) out += std::to_string(*code.tier2);
  if (code.tier3) out += *code.tier3;
  return out;
}

ErrorCode parse_code(std::string_view text) {
  const auto fail = [&] { throw MalformedCode(std::string(text)); };
  if (text.size() < 3) fail();
  auto tier1 = tier1_from_prefix(text.substr(0, 2));
  if (!tier1) fail();

  std::size_t pos = 2;
  std::size_t digits_begin = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  std::size_t digit_count = pos - digits_begin;
  if (digit_count == 0 || digit_count > 3) fail();
  if (text[digits_begin] == '0') fail();  // no leading zeros, tier2 >= 1
  int tier2 = 0;
  for (std::size_t i = digits_begin; i < pos; ++i) tier2 = tier2 * 10 + (text[i] - '0');

  std::optional<char> tier3;
  if (pos < text.size()) {
    char c = text[pos];
    if (c < 'A' || c > 'Z') fail();
    tier3 = c;
    ++pos;
  }
  if (pos != text.size()) fail();  // trailing junk
  return ErrorCode{*tier1, tier2, tier3};
}

namespace {

bool contains_ci(std::string_view haystack, std::string_view needle) {
  auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                        [](char a, char b) {
                          return std::tolower(static_cast<unsigned char>(a)) ==
                                 std::tolower(static_cast<unsigned char>(b));
                        });
  return it != haystack.end();
}

}  // namespace

HierarchyRule recognize_rule(int position, std::string_view raw_text) {
  HierarchyRule rule;
  rule.raw_text = std::string(raw_text);
  rule.ordinal = position;

  // Rules may carry their own number, "4. Punctuation (GS6) supersedes ...".
  static const std::regex leading_number(R"(^\s*(\d+)\s*\.)");
  std::cmatch m;
  if (std::regex_search(raw_text.begin(), raw_text.end(), m, leading_number)) {
    rule.ordinal = std::stoi(m[1].str());
  }

  const bool has_verb = contains_ci(raw_text, "supersede") || contains_ci(raw_text, "overrid");

  // Full codes in parentheses, e.g. "(GS6)" or "(GW3E)".
  static const std::regex paren_code(R"(\((GW|GS|SP)(\d{1,3})([A-Z])?\))");
  std::vector<ErrorCode> codes;
  for (auto it = std::cregex_iterator(raw_text.begin(), raw_text.end(), paren_code);
       it != std::cregex_iterator(); ++it) {
    ErrorCode code;
    code.tier1 = *tier1_from_prefix((*it)[1].str());
    code.tier2 = std::stoi((*it)[2].str());
    if ((*it)[3].matched) code.tier3 = (*it)[3].str()[0];
    codes.push_back(code);
  }
  if (codes.size() >= 2 && has_verb) {
    rule.kind = RuleKind::CodeSupersedesCode;
    rule.winner = codes[0];
    rule.loser = codes[1];
    return rule;
  }

  // Bare tier-1 prefixes, "(GS)" / "(GW)".
  const bool gs_bare = raw_text.find("(GS)") != std::string_view::npos;
  const bool gw_bare = raw_text.find("(GW)") != std::string_view::npos;
  if (gs_bare && gw_bare && has_verb) {
    rule.kind = RuleKind::SyntaxOverridesWord;
    return rule;
  }

  if (contains_ci(raw_text, "spelling") && contains_ci(raw_text, "first")) {
    rule.kind = RuleKind::SpellingFirst;
    return rule;
  }
  if (contains_ci(raw_text, "specific") && contains_ci(raw_text, "parent")) {
    rule.kind = RuleKind::SpecificOverridesParent;
    return rule;
  }
  rule.kind = RuleKind::Unrecognized;
  return rule;
}

struct Taxonomy::Data {
  TaxonomyMetadata metadata;
  std::vector<TaxonomyNode> roots;
  std::map<std::string, const TaxonomyNode*, std::less<>> index;
};

namespace {

void index_tree(const TaxonomyNode& node,
                std::map<std::string, const TaxonomyNode*, std::less<>>& index) {
  index.emplace(render(node.code), &node);  // first wins; validate() reports dupes
  for (const auto& child : node.children) index_tree(child, index);
}

}  // namespace

Taxonomy::Taxonomy() : data_(std::make_shared<Data>()) {}

Taxonomy::Taxonomy(TaxonomyMetadata metadata, std::vector<TaxonomyNode> roots) {
  auto data = std::make_shared<Data>();
  data->metadata = std::move(metadata);
  data->roots = std::move(roots);
  for (const auto& root : data->roots) index_tree(root, data->index);
  data_ = std::move(data);
}

const TaxonomyMetadata& Taxonomy::metadata() const { return data_->metadata; }
const std::vector<TaxonomyNode>& Taxonomy::roots() const { return data_->roots; }

const TaxonomyNode* Taxonomy::find(const ErrorCode& code) const {
  return find(render(code));
}

const TaxonomyNode* Taxonomy::find(std::string_view code_text) const {
  auto it = data_->index.find(code_text);
  return it == data_->index.end() ? nullptr : it->second;
}

std::size_t Taxonomy::size() const { return data_->index.size(); }

namespace {

// Duplicate keys would otherwise be silently collapsed by the DOM.
void check_duplicate_keys(const std::string& document) {
  std::vector<std::set<std::string>> object_stack;
  ordered_json::parser_callback_t cb = [&](int /*depth*/, ordered_json::parse_event_t event,
                                           ordered_json& parsed) {
    switch (event) {
      case ordered_json::parse_event_t::object_start:
        object_stack.emplace_back();
        break;
      case ordered_json::parse_event_t::object_end:
        object_stack.pop_back();
        break;
      case ordered_json::parse_event_t::key: {
        auto key = parsed.get<std::string>();
        if (!object_stack.empty() && !object_stack.back().insert(key).second) {
          throw DuplicateCode(key);
        }
        break;
      }
      default:
        break;
    }
    return true;
  };
  ordered_json::parse(document, cb);
}

const ordered_json& require_object(const ordered_json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_object()) {
    throw SchemaError(std::string("missing or non-object key: \"") + key + "\"");
  }
  return *it;
}

std::string get_string(const ordered_json& j, const char* key, const char* where) {
  auto it = j.find(key);
  if (it == j.end()) return "";
  if (!it->is_string()) {
    throw SchemaError(std::string(where) + ": \"" + key + "\" must be a string");
  }
  return it->get<std::string>();
}

std::string require_string(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw SchemaError(where + " missing \"" + key + "\"");
  }
  return it->get<std::string>();
}

TaxonomyNode parse_t3(const std::string& key, const ErrorCode& parent_code,
                      const ordered_json& j) {
  ErrorCode code;
  try {
    code = parse_code(key);
  } catch (const MalformedCode&) {
    throw SchemaError("invalid tier-3 code key: \"" + key + "\"");
  }
  if (!code.tier3 || code.tier1 != parent_code.tier1 || code.tier2 != parent_code.tier2) {
    throw SchemaError("tier-3 code \"" + key + "\" does not extend its parent \"" +
                      render(parent_code) + "\"");
  }
  if (!j.is_object()) throw SchemaError("tier-3 entry \"" + key + "\" must be an object");
  TaxonomyNode node;
  node.code = code;
  node.name = require_string(j, "name", "tier-3 node " + key);
  node.description = require_string(j, "description", "tier-3 node " + key);
  node.example = require_string(j, "example", "tier-3 node " + key);
  node.reconstructed = j.value("reconstructed", false);
  return node;
}

TaxonomyNode parse_t2(const std::string& key, Tier1 tier1, const ordered_json& j) {
  ErrorCode code;
  try {
    code = parse_code(key);
  } catch (const MalformedCode&) {
    throw SchemaError("invalid tier-2 code key: \"" + key + "\"");
  }
  if (code.tier3 || code.tier1 != tier1) {
    throw SchemaError("tier-2 code \"" + key + "\" does not extend its parent \"" +
                      std::string(tier1_prefix(tier1)) + "\"");
  }
  if (!j.is_object()) throw SchemaError("tier-2 entry \"" + key + "\" must be an object");
  TaxonomyNode node;
  node.code = code;
  node.name = get_string(j, "name", "tier-2 node");
  node.description = get_string(j, "description", "tier-2 node");
  if (auto it = j.find("example"); it != j.end() && it->is_string()) {
    node.example = it->get<std::string>();
  }
  node.reconstructed = j.value("reconstructed", false);
  if (auto it = j.find("subcategories"); it != j.end()) {
    if (!it->is_object()) {
      throw SchemaError("\"subcategories\" of " + key + " must be an object");
    }
    for (const auto& [t3_key, t3_value] : it->items()) {
      node.children.push_back(parse_t3(t3_key, code, t3_value));
    }
  }
  return node;
}

}  // namespace

Taxonomy load_taxonomy(const std::string& document) {
  try {
    check_duplicate_keys(document);
  } catch (const DuplicateCode&) {
    throw;
  } catch (const ordered_json::parse_error& e) {
    throw TaxonomyParseError(e.what());
  }

  ordered_json doc;
  try {
    doc = ordered_json::parse(document);
  } catch (const ordered_json::parse_error& e) {
    throw TaxonomyParseError(e.what());
  }
  if (!doc.is_object()) throw SchemaError("top level must be an object");

  const auto& tax = require_object(doc, "taxonomy");
  const auto& meta = require_object(tax, "metadata");

  TaxonomyMetadata metadata;
  metadata.version = get_string(meta, "version", "metadata");
  metadata.focus = get_string(meta, "focus", "metadata");
  metadata.revision_date = get_string(meta, "revision_date", "metadata");
  if (auto it = meta.find("hierarchy_rules"); it != meta.end()) {
    if (!it->is_array()) throw SchemaError("\"hierarchy_rules\" must be an array");
    int position = 0;
    for (const auto& entry : *it) {
      if (!entry.is_string()) throw SchemaError("hierarchy rules must be strings");
      metadata.hierarchy_rules.push_back(recognize_rule(++position, entry.get<std::string>()));
    }
  }
  if (auto it = meta.find("exclusion_criteria"); it != meta.end()) {
    if (!it->is_object()) throw SchemaError("\"exclusion_criteria\" must be an object");
    for (const auto& [k, v] : it->items()) {
      if (!v.is_string()) throw SchemaError("exclusion criteria notes must be strings");
      metadata.exclusion_criteria.emplace_back(k, v.get<std::string>());
    }
  }

  const auto& categories = require_object(tax, "error categories");
  std::vector<TaxonomyNode> roots;
  for (const auto& [t1_key, t1_value] : categories.items()) {
    auto tier1 = tier1_from_prefix(t1_key);
    if (!tier1) throw SchemaError("unknown tier-1 category: \"" + t1_key + "\"");
    if (!t1_value.is_object()) {
      throw SchemaError("tier-1 entry \"" + t1_key + "\" must be an object");
    }
    TaxonomyNode root;
    root.code = ErrorCode{*tier1, std::nullopt, std::nullopt};
    root.name = std::string(tier1_label(*tier1));
    for (const auto& [t2_key, t2_value] : t1_value.items()) {
      root.children.push_back(parse_t2(t2_key, *tier1, t2_value));
    }
    roots.push_back(std::move(root));
  }

  Taxonomy result(std::move(metadata), std::move(roots));

  // The JSON layer only catches duplicates within one object.
  std::size_t node_count = 0;
  std::set<std::string> seen;
  const std::function<void(const TaxonomyNode&)> count = [&](const TaxonomyNode& node) {
    ++node_count;
    if (!seen.insert(render(node.code)).second) throw DuplicateCode(render(node.code));
    for (const auto& child : node.children) count(child);
  };
  for (const auto& root : result.roots()) count(root);
  (void)node_count;

  for (const auto& rule : result.metadata().hierarchy_rules) {
    if (rule.kind != RuleKind::CodeSupersedesCode) continue;
    for (const auto& side : {rule.winner, rule.loser}) {
      if (side && !result.find(*side)) throw DanglingRuleReference(render(*side));
    }
  }
  return result;
}

Taxonomy load_taxonomy_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TaxonomyParseError("cannot open taxonomy file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_taxonomy(buffer.str());
}

namespace {

ordered_json node_to_json(const TaxonomyNode& node) {
  ordered_json j = ordered_json::object();
  j["name"] = node.name;
  j["description"] = node.description;
  if (node.example) j["example"] = *node.example;
  if (node.reconstructed) j["reconstructed"] = true;
  if (!node.children.empty()) {
    ordered_json subs = ordered_json::object();
    for (const auto& child : node.children) subs[render(child.code)] = node_to_json(child);
    j["subcategories"] = std::move(subs);
  }
  return j;
}

}  // namespace

std::string serialize_taxonomy(const Taxonomy& tax) {
  ordered_json meta = ordered_json::object();
  meta["version"] = tax.metadata().version;
  meta["focus"] = tax.metadata().focus;
  meta["revision_date"] = tax.metadata().revision_date;
  ordered_json rules = ordered_json::array();
  for (const auto& rule : tax.metadata().hierarchy_rules) rules.push_back(rule.raw_text);
  meta["hierarchy_rules"] = std::move(rules);
  ordered_json excl = ordered_json::object();
  for (const auto& [k, v] : tax.metadata().exclusion_criteria) excl[k] = v;
  meta["exclusion_criteria"] = std::move(excl);

  ordered_json categories = ordered_json::object();
  for (const auto& root : tax.roots()) {
    ordered_json t1 = ordered_json::object();
    for (const auto& t2 : root.children) t1[render(t2.code)] = node_to_json(t2);
    categories[render(root.code)] = std::move(t1);
  }

  ordered_json doc = ordered_json::object();
  doc["taxonomy"] = ordered_json::object();
  doc["taxonomy"]["metadata"] = std::move(meta);
  doc["taxonomy"]["error categories"] = std::move(categories);
  return doc.dump(2) + "\n";
}

const TaxonomyNode* lookup(const Taxonomy& tax, const ErrorCode& code) {
  return tax.find(code);
}

std::vector<ErrorCode> ancestors(const Taxonomy& tax, const ErrorCode& code) {
  if (!tax.find(code)) throw UnknownCode(render(code));
  std::vector<ErrorCode> chain;
  if (code.tier3) chain.push_back(ErrorCode{code.tier1, code.tier2, std::nullopt});
  if (code.tier2) chain.push_back(ErrorCode{code.tier1, std::nullopt, std::nullopt});
  return chain;
}

std::vector<Diagnostic> validate(const Taxonomy& tax) {
  std::vector<Diagnostic> diagnostics;
  const auto error = [&](std::string subject, std::string message) {
    diagnostics.push_back({Severity::Error, std::move(subject), std::move(message)});
  };

  std::set<std::string> seen;
  const std::function<void(const TaxonomyNode&, const TaxonomyNode*)> walk =
      [&](const TaxonomyNode& node, const TaxonomyNode* parent) {
        const std::string code_text = render(node.code);
        if (!seen.insert(code_text).second) {
          error(code_text, "code appears more than once");
        }
        if (parent) {
          const bool extends = node.code.tier1 == parent->code.tier1 &&
                               node.code.depth() == parent->code.depth() + 1 &&
                               (!parent->code.tier2 || node.code.tier2 == parent->code.tier2);
          if (!extends) {
            error(code_text, "code does not extend its parent " + render(parent->code));
          }
        }
        if (node.code.depth() == 3) {
          if (!node.children.empty()) error(code_text, "tier-3 node has children");
          if (!node.example || node.example->empty()) {
            error(code_text, "tier-3 node lacks an example");
          }
        }
        for (const auto& child : node.children) walk(child, &node);
      };
  for (const auto& root : tax.roots()) walk(root, nullptr);

  for (const auto& rule : tax.metadata().hierarchy_rules) {
    const std::string subject = "rule " + std::to_string(rule.ordinal);
    if (rule.kind == RuleKind::Unrecognized) {
      diagnostics.push_back({Severity::Warning, subject,
                             "unrecognized hierarchy rule: \"" + rule.raw_text + "\""});
      continue;
    }
    if (rule.kind != RuleKind::CodeSupersedesCode) continue;
    for (const auto& side : {rule.winner, rule.loser}) {
      if (side && !tax.find(*side)) {
        error(subject, "references undefined code " + render(*side));
      }
    }
  }
  return diagnostics;
}

}  // namespace eas
