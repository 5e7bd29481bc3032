#include "eas/scorer.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "eas/chunker.hpp"

namespace eas {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view match_class_label(MatchClass cls) {
  switch (cls) {
    case MatchClass::ExactT3: return "exact";
    case MatchClass::T2Match: return "t2";
    case MatchClass::T1Match: return "t1";
    case MatchClass::Outlier: return "outlier";
    case MatchClass::MissingGold: return "missing_gold";
    case MatchClass::Spurious: return "spurious";
  }
  return "";
}

MatchClass classify_match(const ErrorCode& predicted, const ErrorCode& gold) {
  if (predicted == gold) return MatchClass::ExactT3;
  if (predicted.tier1 != gold.tier1) return MatchClass::Outlier;
  if (predicted.tier2 && gold.tier2 && predicted.tier2 == gold.tier2) {
    return MatchClass::T2Match;
  }
  return MatchClass::T1Match;
}

std::vector<AlignedPair> align_findings(const std::vector<ErrorCode>& predicted,
                                        const std::vector<ErrorCode>& gold) {
  std::vector<bool> pred_used(predicted.size(), false);
  std::vector<bool> gold_used(gold.size(), false);
  std::vector<AlignedPair> result;

  const auto pair_tier = [&](MatchClass tier) {
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      if (pred_used[i]) continue;
      for (std::size_t j = 0; j < gold.size(); ++j) {
        if (gold_used[j]) continue;
        if (classify_match(predicted[i], gold[j]) != tier) continue;
        pred_used[i] = true;
        gold_used[j] = true;
        result.push_back(AlignedPair{tier, predicted[i], gold[j]});
        break;
      }
    }
  };
  pair_tier(MatchClass::ExactT3);
  pair_tier(MatchClass::T2Match);
  pair_tier(MatchClass::T1Match);

  // Remaining cross pairs share no lineage at all.
  std::size_t j = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (pred_used[i]) continue;
    while (j < gold.size() && gold_used[j]) ++j;
    if (j == gold.size()) break;
    pred_used[i] = true;
    gold_used[j] = true;
    result.push_back(AlignedPair{MatchClass::Outlier, predicted[i], gold[j]});
  }
  for (std::size_t k = 0; k < gold.size(); ++k) {
    if (!gold_used[k]) {
      result.push_back(AlignedPair{MatchClass::MissingGold, std::nullopt, gold[k]});
    }
  }
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (!pred_used[i]) {
      result.push_back(AlignedPair{MatchClass::Spurious, predicted[i], std::nullopt});
    }
  }
  return result;
}

namespace {

Verdict parse_verdict(const std::string& text) {
  if (text == "correct") return Verdict::Correct;
  if (text == "partial") return Verdict::Partial;
  if (text == "incorrect") return Verdict::Incorrect;
  throw MalformedGold("unknown verdict: \"" + text + "\"");
}

}  // namespace

std::vector<GoldEntry> parse_gold(const std::string& text) {
  const bool blank = std::all_of(text.begin(), text.end(), [](unsigned char c) {
    return std::isspace(c) != 0;
  });
  if (blank) return {};

  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw MalformedGold(std::string("gold file: ") + e.what());
  }
  if (!doc.is_array()) throw MalformedGold("gold file must be a JSON array");

  std::vector<GoldEntry> entries;
  std::set<std::string> seen;
  for (const auto& item : doc) {
    if (!item.is_object() || !item.contains("sentence") || !item["sentence"].is_string()) {
      throw MalformedGold("gold entries need a string \"sentence\"");
    }
    GoldEntry entry;
    entry.sentence = normalize_sentence(item["sentence"].get<std::string>());
    if (!seen.insert(entry.sentence).second) throw DuplicateSentence(entry.sentence);

    if (auto it = item.find("expected_codes"); it != item.end()) {
      if (!it->is_array()) throw MalformedGold("\"expected_codes\" must be an array");
      for (const auto& code : *it) {
        if (!code.is_string()) throw MalformedGold("expected codes must be strings");
        try {
          entry.expected_codes.push_back(parse_code(code.get<std::string>()));
        } catch (const MalformedCode& e) {
          throw MalformedGold(e.what());
        }
      }
    }
    if (auto it = item.find("verdicts"); it != item.end() && !it->is_null()) {
      if (!it->is_array()) throw MalformedGold("\"verdicts\" must be an array");
      std::set<int> ordinals;
      for (const auto& v : *it) {
        if (!v.is_object() || !v.contains("ordinal") || !v["ordinal"].is_number_integer() ||
            !v.contains("verdict") || !v["verdict"].is_string()) {
          throw MalformedGold("verdict entries need \"ordinal\" and \"verdict\"");
        }
        VerdictEntry entry_v;
        entry_v.ordinal = v["ordinal"].get<int>();
        if (!ordinals.insert(entry_v.ordinal).second) {
          throw MalformedGold("duplicate verdict ordinal " + std::to_string(entry_v.ordinal) +
                              " for sentence \"" + entry.sentence + "\"");
        }
        entry_v.verdict = parse_verdict(v["verdict"].get<std::string>());
        entry_v.note = v.value("note", "");
        entry.verdicts.push_back(std::move(entry_v));
      }
    }
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::vector<GoldEntry> load_gold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw MalformedGold("cannot open gold file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_gold(buffer.str());
}

ScoreReport score_run(const std::vector<AnalysisRecord>& predictions,
                      const std::vector<GoldEntry>& gold) {
  // Normalized OT -> record indices, consumed in order for duplicates.
  std::map<std::string, std::vector<std::size_t>> by_sentence;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    by_sentence[normalize_sentence(predictions[i].original_text)].push_back(i);
  }
  std::map<std::string, std::size_t> consumed;

  ScoreReport report;
  for (const auto& entry : gold) {
    auto it = by_sentence.find(entry.sentence);
    std::size_t offset = consumed[entry.sentence];
    if (it == by_sentence.end() || offset >= it->second.size()) {
      throw SentenceMismatch(entry.sentence);
    }
    consumed[entry.sentence] = offset + 1;
    const AnalysisRecord& record = predictions[it->second[offset]];

    std::vector<ErrorCode> predicted_codes;
    for (const auto& finding : record.findings) {
      if (finding.code) predicted_codes.push_back(*finding.code);
    }

    SentenceScore score;
    score.sentence = entry.sentence;
    score.matches = align_findings(predicted_codes, entry.expected_codes);
    for (const auto& match : score.matches) {
      switch (match.cls) {
        case MatchClass::ExactT3: ++report.counts.exact; break;
        case MatchClass::T2Match: ++report.counts.t2; break;
        case MatchClass::T1Match: ++report.counts.t1; break;
        case MatchClass::Outlier: ++report.counts.outlier; break;
        case MatchClass::MissingGold: ++report.counts.missing_gold; break;
        case MatchClass::Spurious: ++report.counts.spurious; break;
      }
    }
    report.sentences.push_back(std::move(score));

    for (const auto& verdict : entry.verdicts) {
      report.has_verdicts = true;
      switch (verdict.verdict) {
        case Verdict::Correct: ++report.verdict_correct; break;
        case Verdict::Partial: ++report.verdict_partial; break;
        case Verdict::Incorrect: ++report.verdict_incorrect; break;
      }
    }
  }
  return report;
}

std::string render_percent(long long numerator, long long denominator) {
  if (denominator <= 0) return "0.0";
  // One decimal digit in exact integer arithmetic, ties to even; 2/32
  // must render 6.2, not 6.3.
  long long t = numerator * 1000;
  long long q = t / denominator;
  long long r = t % denominator;
  if (2 * r > denominator || (2 * r == denominator && q % 2 != 0)) ++q;
  return std::to_string(q / 10) + "." + std::to_string(q % 10);
}

namespace {

struct ClassView {
  std::string label;
  int count;
};

std::vector<ClassView> class_views(const MatchCounts& counts, bool three_class) {
  std::vector<ClassView> views;
  views.push_back({"exact", counts.exact});
  views.push_back({"t2", counts.t2});
  if (three_class) {
    views.push_back({"outlier", counts.outlier + counts.t1});
  } else {
    views.push_back({"t1", counts.t1});
    views.push_back({"outlier", counts.outlier});
  }
  views.push_back({"missing_gold", counts.missing_gold});
  views.push_back({"spurious", counts.spurious});
  return views;
}

}  // namespace

std::string render_score_text(const ScoreReport& report, bool three_class) {
  std::ostringstream out;
  const int total = report.counts.total();
  out << "Match classes (" << total << " compared):\n";
  for (const auto& view : class_views(report.counts, three_class)) {
    out << "  " << view.label << ": " << view.count << " ("
        << render_percent(view.count, total) << "%)\n";
  }
  if (report.has_verdicts) {
    const int vt = report.verdict_total();
    out << "Expert verdicts (" << vt << " findings):\n";
    out << "  correct: " << report.verdict_correct << " ("
        << render_percent(report.verdict_correct, vt) << "%)\n";
    out << "  partial: " << report.verdict_partial << " ("
        << render_percent(report.verdict_partial, vt) << "%)\n";
    out << "  incorrect: " << report.verdict_incorrect << " ("
        << render_percent(report.verdict_incorrect, vt) << "%)\n";
  }
  return out.str();
}

std::string render_score_json(const ScoreReport& report, bool three_class) {
  ordered_json j = ordered_json::object();
  ordered_json matches = ordered_json::object();
  const int total = report.counts.total();
  for (const auto& view : class_views(report.counts, three_class)) {
    ordered_json cls = ordered_json::object();
    cls["count"] = view.count;
    cls["rate"] = render_percent(view.count, total);
    matches[view.label] = std::move(cls);
  }
  j["compared"] = total;
  j["matches"] = std::move(matches);

  if (report.has_verdicts) {
    const int vt = report.verdict_total();
    ordered_json verdicts = ordered_json::object();
    verdicts["total"] = vt;
    verdicts["correct"] = report.verdict_correct;
    verdicts["partial"] = report.verdict_partial;
    verdicts["incorrect"] = report.verdict_incorrect;
    verdicts["correct_rate"] = render_percent(report.verdict_correct, vt);
    verdicts["partial_rate"] = render_percent(report.verdict_partial, vt);
    verdicts["incorrect_rate"] = render_percent(report.verdict_incorrect, vt);
    j["verdicts"] = std::move(verdicts);
  }

  ordered_json sentences = ordered_json::array();
  for (const auto& sentence : report.sentences) {
    ordered_json s = ordered_json::object();
    s["sentence"] = sentence.sentence;
    ordered_json pairs = ordered_json::array();
    for (const auto& match : sentence.matches) {
      ordered_json p = ordered_json::object();
      p["class"] = std::string(match_class_label(
          three_class && match.cls == MatchClass::T1Match ? MatchClass::Outlier : match.cls));
      p["predicted"] = match.predicted ? render(*match.predicted) : "";
      p["gold"] = match.gold ? render(*match.gold) : "";
      pairs.push_back(std::move(p));
    }
    s["pairs"] = std::move(pairs);
    sentences.push_back(std::move(s));
  }
  j["sentences"] = std::move(sentences);
  return j.dump(2) + "\n";
}

}  // namespace eas
