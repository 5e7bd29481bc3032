#include "eas/fixtures.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "eas/backend.hpp"
#include "eas/chunker.hpp"
#include "eas/parser.hpp"
#include "eas/pipeline.hpp"
#include "eas/scorer.hpp"

#ifndef EAS_FIXTURES_DIR
#define EAS_FIXTURES_DIR "fixtures"
#endif

namespace eas {

FixturePaths FixturePaths::defaults() { return FixturePaths{EAS_FIXTURES_DIR}; }

namespace {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

std::vector<Diagnostic> verify_fixture_integrity(const FixturePaths& paths) {
  std::vector<Diagnostic> diagnostics;
  const auto fail = [&](const std::string& subject, const std::string& message) {
    diagnostics.push_back({Severity::Error, subject, message});
  };

  // Seed taxonomy loads and validates clean.
  Taxonomy tax;
  bool tax_ok = false;
  try {
    tax = load_taxonomy_file(paths.taxonomy());
    tax_ok = true;
    for (const auto& d : validate(tax)) {
      fail(paths.taxonomy().filename().string(), d.subject + ": " + d.message);
    }
  } catch (const std::runtime_error& e) {
    fail(paths.taxonomy().filename().string(), e.what());
  }

  // Response keys line up one-to-one with the chunker's output.
  std::vector<Chunk> chunks;
  const auto input = read_file(paths.input());
  if (!input) {
    fail(paths.input().filename().string(), "cannot read input fixture");
  } else {
    chunks = chunk_text(*input);
  }

  FixtureMap responses;
  try {
    responses = load_fixtures(paths.responses());
  } catch (const BackendError& e) {
    fail(paths.responses().filename().string(), e.what());
  }
  if (input) {
    if (responses.size() != chunks.size()) {
      fail(paths.responses().filename().string(),
           "expected " + std::to_string(chunks.size()) + " response entries, found " +
               std::to_string(responses.size()));
    }
    for (const auto& chunk : chunks) {
      const std::string key = normalize_sentence(chunk.text);
      auto it = responses.find(key);
      if (it == responses.end()) {
        fail(paths.responses().filename().string(), "no response for chunk: \"" + key + "\"");
        continue;
      }
      try {
        auto records = parse_response(it->second);
        if (records.size() != 1 ||
            normalize_sentence(records[0].original_text) != key) {
          fail(paths.responses().filename().string(),
               "response block does not echo its OT: \"" + key + "\"");
        }
      } catch (const ResponseFormatError& e) {
        fail(paths.responses().filename().string(),
             "response for \"" + key + "\" does not parse: " + e.what());
      }
    }
  }

  // Golden output: 8 records, 25 findings, byte-stable round trip.
  std::vector<AnalysisRecord> golden_records;
  const auto golden = read_file(paths.golden_output());
  if (!golden) {
    fail(paths.golden_output().filename().string(), "cannot read golden output");
  } else {
    try {
      golden_records = parse_response(*golden);
      int findings = 0;
      for (const auto& record : golden_records) {
        findings += static_cast<int>(record.findings.size());
      }
      if (golden_records.size() != 8) {
        fail(paths.golden_output().filename().string(),
             "expected 8 records, found " + std::to_string(golden_records.size()));
      }
      if (findings != 25) {
        fail(paths.golden_output().filename().string(),
             "expected 25 findings, found " + std::to_string(findings));
      }
      std::vector<OutputRecord> rendered;
      for (const auto& record : golden_records) rendered.push_back(to_output(record));
      if (render_output(rendered) != *golden) {
        fail(paths.golden_output().filename().string(),
             "golden output does not round-trip byte-identically");
      }
    } catch (const ResponseFormatError& e) {
      fail(paths.golden_output().filename().string(), e.what());
    }
  }

  // Gold entries: codes resolve, sentences covered, verdicts tally 27/3/2.
  try {
    const auto gold = load_gold(paths.gold());
    std::set<std::string> prediction_keys;
    for (const auto& record : golden_records) {
      prediction_keys.insert(normalize_sentence(record.original_text));
    }
    int correct = 0;
    int partial = 0;
    int incorrect = 0;
    for (const auto& entry : gold) {
      if (!golden_records.empty() && !prediction_keys.count(entry.sentence)) {
        fail(paths.gold().filename().string(),
             "gold sentence absent from golden output: \"" + entry.sentence + "\"");
      }
      for (const auto& code : entry.expected_codes) {
        if (tax_ok && !tax.find(code)) {
          fail(paths.gold().filename().string(),
               "expected code does not resolve in the seed taxonomy: " + render(code));
        }
      }
      for (const auto& verdict : entry.verdicts) {
        switch (verdict.verdict) {
          case Verdict::Correct: ++correct; break;
          case Verdict::Partial: ++partial; break;
          case Verdict::Incorrect: ++incorrect; break;
        }
      }
    }
    if (correct != 27 || partial != 3 || incorrect != 2) {
      fail(paths.gold().filename().string(),
           "verdicts must tally 27/3/2, found " + std::to_string(correct) + "/" +
               std::to_string(partial) + "/" + std::to_string(incorrect));
    }
  } catch (const std::runtime_error& e) {
    fail(paths.gold().filename().string(), e.what());
  }

  if (!read_file(paths.input_full())) {
    fail(paths.input_full().filename().string(), "cannot read full transcript fixture");
  }
  return diagnostics;
}

}  // namespace eas
