#include "eas/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

#include "eas/prompting.hpp"

namespace eas {

using ordered_json = nlohmann::ordered_json;

int RunReport::abandoned_count() const {
  return static_cast<int>(std::count_if(chunks.begin(), chunks.end(), [](const ChunkStatus& c) {
    return c.outcome == ChunkOutcome::Abandoned;
  }));
}

namespace {

struct MatchResult {
  std::vector<std::optional<AnalysisRecord>> assigned;  // parallel to `sent`
  std::vector<Chunk> missing;
};

// One-to-one by normalized text; duplicated sentences consume records in order.
MatchResult match_chunks(const std::vector<Chunk>& sent,
                         const std::vector<AnalysisRecord>& records) {
  std::vector<std::string> keys(records.size());
  for (std::size_t j = 0; j < records.size(); ++j) {
    keys[j] = normalize_sentence(records[j].original_text);
  }
  std::vector<bool> used(records.size(), false);

  MatchResult result;
  result.assigned.resize(sent.size());
  for (std::size_t i = 0; i < sent.size(); ++i) {
    const std::string key = normalize_sentence(sent[i].text);
    bool found = false;
    for (std::size_t j = 0; j < records.size(); ++j) {
      if (used[j] || keys[j] != key) continue;
      used[j] = true;
      result.assigned[i] = records[j];
      found = true;
      break;
    }
    if (!found) result.missing.push_back(sent[i]);
  }
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputUnreadable("cannot open input file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs complete() for every chunk, at most `parallelism` in flight. Results
// come back in chunk order; transient failures leave a nullopt slot, fatal
// backend errors propagate after the window drains.
std::vector<std::optional<std::string>> collect_responses(
    const CompletionClient& client, const std::string& system_text,
    const std::vector<Chunk>& chunks, const RunConfig& config) {
  std::vector<std::optional<std::string>> raws(chunks.size());
  std::string fatal_message;
  bool fatal = false;

  using Slot = std::pair<std::size_t, std::future<std::string>>;
  std::vector<Slot> window;
  const auto drain_one = [&] {
    auto& [index, future] = window.front();
    try {
      raws[index] = future.get();
    } catch (const AuthError& e) {
      if (!fatal) { fatal = true; fatal_message = e.what(); }
    } catch (const MissingApiKey& e) {
      if (!fatal) { fatal = true; fatal_message = e.what(); }
    } catch (const InvalidBackendConfig& e) {
      if (!fatal) { fatal = true; fatal_message = e.what(); }
    } catch (const FixtureMiss&) {
    } catch (const TransientExhausted&) {
    } catch (const BackendError& e) {
      if (!fatal) { fatal = true; fatal_message = e.what(); }
    }
    window.erase(window.begin());
  };

  const std::size_t in_flight = std::max(1, config.parallelism);
  for (std::size_t i = 0; i < chunks.size(); ++i) {
    const Chunk& chunk = chunks[i];
    auto task = [&client, &system_text, &chunk, &config] {
      CompletionRequest request;
      request.prompt = build_prompt_pair(system_text, chunk, config.temperature);
      request.chunk_index = chunk.index;
      request.timeout = config.request_timeout;
      return client.complete(request).raw_text;
    };
    window.emplace_back(i, std::async(std::launch::async, task));
    if (window.size() >= in_flight) drain_one();
  }
  while (!window.empty()) drain_one();

  if (fatal) throw BackendFatal(fatal_message);
  return raws;
}

}  // namespace

std::vector<Chunk> find_missing(const std::vector<Chunk>& sent,
                                const std::vector<AnalysisRecord>& records) {
  return match_chunks(sent, records).missing;
}

OutputRecord to_output(const AnalysisRecord& record) {
  OutputRecord out;
  out.original_text = record.original_text;
  out.corrected_text = record.corrected_text;
  for (const auto& finding : record.findings) {
    out.findings.push_back(
        OutputFinding{finding.code_text, finding.span, finding.explanation, std::nullopt});
  }
  return out;
}

OutputRecord to_output(const AnalysisRecord& record, const ResolutionOutcome& outcome) {
  struct Entry {
    const ErrorFinding* finding;
    std::optional<int> rule;
  };
  std::vector<Entry> entries;
  for (const auto& finding : outcome.kept) entries.push_back({&finding, std::nullopt});
  for (const auto& item : outcome.suppressed) {
    entries.push_back({&item.finding, item.rule_ordinal});
  }
  const auto is_sp = [&](const ErrorFinding& f) {
    return outcome.spelling_first && f.code && f.code->tier1 == Tier1::SP;
  };
  std::stable_sort(entries.begin(), entries.end(), [&](const Entry& a, const Entry& b) {
    if (is_sp(*a.finding) != is_sp(*b.finding)) return is_sp(*a.finding);
    return a.finding->ordinal < b.finding->ordinal;
  });

  OutputRecord out;
  out.original_text = record.original_text;
  out.corrected_text = record.corrected_text;
  for (const auto& entry : entries) {
    out.findings.push_back(OutputFinding{entry.finding->code_text, entry.finding->span,
                                         entry.finding->explanation, entry.rule});
  }
  return out;
}

std::string render_output(const std::vector<OutputRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const OutputRecord& record = records[i];
    if (i > 0) out += "\n";
    out += "OT: " + record.original_text + "\n";
    if (record.analysis_failed) {
      out += "Corrected: [ANALYSIS FAILED]\n";
      continue;
    }
    out += "Corrected: " + record.corrected_text + "\n";
    if (record.findings.empty()) {
      out += "[No errors]\n";
      continue;
    }
    for (std::size_t k = 0; k < record.findings.size(); ++k) {
      const OutputFinding& f = record.findings[k];
      out += render_ordinal(static_cast<int>(k) + 1) + " Error & Reason: " + f.code_text +
             ", " + f.span + ", " + f.explanation;
      if (f.suppressed_by_rule) {
        out += " [suppressed by rule " + std::to_string(*f.suppressed_by_rule) + "]";
      }
      out += "\n";
    }
  }
  return out;
}

void write_output(const std::vector<OutputRecord>& records,
                  const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputUnwritable("cannot open output file: " + path.string());
  out << render_output(records);
  if (!out) throw OutputUnwritable("cannot write output file: " + path.string());
}

std::string render_report_json(const RunReport& report) {
  ordered_json j = ordered_json::object();
  ordered_json chunks = ordered_json::array();
  for (const auto& chunk : report.chunks) {
    ordered_json c = ordered_json::object();
    c["index"] = chunk.index;
    c["status"] = chunk.outcome == ChunkOutcome::Analyzed ? "analyzed" : "abandoned";
    c["retries"] = chunk.retries;
    chunks.push_back(std::move(c));
  }
  j["chunks"] = std::move(chunks);

  ordered_json counts = ordered_json::object();
  counts["known"] = report.known;
  counts["unknown_code"] = report.unknown_code;
  counts["malformed_code"] = report.malformed_code;
  j["code_status_counts"] = std::move(counts);

  ordered_json suppressed = ordered_json::array();
  for (const auto& note : report.suppressed) {
    ordered_json s = ordered_json::object();
    s["chunk"] = note.chunk_index;
    s["ordinal"] = note.ordinal;
    s["code"] = note.code_text;
    s["winner_ordinal"] = note.winner_ordinal;
    s["winner_code"] = note.winner_code_text;
    s["rule"] = note.rule_ordinal;
    suppressed.push_back(std::move(s));
  }
  j["suppressed"] = std::move(suppressed);

  ordered_json drift = ordered_json::array();
  for (const auto& note : report.label_drift) {
    ordered_json d = ordered_json::object();
    d["chunk"] = note.chunk_index;
    d["ordinal"] = note.ordinal;
    d["code"] = note.code_text;
    drift.push_back(std::move(d));
  }
  j["label_drift"] = std::move(drift);

  j["duration_ms"] = report.duration.count();
  return j.dump(2) + "\n";
}

RunReport analyze_document(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();

  Taxonomy tax;
  try {
    tax = load_taxonomy_file(config.taxonomy_path);
  } catch (const std::runtime_error& e) {
    throw TaxonomyInvalid(e.what());
  }
  for (const auto& diagnostic : validate(tax)) {
    if (diagnostic.severity == Severity::Error) {
      throw TaxonomyInvalid(diagnostic.subject + ": " + diagnostic.message);
    }
  }

  const std::string document = read_file(config.input_path);
  const std::vector<Chunk> chunks = chunk_text(document);

  CompletionClient client = [&] {
    try {
      return CompletionClient(config.backend);
    } catch (const BackendError& e) {
      throw BackendFatal(e.what());
    }
  }();

  const std::string system_text = build_system_prompt(tax);  // cached once per run

  std::vector<std::optional<AnalysisRecord>> analyzed(chunks.size());
  std::vector<int> participation(chunks.size(), 0);
  std::vector<Chunk> pending = chunks;

  for (int round = 0; round <= config.max_sentence_retries && !pending.empty(); ++round) {
    for (const Chunk& chunk : pending) ++participation[chunk.index];

    const auto raws = collect_responses(client, system_text, pending, config);

    std::vector<AnalysisRecord> pooled;
    for (const auto& raw : raws) {
      if (!raw) continue;
      try {
        auto records = parse_response(*raw);
        pooled.insert(pooled.end(), std::make_move_iterator(records.begin()),
                      std::make_move_iterator(records.end()));
      } catch (const ResponseFormatError&) {
        // Unparseable responses leave their sentences missing; they are
        // re-sent with the next round.
      }
    }

    MatchResult matched = match_chunks(pending, pooled);
    for (std::size_t i = 0; i < pending.size(); ++i) {
      if (matched.assigned[i]) {
        analyzed[pending[i].index] = std::move(matched.assigned[i]);
      }
    }
    pending = std::move(matched.missing);
  }

  RunReport report;
  std::vector<OutputRecord> outputs;
  outputs.reserve(chunks.size());
  for (const Chunk& chunk : chunks) {
    ChunkStatus status;
    status.index = chunk.index;
    status.retries = std::max(0, participation[chunk.index] - 1);

    if (!analyzed[chunk.index]) {
      status.outcome = ChunkOutcome::Abandoned;
      report.chunks.push_back(status);
      OutputRecord failed;
      failed.original_text = chunk.text;
      failed.analysis_failed = true;
      outputs.push_back(std::move(failed));
      continue;
    }

    status.outcome = ChunkOutcome::Analyzed;
    report.chunks.push_back(status);
    const AnalysisRecord& record = *analyzed[chunk.index];

    for (const auto& finding : record.findings) {
      const CodeStatusReport code_report = classify_code_status(tax, finding);
      switch (code_report.status) {
        case CodeStatus::Known: ++report.known; break;
        case CodeStatus::UnknownCode: ++report.unknown_code; break;
        case CodeStatus::MalformedCode: ++report.malformed_code; break;
      }
      if (code_report.label_drift) {
        report.label_drift.push_back(DriftNote{chunk.index, finding.ordinal, finding.code_text});
      }
    }

    ResolutionOutcome outcome = resolve_conflicts(tax, record);
    for (const auto& suppression : outcome.suppressed) {
      report.suppressed.push_back(SuppressedNote{chunk.index, suppression.finding.ordinal,
                                                 suppression.finding.code_text,
                                                 suppression.winner_ordinal,
                                                 suppression.winner_code_text,
                                                 suppression.rule_ordinal});
    }
    outputs.push_back(to_output(record, outcome));
  }

  write_output(outputs, config.output_path);

  report.duration = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  if (config.report_path) {
    std::ofstream out(*config.report_path, std::ios::binary);
    if (!out) throw OutputUnwritable("cannot open report file: " + config.report_path->string());
    out << render_report_json(report);
  }
  return report;
}

}  // namespace eas
