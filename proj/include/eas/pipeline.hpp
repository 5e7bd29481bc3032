#pragma once

#include <chrono>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eas/backend.hpp"
#include "eas/chunker.hpp"
#include "eas/parser.hpp"
#include "eas/resolver.hpp"

namespace eas {

struct RunConfig {
  std::filesystem::path taxonomy_path;
  std::filesystem::path input_path;
  std::filesystem::path output_path;
  std::optional<std::filesystem::path> report_path;
  BackendConfig backend;
  int max_sentence_retries{3};
  int parallelism{1};
  double temperature{0.0};
  std::chrono::duration<double> request_timeout{30.0};
};

enum class ChunkOutcome { Analyzed, Abandoned };

struct ChunkStatus {
  int index{0};
  ChunkOutcome outcome{ChunkOutcome::Analyzed};
  int retries{0};  // re-sends beyond the first attempt
};

struct SuppressedNote {
  int chunk_index{0};
  int ordinal{0};
  std::string code_text;
  int winner_ordinal{0};
  std::string winner_code_text;
  int rule_ordinal{0};
};

struct DriftNote {
  int chunk_index{0};
  int ordinal{0};
  std::string code_text;
};

struct RunReport {
  std::vector<ChunkStatus> chunks;  // one entry per input chunk
  int known{0};
  int unknown_code{0};
  int malformed_code{0};
  std::vector<SuppressedNote> suppressed;
  std::vector<DriftNote> label_drift;
  std::chrono::milliseconds duration{0};

  int abandoned_count() const;
};

struct TaxonomyInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputUnreadable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OutputUnwritable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BackendFatal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Runs the whole document analysis: chunk, prompt, complete, parse, match
// records to chunks, retry missing sentences, resolve conflicts, write the
// output file (and the report file when configured). Backend calls may run
// concurrently up to config.parallelism; output order always equals input
// chunk order.
RunReport analyze_document(const RunConfig& config);

// Chunks whose normalized text matches no record's normalized original_text.
// Matching is one-to-one; duplicated sentences consume records in order.
std::vector<Chunk> find_missing(const std::vector<Chunk>& sent,
                                const std::vector<AnalysisRecord>& records);

struct OutputFinding {
  std::string code_text;
  std::string span;
  std::string explanation;
  std::optional<int> suppressed_by_rule;
};

struct OutputRecord {
  std::string original_text;
  std::string corrected_text;
  std::vector<OutputFinding> findings;
  bool analysis_failed{false};  // abandoned chunk
};

OutputRecord to_output(const AnalysisRecord& record);
OutputRecord to_output(const AnalysisRecord& record, const ResolutionOutcome& outcome);

// The response grammar, bit-exact: "OT: ", "Corrected: ", numbered finding
// lines or "[No errors]", one blank line between records, LF endings.
// Suppressed findings carry a trailing " [suppressed by rule N]".
std::string render_output(const std::vector<OutputRecord>& records);
void write_output(const std::vector<OutputRecord>& records,
                  const std::filesystem::path& path);

// Report JSON with fixed key order; duration is the only field that varies
// between identical runs.
std::string render_report_json(const RunReport& report);

}  // namespace eas
