#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "eas/chunker.hpp"
#include "eas/taxonomy.hpp"

namespace eas {

// The two-part prompt sent to the completion backend. temperature travels
// to the backend unchanged; 0.0 keeps responses deterministic.
struct PromptPair {
  std::string system_text;
  std::string user_text;
  double temperature{0.0};
  std::optional<std::string> model_hint;
};

// System message: strict-error-correction role, the serialized taxonomy
// embedded exactly once, and a codes-only instruction. Serialize once per
// run and reuse it across chunks.
std::string build_system_prompt(const Taxonomy& tax);

// User message: the chunk text between extraction markers, the response
// skeleton (OT: / Corrected: / numbered error lines), the [No errors]
// convention, and one worked format example.
std::string build_user_prompt(const Chunk& chunk);

PromptPair build_prompt_pair(std::string system_text, const Chunk& chunk,
                             double temperature = 0.0,
                             std::optional<std::string> model_hint = std::nullopt);

// The worked example embedded in every user prompt. Parseable by
// parse_response; its sentence is outside the shipped test corpus.
std::string_view worked_example();

// Recovers the chunk text between the prompt's extraction markers. Used by
// the fixture backend to key its canned responses.
std::optional<std::string> extract_chunk_text(std::string_view user_text);

}  // namespace eas
