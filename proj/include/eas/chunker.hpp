#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace eas {

// One sentence of input, with where it came from.
struct Chunk {
  int index{0};                        // 0-based, consecutive in document order
  std::string text;                    // trimmed sentence text
  std::optional<std::string> speaker;  // e.g. "A", "B", "Title"
  int source_line{1};                  // 1-based
  int source_offset{0};                // 0-based offset of the sentence start within its line

  bool operator==(const Chunk&) const = default;
};

struct ChunkerOptions {
  // Terminators followed by one of these do not end a sentence.
  std::vector<std::string> abbreviations{"Mr.", "Mrs.", "Dr.", "e.g.", "i.e."};
};

// Splits a document into per-sentence chunks. Boundaries are . ? ! followed
// by whitespace or end of line; semicolons never split; a '?' followed by a
// lowercase letter does not split; lines starting with a word and ':' are
// speaker labels, stripped from the text and recorded. CRLF is normalized
// to LF first. Empty input yields an empty list.
std::vector<Chunk> chunk_text(std::string_view document,
                              const ChunkerOptions& options = {});

// Collapses internal whitespace runs to single spaces and trims the ends.
// Idempotent; leaves punctuation and case untouched.
std::string normalize_sentence(std::string_view text);

}  // namespace eas
