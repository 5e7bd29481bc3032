#include "eas/chunker.hpp"

#include <cctype>

namespace eas {

namespace {

bool is_terminator(char c) { return c == '.' || c == '?' || c == '!'; }

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  std::size_t begin = 0;
  while (begin < s.size() && is_space(s[begin])) ++begin;
  std::size_t end = s.size();
  while (end > begin && is_space(s[end - 1])) --end;
  return s.substr(begin, end - begin);
}

// "Title:" / "A:" style prefix; returns the label length including the colon.
std::size_t label_length(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i]))) ++i;
  if (i == 0 || i >= line.size() || line[i] != ':') return 0;
  return i + 1;
}

// Does text ending at position `end` (exclusive, past the terminator) finish
// with a guarded abbreviation?
bool ends_with_abbreviation(std::string_view line, std::size_t end,
                            const std::vector<std::string>& abbreviations) {
  for (const auto& abbr : abbreviations) {
    if (end < abbr.size()) continue;
    if (line.compare(end - abbr.size(), abbr.size(), abbr) != 0) continue;
    // The abbreviation must start a word.
    if (end == abbr.size() || is_space(line[end - abbr.size() - 1])) return true;
  }
  return false;
}

}  // namespace

std::vector<Chunk> chunk_text(std::string_view document, const ChunkerOptions& options) {
  std::string normalized;
  normalized.reserve(document.size());
  for (std::size_t i = 0; i < document.size(); ++i) {
    if (document[i] == '\r' && i + 1 < document.size() && document[i + 1] == '\n') continue;
    normalized += document[i] == '\r' ? '\n' : document[i];
  }

  std::vector<Chunk> chunks;
  int line_no = 0;
  std::size_t line_start = 0;
  while (line_start <= normalized.size()) {
    std::size_t line_end = normalized.find('\n', line_start);
    if (line_end == std::string::npos) line_end = normalized.size();
    std::string_view line(normalized.data() + line_start, line_end - line_start);
    ++line_no;

    std::optional<std::string> speaker;
    std::size_t content_begin = 0;
    if (std::size_t len = label_length(line); len > 0) {
      speaker = std::string(line.substr(0, len - 1));
      content_begin = len;
    }

    std::size_t sentence_begin = content_begin;
    for (std::size_t i = content_begin; i <= line.size(); ++i) {
      bool boundary = false;
      if (i == line.size()) {
        boundary = true;  // end of line always closes the chunk
      } else if (is_terminator(line[i]) && (i + 1 == line.size() || is_space(line[i + 1]))) {
        if (ends_with_abbreviation(line, i + 1, options.abbreviations)) {
          boundary = false;
        } else if (line[i] == '?') {
          // A '?' followed by a lowercase letter stays inside the sentence.
          std::size_t next = i + 1;
          while (next < line.size() && is_space(line[next])) ++next;
          boundary = !(next < line.size() &&
                       std::islower(static_cast<unsigned char>(line[next])));
        } else {
          boundary = true;
        }
        if (boundary) ++i;  // include the terminator
      }
      if (!boundary) continue;

      std::string_view piece = line.substr(sentence_begin, i - sentence_begin);
      std::string_view trimmed = trim(piece);
      if (!trimmed.empty()) {
        Chunk chunk;
        chunk.index = static_cast<int>(chunks.size());
        chunk.text = std::string(trimmed);
        chunk.speaker = speaker;
        chunk.source_line = line_no;
        chunk.source_offset =
            static_cast<int>(sentence_begin + (trimmed.data() - piece.data()));
        chunks.push_back(std::move(chunk));
      }
      sentence_begin = i;
      if (i < line.size()) --i;  // outer loop re-increments
    }

    if (line_end == normalized.size()) break;
    line_start = line_end + 1;
  }
  return chunks;
}

std::string normalize_sentence(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out += ' ';
      pending_space = false;
    }
    out += c;
  }
  return out;
}

}  // namespace eas
