#include "eas/prompting.hpp"

#include <utility>

namespace eas {

namespace {

constexpr std::string_view kTextOpen = "<<<";
constexpr std::string_view kTextClose = ">>>";

constexpr std::string_view kWorkedExample =
    "OT: She go to school yesterday.\n"
    "Corrected: She went to school yesterday.\n"
    "1st Error & Reason: GS3A, go, Incorrect verb tense for past time reference";

}  // namespace

std::string_view worked_example() { return kWorkedExample; }

std::string build_system_prompt(const Taxonomy& tax) {
  std::string prompt;
  prompt +=
      "You are a strict error correction tool for written English. You analyze "
      "text against the error taxonomy below, identify every error, and assign "
      "each one an error code taken from the taxonomy. Use only codes defined "
      "in the taxonomy; never invent codes or categories. Apply the taxonomy's "
      "hierarchy rules when errors overlap.\n"
      "\n"
      "Error taxonomy:\n";
  prompt += serialize_taxonomy(tax);
  return prompt;
}

std::string build_user_prompt(const Chunk& chunk) {
  std::string prompt;
  prompt += "Analyze the text between the ";
  prompt += kTextOpen;
  prompt += " and ";
  prompt += kTextClose;
  prompt += " markers for errors.\n\nText:\n";
  prompt += kTextOpen;
  prompt += "\n";
  prompt += chunk.text;
  prompt += "\n";
  prompt += kTextClose;
  prompt += "\n\n";
  prompt +=
      "Respond in exactly this format, with no commentary before or after:\n"
      "OT: <the original text, echoed verbatim>\n"
      "Corrected: <the corrected text>\n"
      "1st Error & Reason: <error code>, <text span>, <brief explanation>\n"
      "2nd Error & Reason: <error code>, <text span>, <brief explanation>\n"
      "\n"
      "Number every error in order (1st, 2nd, 3rd, 4th, ...). If the text "
      "contains no errors, write the single line [No errors] in place of the "
      "numbered errors.\n"
      "\n"
      "Example of the exact format expected:\n";
  prompt += kWorkedExample;
  prompt += "\n";
  return prompt;
}

PromptPair build_prompt_pair(std::string system_text, const Chunk& chunk,
                             double temperature, std::optional<std::string> model_hint) {
  PromptPair pair;
  pair.system_text = std::move(system_text);
  pair.user_text = build_user_prompt(chunk);
  pair.temperature = temperature;
  pair.model_hint = std::move(model_hint);
  return pair;
}

std::optional<std::string> extract_chunk_text(std::string_view user_text) {
  const std::string open = std::string(kTextOpen) + "\n";
  std::size_t begin = user_text.find(open);
  if (begin == std::string_view::npos) return std::nullopt;
  begin += open.size();
  const std::string close = std::string("\n") + std::string(kTextClose);
  std::size_t end = user_text.find(close, begin);
  if (end == std::string_view::npos) return std::nullopt;
  return std::string(user_text.substr(begin, end - begin));
}

}  // namespace eas
