#pragma once

#include <string>

#include <json.hpp>

#include "reviewscore/llm/templates.hpp"

namespace reviewscore::llm {

// No fenced JSON block in the model output. Carries the raw text so the
// caller can feed it back in a re-prompt.
struct NoJsonBlock : LlmError {
  NoJsonBlock(const std::string& msg, std::string raw) : LlmError(msg), raw_text(std::move(raw)) {}
  std::string raw_text;
};

// The block parsed but violates the schema (missing field, wrong type, value
// out of range).
struct SchemaViolation : LlmError {
  SchemaViolation(const std::string& msg, std::string raw) : LlmError(msg), raw_text(std::move(raw)) {}
  std::string raw_text;
};

// Registered schema ids: point-list, type-choice, verbatim-extract,
// reconstruction, streamline, faithfulness-verdict, score-verdict,
// untrivialness-verdict, kb-choice.
bool has_schema(const std::string& schema_id);

// Extracts the first fenced JSON block (```json ... ``` or a bare fence whose
// body parses as JSON) and validates it against the schema.
nlohmann::json parse_structured(const std::string& text, const std::string& schema_id);

}  // namespace reviewscore::llm
