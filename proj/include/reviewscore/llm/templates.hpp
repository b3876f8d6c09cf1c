#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace reviewscore::llm {

struct LlmError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnknownTemplate : LlmError {
  using LlmError::LlmError;
};

struct MissingBinding : LlmError {
  using LlmError::LlmError;
};

struct Message {
  std::string role;  // "system", "user", "assistant"
  std::string content;

  friend bool operator==(const Message& a, const Message& b) { return a.role == b.role && a.content == b.content; }
};

// A rendered prompt. template_id and bindings travel with the messages as
// metadata (they are not part of the request hash).
struct PromptInstance {
  std::string template_id;
  std::vector<Message> messages;
  std::map<std::string, std::string> bindings;
};

// Registered template ids. Placeholders use {{name}}; rendering is pure and
// byte-deterministic, every placeholder must be bound.
std::vector<std::string> template_ids();

bool has_template(const std::string& template_id);

PromptInstance render(const std::string& template_id, const std::map<std::string, std::string>& bindings);

}  // namespace reviewscore::llm
