#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <json.hpp>

#include "reviewscore/llm/structured.hpp"
#include "reviewscore/llm/templates.hpp"

namespace reviewscore::llm {

struct ReplayMiss : LlmError {
  using LlmError::LlmError;
};
struct TransportError : LlmError {
  using LlmError::LlmError;
};
// Retryable transport failure (connection reset, 429, 5xx).
struct TransientError : TransportError {
  using TransportError::TransportError;
};
struct AuthError : LlmError {
  using LlmError::LlmError;
};
struct ConfigError : LlmError {
  using LlmError::LlmError;
};

struct ModelConfig {
  std::string model_name = "judge-model";
  double temperature = 0.0;
  int max_output_tokens = 4096;
};

enum class ResponseSource { Live, Cache, Replay };

struct LlmResponse {
  std::string text;
  std::string request_hash;
  ResponseSource source = ResponseSource::Live;
};

// Wire plus side-channel prompt metadata; HTTP transports ignore the prompt,
// scripted test transports route on it.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string send(const nlohmann::json& wire_request, const PromptInstance& prompt) = 0;
};

// Chat-completions-compatible HTTP transport. Reads REVIEWSCORE_API_KEY and
// REVIEWSCORE_API_BASE from the environment.
std::shared_ptr<Transport> make_http_transport();

struct GatewayOptions {
  std::string cache_dir;        // "" disables the disk cache
  std::string replay_path;      // transcript to replay; "" means live mode
  std::string transcript_out;   // append-only JSONL record; "" disables
  int max_retries = 3;
  int backoff_base_ms = 100;
  int inflight_cap = 4;
  double rate_per_sec = 16.0;   // token bucket for live calls
  double burst = 16.0;
};

// Stable hash over (model_name, temperature, rendered messages). The output
// token limit is deliberately excluded: truncation limits are operational,
// not semantic.
std::string request_hash(const PromptInstance& prompt, const ModelConfig& cfg);

nlohmann::json wire_request(const PromptInstance& prompt, const ModelConfig& cfg);

class Gateway {
 public:
  explicit Gateway(GatewayOptions opts, std::shared_ptr<Transport> transport = nullptr);
  ~Gateway();

  // Cache-first; replay transcripts answer everything in replay mode; live
  // calls retry transient failures with exponential backoff and are recorded
  // to the cache and the transcript.
  LlmResponse complete(const PromptInstance& prompt, const ModelConfig& cfg);

  std::uint64_t live_calls() const { return live_calls_.load(); }

 private:
  struct Limiter;
  GatewayOptions opts_;
  std::shared_ptr<Transport> transport_;
  std::map<std::string, nlohmann::json> replay_;   // hash -> entry
  std::map<std::string, nlohmann::json> memory_;   // hash -> entry
  std::unique_ptr<Limiter> limiter_;
  std::mutex cache_mutex_;
  std::mutex transcript_mutex_;
  std::atomic<std::uint64_t> live_calls_{0};

  LlmResponse from_entry(const nlohmann::json& entry, const nlohmann::json& wire, const std::string& hash,
                         ResponseSource source);
  void persist(const nlohmann::json& entry, const std::string& hash);
  void append_transcript(const nlohmann::json& entry);
};

// complete() then parse_structured(), re-prompting with the parse error
// appended to the conversation, at most `max_reprompts` times.
struct StructuredResult {
  nlohmann::json record;
  LlmResponse response;
};

StructuredResult complete_structured(Gateway& gw, const PromptInstance& prompt, const ModelConfig& cfg,
                                     const std::string& schema_id, int max_reprompts = 2);

}  // namespace reviewscore::llm
