#include "reviewscore/llm/gateway.hpp"

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

namespace reviewscore::llm {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::int64_t now_epoch_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

nlohmann::json wire_request(const PromptInstance& prompt, const ModelConfig& cfg) {
  json messages = json::array();
  for (const Message& m : prompt.messages) messages.push_back({{"role", m.role}, {"content", m.content}});
  return json{{"model", cfg.model_name}, {"temperature", cfg.temperature}, {"messages", messages}};
}

std::string request_hash(const PromptInstance& prompt, const ModelConfig& cfg) {
  return hex64(fnv1a64(wire_request(prompt, cfg).dump()));
}

// --- HTTP transport ---------------------------------------------------------

namespace {

class HttpTransport : public Transport {
 public:
  HttpTransport() {
    const char* base = std::getenv("REVIEWSCORE_API_BASE");
    const char* key = std::getenv("REVIEWSCORE_API_KEY");
    if (!base || !*base) throw ConfigError("REVIEWSCORE_API_BASE is not set");
    if (!key || !*key) throw AuthError("REVIEWSCORE_API_KEY is not set");
    base_ = base;
    key_ = key;
  }

  std::string send(const json& wire, const PromptInstance&) override;

 private:
  std::string base_;
  std::string key_;
};

}  // namespace

std::shared_ptr<Transport> make_http_transport() { return std::make_shared<HttpTransport>(); }

// --- limiter ----------------------------------------------------------------

struct Gateway::Limiter {
  explicit Limiter(const GatewayOptions& opts)
      : inflight_cap(opts.inflight_cap), tokens(opts.burst), rate(opts.rate_per_sec), burst(opts.burst),
        last_refill(std::chrono::steady_clock::now()) {}

  int inflight_cap;
  int inflight = 0;
  double tokens;
  double rate;
  double burst;
  std::chrono::steady_clock::time_point last_refill;
  std::mutex mutex;
  std::condition_variable cv;

  void acquire() {
    std::unique_lock<std::mutex> lock(mutex);
    cv.wait(lock, [&] { return inflight < inflight_cap; });
    ++inflight;
    while (true) {
      auto now = std::chrono::steady_clock::now();
      tokens = std::min(burst, tokens + rate * std::chrono::duration<double>(now - last_refill).count());
      last_refill = now;
      if (tokens >= 1.0) {
        tokens -= 1.0;
        return;
      }
      auto wait = std::chrono::duration<double>((1.0 - tokens) / rate);
      lock.unlock();
      std::this_thread::sleep_for(wait);
      lock.lock();
    }
  }

  void release() {
    {
      std::lock_guard<std::mutex> lock(mutex);
      --inflight;
    }
    cv.notify_one();
  }
};

// --- gateway ----------------------------------------------------------------

Gateway::Gateway(GatewayOptions opts, std::shared_ptr<Transport> transport)
    : opts_(std::move(opts)), transport_(std::move(transport)), limiter_(std::make_unique<Limiter>(opts_)) {
  if (!opts_.replay_path.empty()) {
    std::ifstream in(opts_.replay_path);
    if (!in) throw ConfigError("cannot open replay transcript: " + opts_.replay_path);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json entry = json::parse(line, nullptr, false);
      if (entry.is_discarded() || !entry.contains("request_hash")) continue;
      replay_[entry.at("request_hash").get<std::string>()] = entry;
    }
  }
  if (!opts_.cache_dir.empty()) fs::create_directories(opts_.cache_dir);
  if (!opts_.transcript_out.empty()) {
    fs::path p(opts_.transcript_out);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream probe(opts_.transcript_out, std::ios::app);
    if (!probe) throw ConfigError("cannot open transcript for append: " + opts_.transcript_out);
  }
}

Gateway::~Gateway() = default;

LlmResponse Gateway::from_entry(const json& entry, const json& wire, const std::string& hash, ResponseSource source) {
  // The stored request is compared byte-for-byte: a hash hit with a different
  // request is a collision, which the contract declares an error rather than
  // silently serving the wrong bytes.
  if (entry.at("request") != wire)
    throw TransportError("request hash collision detected for " + hash);
  LlmResponse out;
  out.text = entry.at("response").at("text").get<std::string>();
  out.request_hash = hash;
  out.source = source;
  return out;
}

void Gateway::persist(const json& entry, const std::string& hash) {
  if (opts_.cache_dir.empty()) return;
  fs::path final_path = fs::path(opts_.cache_dir) / (hash + ".json");
  fs::path tmp_path = fs::path(opts_.cache_dir) / (hash + ".json.tmp." + std::to_string(now_epoch_ms()));
  {
    std::ofstream out(tmp_path);
    out << entry.dump(2) << "\n";
  }
  fs::rename(tmp_path, final_path);  // atomic publish
}

void Gateway::append_transcript(const json& entry) {
  if (opts_.transcript_out.empty()) return;
  std::lock_guard<std::mutex> lock(transcript_mutex_);
  std::ofstream out(opts_.transcript_out, std::ios::app);
  if (!out) throw ConfigError("cannot append to transcript: " + opts_.transcript_out);
  out << entry.dump() << "\n";
}

LlmResponse Gateway::complete(const PromptInstance& prompt, const ModelConfig& cfg) {
  const json wire = wire_request(prompt, cfg);
  const std::string hash = hex64(fnv1a64(wire.dump()));

  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto mem = memory_.find(hash);
    if (mem != memory_.end()) return from_entry(mem->second, wire, hash, ResponseSource::Cache);
  }
  if (!opts_.cache_dir.empty()) {
    fs::path path = fs::path(opts_.cache_dir) / (hash + ".json");
    std::ifstream in(path);
    if (in) {
      json entry = json::parse(in, nullptr, false);
      if (!entry.is_discarded()) {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        memory_[hash] = entry;
        return from_entry(entry, wire, hash, ResponseSource::Cache);
      }
    }
  }

  if (!opts_.replay_path.empty()) {
    auto it = replay_.find(hash);
    if (it == replay_.end()) {
      throw ReplayMiss("request " + hash + " not found in replay transcript (fixture drift?); template '" +
                       prompt.template_id + "'");
    }
    return from_entry(it->second, wire, hash, ResponseSource::Replay);
  }

  if (!transport_) throw ConfigError("no transport configured for live completion");

  std::string text;
  int attempt = 0;
  while (true) {
    limiter_->acquire();
    ++live_calls_;
    try {
      text = transport_->send(wire, prompt);
      limiter_->release();
      break;
    } catch (const TransientError& e) {
      limiter_->release();
      if (attempt >= opts_.max_retries)
        throw TransportError(std::string("transport failed after ") + std::to_string(attempt + 1) +
                             " attempts: " + e.what());
      std::this_thread::sleep_for(std::chrono::milliseconds(opts_.backoff_base_ms * (1ll << attempt)));
      ++attempt;
    } catch (...) {
      limiter_->release();
      throw;
    }
  }

  json entry{{"request_hash", hash}, {"request", wire}, {"response", {{"text", text}}}, {"timestamp", now_epoch_ms()}};
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto existing = memory_.find(hash);
    if (existing != memory_.end() && existing->second.at("request") != wire)
      throw TransportError("request hash collision detected for " + hash);
    memory_[hash] = entry;
  }
  persist(entry, hash);
  append_transcript(entry);

  LlmResponse out;
  out.text = text;
  out.request_hash = hash;
  out.source = ResponseSource::Live;
  return out;
}

StructuredResult complete_structured(Gateway& gw, const PromptInstance& prompt, const ModelConfig& cfg,
                                     const std::string& schema_id, int max_reprompts) {
  PromptInstance current = prompt;
  for (int attempt = 0;; ++attempt) {
    LlmResponse resp = gw.complete(current, cfg);
    try {
      return {parse_structured(resp.text, schema_id), resp};
    } catch (const LlmError& e) {
      if (attempt >= max_reprompts) throw;
      current.messages.push_back({"assistant", resp.text});
      current.messages.push_back(
          {"user", std::string("Your reply could not be used: ") + e.what() +
                       ". Reply again with a single fenced ```json code block containing exactly the required fields."});
    }
  }
}

// --- HTTP implementation (kept at the bottom: only live runs reach it) ------

}  // namespace reviewscore::llm

#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#include <httplib.h>

namespace reviewscore::llm {

namespace {

struct ParsedBase {
  std::string host;  // scheme://host[:port]
  std::string path_prefix;
};

ParsedBase split_base(const std::string& base) {
  // httplib::Client accepts scheme://host:port; path must be split off.
  std::size_t scheme = base.find("://");
  std::size_t path_start = scheme == std::string::npos ? base.find('/') : base.find('/', scheme + 3);
  if (path_start == std::string::npos) return {base, ""};
  std::string prefix = base.substr(path_start);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {base.substr(0, path_start), prefix};
}

}  // namespace

std::string HttpTransport::send(const json& wire, const PromptInstance&) {
  ParsedBase parsed = split_base(base_);
  httplib::Client client(parsed.host);
  client.set_connection_timeout(30);
  client.set_read_timeout(120);
  httplib::Headers headers{{"Authorization", "Bearer " + key_}};
  json body = wire;
  auto res = client.Post(parsed.path_prefix + "/chat/completions", headers, body.dump(), "application/json");
  if (!res) throw TransientError("connection failure: " + httplib::to_string(res.error()));
  if (res->status == 401 || res->status == 403) throw AuthError("authentication rejected (" + std::to_string(res->status) + ")");
  if (res->status == 429 || res->status >= 500)
    throw TransientError("transient HTTP status " + std::to_string(res->status));
  if (res->status != 200) throw TransportError("HTTP status " + std::to_string(res->status) + ": " + res->body);
  json parsed_body = json::parse(res->body, nullptr, false);
  if (parsed_body.is_discarded() || !parsed_body.contains("choices") || parsed_body.at("choices").empty())
    throw TransportError("malformed chat-completions response body");
  return parsed_body.at("choices").at(0).at("message").at("content").get<std::string>();
}

}  // namespace reviewscore::llm
