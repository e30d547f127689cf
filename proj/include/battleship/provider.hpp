#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "battleship/prompts.hpp"

namespace battleship {

// ---------------------------------------------------------------------------
// Chat-completion providers. The HTTP provider speaks a conventional
// chat-completions wire format; the replay provider serves canned fixtures
// so runs are deterministic without network access; the caching wrapper
// stores completions on disk keyed by a request digest.
// ---------------------------------------------------------------------------

// How role labels reach the model: structured message metadata, or folded
// into one text prompt via render_prepended().
enum class RoleEncoding : std::uint8_t { Metadata, PrependedText };
RoleEncoding parse_role_encoding(const std::string& text);
const char* role_encoding_name(RoleEncoding encoding);

struct ProviderSpec {
  std::string endpoint;  // base URL, e.g. "http://127.0.0.1:8080"
  std::string api_path = "/v1/chat/completions";
  std::string model;
  // Decoding defaults are ours, not prescribed: temperature 1.0, top_p and
  // max_tokens unset. They are folded into the request digest and recorded
  // in run manifests.
  double temperature = 1.0;
  std::optional<double> top_p;
  std::optional<int> max_tokens;
  RoleEncoding role_encoding = RoleEncoding::Metadata;
  std::string api_key_env = "BATTLESHIP_API_KEY";
  int max_in_flight = 4;
  int max_retries = 3;
  double backoff_seconds = 0.5;
};

struct CompletionRequest {
  std::vector<ChatMessage> messages;
  int n = 1;
  // Replay bookkeeping: which stream this request belongs to and the first
  // fixture line to serve. Not part of the digest.
  std::string purpose;
  std::string board_id;
  int offset = 0;
};

class ChatProvider {
 public:
  virtual ~ChatProvider() = default;
  // Returns exactly n completions (untrimmed). Throws ProviderError on
  // transport failure or exhausted fixtures.
  virtual std::vector<std::string> complete(const CompletionRequest& req) = 0;
  virtual std::string describe() const = 0;
};

std::string sha256_hex(const std::string& bytes);

// Digest over everything that determines the completion distribution:
// endpoint, model, decoding parameters, role encoding, and every message
// byte. Deliberately excludes n, so asking for more samples extends the
// same cache entry.
std::string request_digest(const ProviderSpec& spec,
                           const std::vector<ChatMessage>& messages);

// Serves completions from a JSONL fixture file. Each line holds one
// completion keyed either by request digest or by (board_id, purpose):
//   {"digest": "...", "completion": "..."}
//   {"board_id": "b01", "purpose": "generation", "completion": "..."}
// Lines with the same key form an ordered stream; a request consumes
// [offset, offset + n). Digest keys are matched only when a spec was given.
class ReplayProvider : public ChatProvider {
 public:
  explicit ReplayProvider(const std::string& fixture_path,
                          std::optional<ProviderSpec> digest_spec = {});
  std::vector<std::string> complete(const CompletionRequest& req) override;
  std::string describe() const override;

 private:
  std::string path_;
  std::optional<ProviderSpec> digest_spec_;
  std::unordered_map<std::string, std::vector<std::string>> by_digest_;
  std::map<std::pair<std::string, std::string>, std::vector<std::string>>
      by_key_;
};

// POSTs to a chat-completions endpoint, retrying transient failures
// (connection errors, 429, 5xx) with exponential backoff. The API key is
// read from the environment variable named in the spec and sent as a bearer
// token when present.
class HttpChatProvider : public ChatProvider {
 public:
  explicit HttpChatProvider(ProviderSpec spec);
  std::vector<std::string> complete(const CompletionRequest& req) override;
  std::string describe() const override;

 private:
  ProviderSpec spec_;
};

// Disk cache in front of another provider. Entries live in
// <cache_dir>/<digest>.json and hold the completion list plus provider
// metadata; a request needing more completions than cached fetches only the
// difference and appends. Writes go to a temp file then rename, so a
// half-written entry is never visible.
class CachingProvider : public ChatProvider {
 public:
  CachingProvider(std::shared_ptr<ChatProvider> inner, ProviderSpec spec,
                  std::string cache_dir);
  std::vector<std::string> complete(const CompletionRequest& req) override;
  std::string describe() const override;

 private:
  std::shared_ptr<ChatProvider> inner_;
  ProviderSpec spec_;
  std::string cache_dir_;
  std::mutex mu_;
};

// n whitespace-trimmed question samples for a generation bundle. Empty
// completions are kept (they become invalid candidates downstream).
std::vector<std::string> propose_questions(ChatProvider& provider,
                                           const PromptBundle& bundle, int n);

struct TranslationResult {
  ExprPtr program;    // null when no completion parsed and typechecked
  std::string raw;    // the completion behind `program`, or the first one
  std::string error;  // parse/type failure for the raw completion
};

// Translates one question: asks for `attempts` completions and returns the
// first that parses and typechecks; otherwise an invalid result retaining
// the raw text. `offset` positions the request within a replay fixture
// stream (question q on a board starts at q * attempts); live providers
// ignore it.
TranslationResult translate_question(ChatProvider& provider,
                                     const std::string& question,
                                     const std::vector<QAExample>& examples,
                                     const ConfigPtr& config = default_config(),
                                     int attempts = 1,
                                     const std::string& board_id = "",
                                     int offset = 0);

}  // namespace battleship
