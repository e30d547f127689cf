#include "battleship/provider.hpp"

#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <thread>

#include <openssl/evp.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#include "battleship/errors.hpp"

namespace battleship {

namespace {

using nlohmann::json;

const char* role_wire_name(Role r) {
  switch (r) {
    case Role::System:
      return "system";
    case Role::User:
      return "user";
    case Role::Assistant:
      return "assistant";
  }
  return "user";
}

void validate_messages(const std::vector<ChatMessage>& messages) {
  if (messages.empty()) throw InputError("request has no messages");
  for (const auto& m : messages)
    if (m.content.empty()) throw InputError("request has an empty message");
}

std::string trim_ws(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RoleEncoding parse_role_encoding(const std::string& text) {
  if (text == "metadata") return RoleEncoding::Metadata;
  if (text == "prepended") return RoleEncoding::PrependedText;
  throw InputError("unknown role encoding: " + text +
                   " (expected metadata or prepended)");
}

const char* role_encoding_name(RoleEncoding encoding) {
  return encoding == RoleEncoding::Metadata ? "metadata" : "prepended";
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                  nullptr))
    throw Error("sha256 failed");
  static const char hex[] = "0123456789abcdef";
  std::string out(2 * len, '0');
  for (unsigned int i = 0; i < len; ++i) {
    out[2 * i] = hex[digest[i] >> 4];
    out[2 * i + 1] = hex[digest[i] & 0xf];
  }
  return out;
}

std::string request_digest(const ProviderSpec& spec,
                           const std::vector<ChatMessage>& messages) {
  json j;
  j["endpoint"] = spec.endpoint;
  j["model"] = spec.model;
  j["encoding"] = role_encoding_name(spec.role_encoding);
  j["temperature"] = spec.temperature;
  if (spec.top_p) j["top_p"] = *spec.top_p;
  if (spec.max_tokens) j["max_tokens"] = *spec.max_tokens;
  json msgs = json::array();
  for (const auto& m : messages)
    msgs.push_back({{"role", role_wire_name(m.role)}, {"content", m.content}});
  j["messages"] = std::move(msgs);
  return sha256_hex(j.dump());
}

// ---------------------------------------------------------------------------
// ReplayProvider
// ---------------------------------------------------------------------------

ReplayProvider::ReplayProvider(const std::string& fixture_path,
                               std::optional<ProviderSpec> digest_spec)
    : path_(fixture_path), digest_spec_(std::move(digest_spec)) {
  std::ifstream in(path_);
  if (!in) throw ProviderError("cannot open replay fixture: " + path_);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim_ws(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ProviderError(path_ + ":" + std::to_string(lineno) + ": " +
                          e.what());
    }
    if (!j.contains("completion"))
      throw ProviderError(path_ + ":" + std::to_string(lineno) +
                          ": fixture line without completion");
    const std::string completion = j.at("completion").get<std::string>();
    if (j.contains("digest")) {
      by_digest_[j.at("digest").get<std::string>()].push_back(completion);
    } else if (j.contains("board_id") && j.contains("purpose")) {
      by_key_[{j.at("board_id").get<std::string>(),
               j.at("purpose").get<std::string>()}]
          .push_back(completion);
    } else {
      throw ProviderError(path_ + ":" + std::to_string(lineno) +
                          ": fixture line needs a digest or board_id+purpose");
    }
  }
}

std::vector<std::string> ReplayProvider::complete(
    const CompletionRequest& req) {
  validate_messages(req.messages);
  if (req.n == 0) return {};
  if (req.n < 0 || req.offset < 0)
    throw InputError("bad completion request: n or offset negative");

  const std::vector<std::string>* stream = nullptr;
  std::string key_desc;
  if (digest_spec_) {
    const std::string digest = request_digest(*digest_spec_, req.messages);
    auto it = by_digest_.find(digest);
    if (it != by_digest_.end()) {
      stream = &it->second;
      key_desc = "digest " + digest.substr(0, 12);
    }
  }
  if (!stream) {
    auto it = by_key_.find({req.board_id, req.purpose});
    if (it != by_key_.end()) {
      stream = &it->second;
      key_desc = "key (" + req.board_id + ", " + req.purpose + ")";
    }
  }
  if (!stream)
    throw ProviderError("replay fixture " + path_ + " has no entry for (" +
                        req.board_id + ", " + req.purpose + ")");
  if (req.offset + req.n > static_cast<int>(stream->size()))
    throw ProviderError("replay fixture " + path_ + " exhausted: " +
                        key_desc + " holds " +
                        std::to_string(stream->size()) +
                        " completions, requested up to " +
                        std::to_string(req.offset + req.n));
  return std::vector<std::string>(stream->begin() + req.offset,
                                  stream->begin() + req.offset + req.n);
}

std::string ReplayProvider::describe() const { return "replay:" + path_; }

// ---------------------------------------------------------------------------
// HttpChatProvider
// ---------------------------------------------------------------------------

HttpChatProvider::HttpChatProvider(ProviderSpec spec)
    : spec_(std::move(spec)) {
  if (spec_.endpoint.empty()) throw InputError("provider endpoint is empty");
}

std::vector<std::string> HttpChatProvider::complete(
    const CompletionRequest& req) {
  validate_messages(req.messages);
  if (req.n == 0) return {};
  if (req.n < 0) throw InputError("bad completion request: n negative");

  json body;
  body["model"] = spec_.model;
  body["temperature"] = spec_.temperature;
  body["n"] = req.n;
  if (spec_.top_p) body["top_p"] = *spec_.top_p;
  if (spec_.max_tokens) body["max_tokens"] = *spec_.max_tokens;
  if (spec_.role_encoding == RoleEncoding::Metadata) {
    json msgs = json::array();
    for (const auto& m : req.messages)
      msgs.push_back(
          {{"role", role_wire_name(m.role)}, {"content", m.content}});
    body["messages"] = std::move(msgs);
  } else {
    body["prompt"] = render_prepended(req.messages);
  }
  const std::string payload = body.dump();

  httplib::Headers headers;
  if (const char* key = std::getenv(spec_.api_key_env.c_str());
      key && *key != '\0')
    headers.emplace("Authorization", std::string("Bearer ") + key);

  std::string last_error;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) {
      const double seconds =
          spec_.backoff_seconds * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
    httplib::Client client(spec_.endpoint);
    client.set_connection_timeout(10);
    client.set_read_timeout(300);
    auto res = client.Post(spec_.api_path, headers, payload,
                           "application/json");
    if (!res) {
      last_error = "connection failed (" + httplib::to_string(res.error()) +
                   ")";
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw ProviderError("provider returned status " +
                          std::to_string(res->status) + ": " +
                          res->body.substr(0, 200));

    json reply;
    try {
      reply = json::parse(res->body);
    } catch (const json::exception& e) {
      throw ProviderError(std::string("malformed provider response: ") +
                          e.what());
    }
    if (!reply.contains("choices") || !reply["choices"].is_array() ||
        reply["choices"].size() < static_cast<std::size_t>(req.n))
      throw ProviderError("provider response lacks " + std::to_string(req.n) +
                          " choices");
    std::vector<std::string> out;
    for (int i = 0; i < req.n; ++i) {
      const json& choice = reply["choices"][i];
      if (choice.contains("message") &&
          choice["message"].contains("content") &&
          choice["message"]["content"].is_string())
        out.push_back(choice["message"]["content"].get<std::string>());
      else if (choice.contains("text") && choice["text"].is_string())
        out.push_back(choice["text"].get<std::string>());
      else
        throw ProviderError("provider choice without text content");
    }
    return out;
  }
  throw ProviderError("provider unreachable after " +
                      std::to_string(spec_.max_retries + 1) + " attempts (" +
                      last_error + ")");
}

std::string HttpChatProvider::describe() const {
  return "http:" + spec_.endpoint + spec_.api_path + " model=" + spec_.model;
}

// ---------------------------------------------------------------------------
// CachingProvider
// ---------------------------------------------------------------------------

CachingProvider::CachingProvider(std::shared_ptr<ChatProvider> inner,
                                 ProviderSpec spec, std::string cache_dir)
    : inner_(std::move(inner)),
      spec_(std::move(spec)),
      cache_dir_(std::move(cache_dir)) {
  if (!inner_) throw InputError("caching provider needs an inner provider");
  std::error_code ec;
  std::filesystem::create_directories(cache_dir_, ec);
  if (ec)
    throw ProviderError("cannot create cache directory " + cache_dir_ + ": " +
                        ec.message());
}

namespace {

json load_cache_entry(const std::string& path) {
  std::ifstream in(path);
  if (!in) return json();
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ProviderError("corrupt cache entry " + path + ": " + e.what());
  }
  return j;
}

void store_cache_entry(const std::string& path, const json& entry) {
  const std::string tmp =
      path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp);
    if (!out) throw ProviderError("cannot write cache file " + tmp);
    out << entry.dump(2) << '\n';
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
    throw ProviderError("cannot move cache file into place: " + ec.message());
}

}  // namespace

std::vector<std::string> CachingProvider::complete(
    const CompletionRequest& req) {
  validate_messages(req.messages);
  if (req.n == 0) return {};
  if (req.n < 0) throw InputError("bad completion request: n negative");

  const std::string digest = request_digest(spec_, req.messages);
  const std::string path = cache_dir_ + "/" + digest + ".json";

  std::vector<std::string> completions;
  std::string created;
  {
    std::lock_guard<std::mutex> lock(mu_);
    json entry = load_cache_entry(path);
    if (entry.is_object() && entry.contains("completions")) {
      completions = entry["completions"].get<std::vector<std::string>>();
      if (entry.contains("created"))
        created = entry["created"].get<std::string>();
    }
  }

  if (static_cast<int>(completions.size()) < req.n) {
    // Completions are exchangeable, so fetching just the shortfall and
    // appending yields the same distribution as one big request.
    CompletionRequest more = req;
    more.n = req.n - static_cast<int>(completions.size());
    more.offset = req.offset + static_cast<int>(completions.size());
    auto fresh = inner_->complete(more);
    std::lock_guard<std::mutex> lock(mu_);
    // Another thread may have extended the entry while we were fetching;
    // keep whichever list is longer.
    json entry = load_cache_entry(path);
    std::vector<std::string> current;
    if (entry.is_object() && entry.contains("completions"))
      current = entry["completions"].get<std::vector<std::string>>();
    if (static_cast<int>(current.size()) < req.n) {
      for (auto& c : fresh) current.push_back(std::move(c));
      json out;
      out["digest"] = digest;
      out["endpoint"] = spec_.endpoint;
      out["model"] = spec_.model;
      out["encoding"] = role_encoding_name(spec_.role_encoding);
      out["temperature"] = spec_.temperature;
      if (spec_.top_p) out["top_p"] = *spec_.top_p;
      if (spec_.max_tokens) out["max_tokens"] = *spec_.max_tokens;
      out["created"] = created.empty() ? utc_timestamp() : created;
      out["updated"] = utc_timestamp();
      out["completions"] = current;
      store_cache_entry(path, out);
    }
    completions = std::move(current);
  }

  return std::vector<std::string>(completions.begin(),
                                  completions.begin() + req.n);
}

std::string CachingProvider::describe() const {
  return "cache(" + inner_->describe() + ")@" + cache_dir_;
}

// ---------------------------------------------------------------------------
// High-level operations
// ---------------------------------------------------------------------------

std::vector<std::string> propose_questions(ChatProvider& provider,
                                           const PromptBundle& bundle,
                                           int n) {
  if (n < 0) throw InputError("cannot sample a negative number of questions");
  if (n == 0) return {};
  CompletionRequest req;
  req.messages = bundle.messages;
  req.n = n;
  req.purpose = bundle.purpose;
  req.board_id = bundle.target_board_id;
  auto raw = provider.complete(req);
  std::vector<std::string> out;
  out.reserve(raw.size());
  for (const auto& c : raw) out.push_back(trim_ws(c));
  return out;
}

TranslationResult translate_question(ChatProvider& provider,
                                     const std::string& question,
                                     const std::vector<QAExample>& examples,
                                     const ConfigPtr& config, int attempts,
                                     const std::string& board_id, int offset) {
  if (attempts < 1) throw InputError("translation needs at least one attempt");
  if (offset < 0) throw InputError("translation offset cannot be negative");
  PromptBundle bundle = build_translation_prompt(question, examples, config);
  CompletionRequest req;
  req.messages = bundle.messages;
  req.n = attempts;
  req.purpose = bundle.purpose;
  req.board_id = board_id;
  req.offset = offset;
  auto raw = provider.complete(req);

  TranslationResult result;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::string text = trim_ws(raw[i]);
    try {
      ExprPtr e = parse_program(text, config);
      (void)top_level_type(*e);
      return {e, text, ""};
    } catch (const Error& e) {
      if (i == 0) {
        result.raw = text;
        result.error = e.what();
      }
    }
  }
  return result;
}

}  // namespace battleship
