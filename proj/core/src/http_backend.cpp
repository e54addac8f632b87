#include "ars/http_backend.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "ars/error.hpp"

namespace ars {

// Counting semaphore bounding concurrent requests.
class HttpBackend::Slots {
 public:
  explicit Slots(int n) : free_(n) {}

  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return free_ > 0; });
    --free_;
  }

  void release() {
    {
      std::lock_guard lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

void HttpBackendConfig::validate() const {
  if (base_url.empty()) throw ConfigError("http backend needs a base_url");
  if (model.empty()) throw ConfigError("http backend needs a model name");
  if (top_k < 2) throw ConfigError("http top_k must be at least 2");
  if (max_in_flight < 1) throw ConfigError("http max_in_flight must be at least 1");
  if (max_attempts < 1) throw ConfigError("http max_attempts must be at least 1");
}

HttpBackend::HttpBackend(HttpBackendConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  if (!cfg_.api_key_env.empty()) {
    if (const char* key = std::getenv(cfg_.api_key_env.c_str())) api_key_ = key;
  }
  slots_ = std::make_unique<Slots>(cfg_.max_in_flight);
}

HttpBackend::~HttpBackend() = default;

BackendDescriptor HttpBackend::descriptor() const {
  BackendDescriptor d;
  d.kind = BackendKind::Http;
  d.concurrent_safe = true;
  d.top_k = cfg_.top_k;
  d.max_in_flight = cfg_.max_in_flight;
  return d;
}

nlohmann::json HttpBackend::request_body(std::string_view context) const {
  return {{"model", cfg_.model},
          {"prompt", std::string(context)},
          {"max_tokens", 1},
          {"logprobs", cfg_.top_k},
          {"temperature", 1.0},
          {"echo", false}};
}

TokenDistribution HttpBackend::parse_response(const nlohmann::json& response) const {
  if (!response.contains("choices") || !response["choices"].is_array() || response["choices"].empty()) {
    throw BackendError("completion response has no choices");
  }
  const auto& choice = response["choices"][0];
  const std::string text = choice.value("text", std::string());
  const std::string finish = choice.contains("finish_reason") && choice["finish_reason"].is_string()
                                 ? choice["finish_reason"].get<std::string>()
                                 : std::string();

  auto map_eos = [&](const std::string& token) {
    const bool eos = std::find(cfg_.eos_tokens.begin(), cfg_.eos_tokens.end(), token) != cfg_.eos_tokens.end();
    return eos ? std::string(kEndOfSequence) : token;
  };

  const bool has_logprobs = choice.contains("logprobs") && choice["logprobs"].is_object() &&
                            choice["logprobs"].contains("top_logprobs") &&
                            choice["logprobs"]["top_logprobs"].is_array();
  if (!has_logprobs) {
    // An empty stop is an end-of-sequence even without logprobs; anything else needs them.
    if (text.empty() && finish == "stop") return TokenDistribution::one_hot(std::string(kEndOfSequence));
    throw CapabilityError("endpoint did not return top log-probabilities");
  }
  const auto& steps = choice["logprobs"]["top_logprobs"];
  if (steps.empty() || steps[0].is_null()) {
    if (text.empty() && finish == "stop") return TokenDistribution::one_hot(std::string(kEndOfSequence));
    throw CapabilityError("endpoint returned an empty top_logprobs list");
  }
  if (!steps[0].is_object()) throw BackendError("top_logprobs entry is not an object");

  TokenDistribution dist;
  dist.truncated = true;
  for (const auto& [token, logprob] : steps[0].items()) {
    if (!logprob.is_number()) throw BackendError("non-numeric log-probability for '" + token + "'");
    const double p = std::exp(logprob.get<double>());
    const auto mapped = map_eos(token);
    auto same = std::find_if(dist.candidates.begin(), dist.candidates.end(),
                             [&](const TokenCandidate& c) { return c.text == mapped; });
    if (same != dist.candidates.end()) {
      same->probability += p;
    } else {
      dist.candidates.push_back({mapped, p});
    }
  }
  // JSON objects are unordered; present candidates most-likely first with a stable tie order.
  std::sort(dist.candidates.begin(), dist.candidates.end(), [](const TokenCandidate& a, const TokenCandidate& b) {
    return a.probability != b.probability ? a.probability > b.probability : a.text < b.text;
  });
  const double total = dist.total_mass();
  if (total > 1.0) {
    // Float round-off in the endpoint's log-softmax.
    for (auto& c : dist.candidates) c.probability /= total;
  }
  validate_distribution(dist);
  return dist;
}

TokenDistribution HttpBackend::next_distribution(std::string_view context) {
  const std::string body = request_body(context).dump();
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  slots_->acquire();
  struct Release {
    Slots* s;
    ~Release() { s->release(); }
  } release{slots_.get()};

  auto backoff = cfg_.initial_backoff;
  std::string last_error;
  int last_status = 0;
  for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
    httplib::Client client(cfg_.base_url);
    client.set_connection_timeout(cfg_.timeout);
    client.set_read_timeout(cfg_.timeout);
    client.set_write_timeout(cfg_.timeout);
    auto res = client.Post(cfg_.path, headers, body, "application/json");

    bool retryable = false;
    if (!res) {
      last_error = "transport error: " + httplib::to_string(res.error());
      last_status = 0;
      retryable = true;
    } else if (res->status == 429 || res->status >= 500) {
      last_error = "server returned HTTP " + std::to_string(res->status);
      last_status = res->status;
      retryable = true;
    } else if (res->status != 200) {
      throw BackendError("endpoint returned HTTP " + std::to_string(res->status) + ": " + res->body,
                         attempt, res->status, false);
    } else {
      nlohmann::json parsed;
      try {
        parsed = nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::exception& e) {
        throw BackendError(std::string("unparseable completion response: ") + e.what(), attempt, 200, false);
      }
      return parse_response(parsed);
    }

    if (retryable && attempt < cfg_.max_attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  throw BackendError(last_error + " after " + std::to_string(cfg_.max_attempts) + " attempts", cfg_.max_attempts,
                     last_status, true);
}

void from_json(const nlohmann::json& j, HttpBackendConfig& cfg) {
  cfg.base_url = j.value("base_url", cfg.base_url);
  cfg.path = j.value("path", cfg.path);
  cfg.model = j.value("model", cfg.model);
  cfg.api_key_env = j.value("api_key_env", cfg.api_key_env);
  cfg.top_k = j.value("top_k", cfg.top_k);
  cfg.max_in_flight = j.value("max_in_flight", cfg.max_in_flight);
  cfg.max_attempts = j.value("max_attempts", cfg.max_attempts);
  cfg.initial_backoff = std::chrono::milliseconds(j.value("backoff_ms", static_cast<long long>(cfg.initial_backoff.count())));
  cfg.timeout = std::chrono::seconds(j.value("timeout_s", static_cast<long long>(cfg.timeout.count())));
  cfg.eos_tokens = j.value("eos_tokens", cfg.eos_tokens);
}

}  // namespace ars
