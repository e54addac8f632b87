#pragma once

// Client for OpenAI-style /v1/completions endpoints that return top-k
// log-probabilities. Each call requests a single token.

#include <chrono>
#include <memory>
#include <mutex>
#include <condition_variable>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ars/backend.hpp"

namespace ars {

struct HttpBackendConfig {
  std::string base_url = "http://127.0.0.1:8000";
  std::string path = "/v1/completions";
  std::string model;
  /// Name of the environment variable holding the bearer token; empty disables auth.
  std::string api_key_env = "OPENAI_API_KEY";
  int top_k = 20;
  int max_in_flight = 4;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::seconds timeout{60};
  /// Token strings the endpoint uses for end-of-sequence; mapped to kEndOfSequence.
  std::vector<std::string> eos_tokens{"<|endoftext|>", "<|im_end|>", "</s>", "<|eot_id|>"};

  void validate() const;
};

class HttpBackend final : public GeneratorBackend {
 public:
  explicit HttpBackend(HttpBackendConfig cfg);
  ~HttpBackend() override;

  BackendDescriptor descriptor() const override;
  TokenDistribution next_distribution(std::string_view context) override;

  /// Request body for one single-token completion.
  nlohmann::json request_body(std::string_view context) const;

  /// Converts a completion response into a distribution. Throws CapabilityError
  /// when log-probabilities are missing, BackendError on a malformed body.
  TokenDistribution parse_response(const nlohmann::json& response) const;

 private:
  class Slots;

  HttpBackendConfig cfg_;
  std::string api_key_;
  std::unique_ptr<Slots> slots_;
};

void from_json(const nlohmann::json& j, HttpBackendConfig& cfg);

}  // namespace ars
