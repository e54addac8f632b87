#pragma once

#include <functional>
#include <string>
#include <string_view>

#include "ars/backend.hpp"
#include "ars/difficulty.hpp"

namespace ars::testing {

/// Text generated so far: everything after the response cue.
inline std::string_view generated_part(std::string_view context) {
  const auto cue = context.find(kResponseCue);
  return cue == std::string_view::npos ? context : context.substr(cue + kResponseCue.size());
}

/// Backend driven by a callback on the generated text.
class LambdaBackend final : public GeneratorBackend {
 public:
  using Fn = std::function<TokenDistribution(std::string_view generated)>;

  explicit LambdaBackend(Fn fn, bool concurrent_safe = true) : fn_(std::move(fn)), concurrent_safe_(concurrent_safe) {}

  BackendDescriptor descriptor() const override {
    BackendDescriptor d;
    d.concurrent_safe = concurrent_safe_;
    d.max_in_flight = 64;
    d.per_token_latency = 0.01;
    return d;
  }

  TokenDistribution next_distribution(std::string_view context) override {
    ++calls;
    return fn_(generated_part(context));
  }

  int calls = 0;

 private:
  Fn fn_;
  bool concurrent_safe_;
};

}  // namespace ars::testing
