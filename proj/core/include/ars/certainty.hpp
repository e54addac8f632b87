#pragma once

// Checkpoint-time certainty estimation: tentative-answer probing, entropy
// confidence, confidence trend, adaptive threshold and the suppression ramp.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ars/backend.hpp"
#include "ars/difficulty.hpp"

namespace ars {

inline constexpr std::string_view kDefaultProbePrompt = "\nAnswer so far: ";

struct ProbeConfig {
  std::string probe_prompt{kDefaultProbePrompt};
  int probe_budget = 16;
  bool probe_greedy = true;
  /// Candidates kept per probe step when computing entropy confidence.
  int k_top = 20;

  void validate() const;
};

struct CheckpointRecord {
  int index = 0;
  int position = 0;
  std::string tentative_answer;
  double confidence = 0.0;
  double trend = 0.0;
  double threshold = 0.0;
  double suppression_prob = 0.0;
  int probe_tokens_used = 0;

  bool operator==(const CheckpointRecord&) const = default;
};

struct AdaptationConfig {
  double fast_threshold = 0.60;  // c1
  double mod_threshold = 0.75;   // c2
  double deep_threshold = 0.85;  // c3
  int trend_window = 3;
  double trend_gain = 0.5;
  double threshold_floor = 0.30;
  double ramp_exponent = 1.0;

  double base_threshold(ModeTag tag) const noexcept;

  /// Throws ConfigError unless c1 <= c2 <= c3 in (0,1), floor <= min(c), w >= 2, alpha >= 0, gamma > 0.
  void validate() const;
};

struct ProbeResult {
  std::string tentative_answer;
  std::vector<TokenDistribution> dists;
  /// Backend calls made, including the terminating newline / end-of-sequence step.
  int tokens_used = 0;
};

/// Runs the probe as a side branch of `context`: appends the probe prompt and
/// decodes up to probe_budget tokens, stopping at a newline or end-of-sequence.
/// `rng` is only consulted when probe_greedy is false.
ProbeResult probe_answer(std::string_view context, GeneratorBackend& backend, const ProbeConfig& cfg,
                         Rng& rng);

/// C = 1 - mean_t(H_t) / ln(k_top) over top-k renormalized probe steps, clamped to [0,1].
/// Empty input gives 0. Throws InvalidDistributionError on a zero-mass step.
double entropy_confidence(std::span<const TokenDistribution> dists, int k_top);

/// OLS slope of the last min(window, n) scores against index 0..m-1; 0 for fewer than two scores.
double compute_trend(std::span<const double> scores, int window);

/// clamp(base(mode) - gain * max(0, trend), floor, 0.99)
double adaptive_threshold(double confidence, double trend, const ReasoningMode& mode,
                          const AdaptationConfig& cfg);

/// (max(0, C - tau) / (1 - tau))^gamma. Throws ConfigError when tau >= 1 or gamma <= 0.
double suppression_probability(double confidence, double threshold, double gamma);

}  // namespace ars
