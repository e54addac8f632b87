#include "ars/certainty.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ars/error.hpp"

namespace ars {

void ProbeConfig::validate() const {
  if (probe_budget < 1) throw ConfigError("probe budget must be at least 1");
  if (k_top < 2) throw ConfigError("probe k_top must be at least 2");
  if (probe_prompt.empty()) throw ConfigError("probe prompt must not be empty");
}

double AdaptationConfig::base_threshold(ModeTag tag) const noexcept {
  switch (tag) {
    case ModeTag::Fast:
      return fast_threshold;
    case ModeTag::Mod:
      return mod_threshold;
    case ModeTag::Deep:
      return deep_threshold;
  }
  return mod_threshold;
}

void AdaptationConfig::validate() const {
  for (double c : {fast_threshold, mod_threshold, deep_threshold}) {
    if (!(c > 0.0 && c < 1.0)) throw ConfigError("confidence thresholds must lie in (0,1)");
  }
  if (!(fast_threshold <= mod_threshold && mod_threshold <= deep_threshold)) {
    throw ConfigError("confidence thresholds must satisfy c1 <= c2 <= c3");
  }
  if (threshold_floor > fast_threshold) {
    throw ConfigError("threshold floor must not exceed the smallest base threshold");
  }
  if (trend_window < 2) throw ConfigError("trend window must be at least 2");
  if (!(trend_gain >= 0.0)) throw ConfigError("trend gain must be nonnegative");
  if (!(ramp_exponent > 0.0)) throw ConfigError("ramp exponent must be positive");
}

ProbeResult probe_answer(std::string_view context, GeneratorBackend& backend, const ProbeConfig& cfg,
                         Rng& rng) {
  if (context.empty()) throw ConfigError("probe context must not be empty");
  std::string branch(context);
  branch += cfg.probe_prompt;

  ProbeResult result;
  std::string answer;
  for (int step = 0; step < cfg.probe_budget; ++step) {
    auto dist = backend.next_distribution(branch);
    ++result.tokens_used;
    validate_distribution(dist);
    const std::string token = cfg.probe_greedy ? argmax(dist) : sample(dist, rng);
    if (token == kEndOfSequence) break;
    const auto newline = token.find('\n');
    if (newline != std::string::npos) {
      // Text before the newline still belongs to the answer.
      if (newline > 0) {
        answer += token.substr(0, newline);
        result.dists.push_back(std::move(dist));
      }
      break;
    }
    answer += token;
    branch += token;
    result.dists.push_back(std::move(dist));
  }

  const auto first = answer.find_first_not_of(" \t\r");
  const auto last = answer.find_last_not_of(" \t\r");
  result.tentative_answer = first == std::string::npos ? "" : answer.substr(first, last - first + 1);
  if (result.tentative_answer.empty()) result.dists.clear();
  return result;
}

double entropy_confidence(std::span<const TokenDistribution> dists, int k_top) {
  if (k_top < 2) throw ConfigError("k_top must be at least 2");
  if (dists.empty()) return 0.0;

  std::vector<double> probs;
  double entropy_sum = 0.0;
  for (const auto& dist : dists) {
    probs.clear();
    for (const auto& c : dist.candidates) {
      if (!std::isfinite(c.probability) || c.probability < 0.0) {
        throw InvalidDistributionError("negative or non-finite probability in probe step");
      }
      probs.push_back(c.probability);
    }
    std::sort(probs.begin(), probs.end(), std::greater<>());
    if (probs.size() > static_cast<std::size_t>(k_top)) probs.resize(static_cast<std::size_t>(k_top));
    double mass = 0.0;
    for (double p : probs) mass += p;
    if (!(mass > 0.0)) throw InvalidDistributionError("probe step has zero total mass");
    double h = 0.0;
    for (double p : probs) {
      if (p <= 0.0) continue;
      const double q = p / mass;
      h -= q * std::log(q);
    }
    entropy_sum += h;
  }
  const double mean_h = entropy_sum / static_cast<double>(dists.size());
  return std::clamp(1.0 - mean_h / std::log(static_cast<double>(k_top)), 0.0, 1.0);
}

double compute_trend(std::span<const double> scores, int window) {
  if (window < 2) throw ConfigError("trend window must be at least 2");
  const std::size_t m = std::min(scores.size(), static_cast<std::size_t>(window));
  if (m < 2) return 0.0;
  const auto tail = scores.last(m);
  const double n = static_cast<double>(m);
  const double mean_x = (n - 1.0) / 2.0;
  double mean_y = 0.0;
  for (double y : tail) mean_y += y;
  mean_y /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (tail[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

double adaptive_threshold(double /*confidence*/, double trend, const ReasoningMode& mode,
                          const AdaptationConfig& cfg) {
  const double tau = cfg.base_threshold(mode.tag()) - cfg.trend_gain * std::max(0.0, trend);
  return std::min(std::max(tau, cfg.threshold_floor), 0.99);
}

double suppression_probability(double confidence, double threshold, double gamma) {
  if (!(threshold < 1.0)) throw ConfigError("suppression threshold must be below 1");
  if (!(gamma > 0.0)) throw ConfigError("ramp exponent must be positive");
  const double excess = std::max(0.0, confidence - threshold);
  if (excess == 0.0) return 0.0;
  return std::clamp(std::pow(excess / (1.0 - threshold), gamma), 0.0, 1.0);
}

}  // namespace ars
