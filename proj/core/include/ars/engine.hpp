#pragma once

// Generation loop with checkpointed certainty monitoring and probabilistic
// suppression of reflection-trigger tokens.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ars/backend.hpp"
#include "ars/certainty.hpp"
#include "ars/difficulty.hpp"

namespace ars {

class TriggerSet {
 public:
  /// Throws ConfigError on an empty set or entries with surrounding whitespace.
  explicit TriggerSet(std::vector<std::string> words, bool case_sensitive = true);

  static TriggerSet defaults();

  const std::vector<std::string>& words() const noexcept { return words_; }
  bool case_sensitive() const noexcept { return case_sensitive_; }

 private:
  std::vector<std::string> words_;
  bool case_sensitive_;
};

/// True iff the token, after leading whitespace, starts with a trigger word
/// followed by end-of-token or a non-letter.
bool detect_trigger(std::string_view token_text, const TriggerSet& triggers);

inline constexpr std::string_view kFallbackToken = "\n";

struct ResampleResult {
  std::string token;
  bool fallback = false;
};

/// Masks trigger candidates, renormalizes and samples once. Returns the
/// fallback newline (without consuming a draw) when the remaining mass is below 1e-9.
ResampleResult resample_non_trigger(const TokenDistribution& dist, const TriggerSet& triggers, Rng& rng);

struct SuppressionEvent {
  int position = 0;
  std::string suppressed_token;
  std::string replacement_token;
  double suppression_prob = 0.0;
  double random_draw = 0.0;
  bool fallback = false;

  bool operator==(const SuppressionEvent&) const = default;
};

enum class StopReason { Eos, TokenCap };
enum class TraceStatus { Ok, Aborted };

std::string_view to_string(StopReason r);
std::string_view to_string(TraceStatus s);

/// One independent generation. DEEP mode produces several.
struct SampleRecord {
  std::uint64_t seed = 0;
  std::vector<std::string> tokens;
  std::string text;
  int emitted_tokens = 0;
  int probe_tokens = 0;
  std::vector<CheckpointRecord> checkpoints;
  std::vector<SuppressionEvent> suppression_events;
  std::string final_answer;
  StopReason stop_reason = StopReason::Eos;
  TraceStatus status = TraceStatus::Ok;
  std::string error;
  std::vector<std::string> warnings;

  double final_confidence() const noexcept { return checkpoints.empty() ? 0.0 : checkpoints.back().confidence; }
};

struct GenerationTrace {
  std::string query_id;
  std::string method;
  std::optional<ReasoningMode> mode;
  std::optional<DifficultyScore> difficulty;

  // The selected sample (the only one outside DEEP mode).
  std::vector<std::string> tokens;
  std::string text;
  int emitted_tokens = 0;
  std::vector<CheckpointRecord> checkpoints;
  std::vector<SuppressionEvent> suppression_events;
  std::string final_answer;
  StopReason stop_reason = StopReason::Eos;

  /// Probe tokens summed over all samples.
  int probe_tokens = 0;
  /// Generation plus probe tokens summed over all samples; the basis for TPC and latency.
  long long cost_tokens = 0;

  TraceStatus status = TraceStatus::Ok;
  std::string error;
  std::vector<std::string> warnings;
  double wall_latency = 0.0;
  std::uint64_t rng_seed = 0;
  int selected_sample = 0;
  /// Per-sample records when more than one generation ran (DEEP self-consistency).
  std::vector<SampleRecord> samples;
};

struct SuppressionConfig {
  int checkpoint_interval = 64;
  int max_tokens = 1200;
  TriggerSet trigger_set = TriggerSet::defaults();
  AdaptationConfig adaptation;
  ProbeConfig probe;
  double d1 = kDefaultD1;
  double d2 = kDefaultD2;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Adaptive suppression end to end: difficulty, mode, prompt, checkpointed
/// generation (sc_k majority-voted samples in DEEP mode), answer extraction.
GenerationTrace generate_with_ars(const Query& q, GeneratorBackend& backend, const SuppressionConfig& cfg,
                                  const DifficultyLexicon& lex);

/// Single generation without checkpoints or probes: every detected trigger is
/// suppressed with the fixed probability. p = 0 is plain sampling. Consumes
/// randomness in the same order as the adaptive loop.
GenerationTrace generate_with_fixed_suppression(const Query& q, std::string_view prompt,
                                                GeneratorBackend& backend, const SuppressionConfig& cfg,
                                                double suppression_prob);

/// Majority vote over normalized answers; ties go to the higher final
/// checkpoint confidence, then the lower index. Empty answers only win if all are empty.
std::size_t vote(const std::vector<SampleRecord>& samples);

}  // namespace ars
