#pragma once

// Deterministic scripted reasoner.
//
// A script is a list of solution tokens plus reflection loops anchored at
// solution positions. At a loop's position the backend offers
// {trigger: emit_prob, next solution token: 1 - emit_prob}. Emitting the
// trigger plays the loop body deterministically and returns to the same
// position, where the trigger is offered again (a redundant reflection
// cycle) until a non-trigger token is emitted or max_cycles is spent.
//
// The backend holds no generation state. Every call replays the generated
// suffix of the context (everything after kResponseCue) against the script
// to recover its position, so one instance may serve concurrent generations.
//
// Tentative-answer probes are recognized by the probe marker. Once the
// solution position reaches t_star, or a loop flagged reveals_answer has
// completed a cycle, the probe answers the gold answer one-hot; before that
// it answers a filler token whose distribution is uniform over top_k
// candidates (or one-hot, per pre_solution_probe_entropy).

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "ars/backend.hpp"
#include "ars/certainty.hpp"

namespace ars {

struct ScriptLoop {
  int position = 0;
  std::string trigger_word = "Wait";
  std::vector<std::string> body_tokens;
  double emit_prob = 0.0;
  /// Unset: the loop is offered again after every completed cycle.
  std::optional<int> max_cycles;
  /// Completing one cycle of this loop makes the probe return the gold answer.
  bool reveals_answer = false;
};

enum class ProbeEntropy { UniformTopK, OneHot };

struct ScriptedReasonerSpec {
  std::vector<std::string> solution_tokens;
  int t_star = 0;
  std::string gold_answer;
  std::vector<ScriptLoop> loops;
  ProbeEntropy pre_solution_probe_entropy = ProbeEntropy::UniformTopK;
  double per_token_latency = 0.025;
  std::string filler_answer = "unsure";
  int top_k = 20;
  std::string probe_marker{kDefaultProbePrompt};

  /// Throws ConfigError when t_star > len(solution_tokens), loop positions are
  /// not strictly increasing or out of range, tokens are empty, or emit_prob is outside [0,1].
  void validate() const;
};

/// Replay position inside a script (exposed for tests and diagnostics).
struct ScriptState {
  std::size_t solution_pos = 0;
  int active_loop = -1;          // loop whose body is being played, -1 if none
  std::size_t body_pos = 0;
  std::vector<int> cycles_done;  // per loop
  bool answer_revealed = false;
  std::size_t main_tokens = 0;   // tokens consumed from the main text
};

class ScriptedBackend final : public GeneratorBackend {
 public:
  explicit ScriptedBackend(ScriptedReasonerSpec spec);

  BackendDescriptor descriptor() const override;
  TokenDistribution next_distribution(std::string_view context) override;

  const ScriptedReasonerSpec& spec() const noexcept { return spec_; }

  /// Replays generated text against the script. Throws ScriptDesyncError on foreign text.
  ScriptState replay(std::string_view generated) const;

  /// Main-generation distribution at a replayed state.
  TokenDistribution distribution_at(const ScriptState& state) const;

  /// True when the probe would return the gold answer at this state.
  bool answer_known(const ScriptState& state) const noexcept;

 private:
  TokenDistribution probe_distribution(const ScriptState& state, std::string_view probe_out) const;
  std::optional<std::size_t> offered_loop(const ScriptState& state) const;

  ScriptedReasonerSpec spec_;
};

/// tokens * per_token_latency. Throws ConfigError for a negative latency.
double simulated_latency(long long tokens, const ScriptedReasonerSpec& spec);

void to_json(nlohmann::json& j, const ScriptedReasonerSpec& spec);
void from_json(const nlohmann::json& j, ScriptedReasonerSpec& spec);

}  // namespace ars
