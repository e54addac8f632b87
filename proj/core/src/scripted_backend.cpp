#include "ars/scripted_backend.hpp"

#include <algorithm>

#include "ars/difficulty.hpp"
#include "ars/error.hpp"

namespace ars {

namespace {

enum class OptionKind { Body, Trigger, Solution, End };

struct Option {
  std::string_view text;
  double probability;
  OptionKind kind;
};

std::string filler_alternative(const std::string& filler, int i) {
  return filler + "#" + std::to_string(i);
}

}  // namespace

void ScriptedReasonerSpec::validate() const {
  const auto n = static_cast<int>(solution_tokens.size());
  if (t_star < 0 || t_star > n) throw ConfigError("script t_star must lie in [0, len(solution_tokens)]");
  if (top_k < 2) throw ConfigError("script top_k must be at least 2");
  if (per_token_latency < 0.0) throw ConfigError("per-token latency must be nonnegative");
  if (probe_marker.empty()) throw ConfigError("probe marker must not be empty");
  if (filler_answer.empty()) throw ConfigError("filler answer must not be empty");
  for (const auto& t : solution_tokens) {
    if (t.empty()) throw ConfigError("solution tokens must be non-empty");
    if (t == kEndOfSequence) throw ConfigError("solution tokens must not contain the end-of-sequence marker");
  }
  int previous = -1;
  for (const auto& loop : loops) {
    if (loop.position <= previous) throw ConfigError("loop positions must be strictly increasing");
    if (loop.position < 0 || loop.position > n) throw ConfigError("loop position outside the script");
    if (loop.trigger_word.empty()) throw ConfigError("loop trigger word must be non-empty");
    if (!(loop.emit_prob >= 0.0 && loop.emit_prob <= 1.0)) throw ConfigError("loop emit_prob must lie in [0,1]");
    if (loop.max_cycles && *loop.max_cycles < 0) throw ConfigError("loop max_cycles must be nonnegative");
    for (const auto& t : loop.body_tokens) {
      if (t.empty()) throw ConfigError("loop body tokens must be non-empty");
    }
    previous = loop.position;
  }
}

ScriptedBackend::ScriptedBackend(ScriptedReasonerSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

BackendDescriptor ScriptedBackend::descriptor() const {
  BackendDescriptor d;
  d.kind = BackendKind::Scripted;
  d.concurrent_safe = true;
  d.top_k = spec_.top_k;
  d.max_in_flight = 1 << 20;
  d.per_token_latency = spec_.per_token_latency;
  return d;
}

std::optional<std::size_t> ScriptedBackend::offered_loop(const ScriptState& state) const {
  if (state.active_loop >= 0) return std::nullopt;
  for (std::size_t i = 0; i < spec_.loops.size(); ++i) {
    const auto& loop = spec_.loops[i];
    if (static_cast<std::size_t>(loop.position) != state.solution_pos) continue;
    if (loop.emit_prob <= 0.0) return std::nullopt;
    if (loop.max_cycles && state.cycles_done[i] >= *loop.max_cycles) return std::nullopt;
    return i;
  }
  return std::nullopt;
}

namespace {

std::vector<Option> options_at(const ScriptedReasonerSpec& spec, const ScriptState& state,
                               std::optional<std::size_t> loop) {
  if (state.active_loop >= 0) {
    const auto& body = spec.loops[static_cast<std::size_t>(state.active_loop)].body_tokens;
    return {{body[state.body_pos], 1.0, OptionKind::Body}};
  }
  Option next = state.solution_pos < spec.solution_tokens.size()
                    ? Option{spec.solution_tokens[state.solution_pos], 1.0, OptionKind::Solution}
                    : Option{kEndOfSequence, 1.0, OptionKind::End};
  if (!loop) return {next};
  const auto& l = spec.loops[*loop];
  if (l.emit_prob >= 1.0) return {{l.trigger_word, 1.0, OptionKind::Trigger}};
  next.probability = 1.0 - l.emit_prob;
  return {{l.trigger_word, l.emit_prob, OptionKind::Trigger}, next};
}

}  // namespace

TokenDistribution ScriptedBackend::distribution_at(const ScriptState& state) const {
  TokenDistribution dist;
  for (const auto& o : options_at(spec_, state, offered_loop(state))) {
    dist.candidates.push_back({std::string(o.text), o.probability});
  }
  return dist;
}

bool ScriptedBackend::answer_known(const ScriptState& state) const noexcept {
  return state.answer_revealed || state.solution_pos >= static_cast<std::size_t>(spec_.t_star);
}

ScriptState ScriptedBackend::replay(std::string_view generated) const {
  ScriptState state;
  state.cycles_done.assign(spec_.loops.size(), 0);

  auto finish_cycle = [&](std::size_t loop) {
    ++state.cycles_done[loop];
    if (spec_.loops[loop].reveals_answer) state.answer_revealed = true;
    state.active_loop = -1;
    state.body_pos = 0;
  };

  std::size_t pos = 0;
  while (pos < generated.size()) {
    const auto loop = offered_loop(state);
    const auto options = options_at(spec_, state, loop);
    const Option* match = nullptr;
    for (const auto& o : options) {
      if (o.kind == OptionKind::End) continue;
      if (generated.substr(pos).starts_with(o.text) && (!match || o.text.size() > match->text.size())) {
        match = &o;
      }
    }
    if (!match) {
      // The engine's fallback token after a fully masked resample.
      if (generated[pos] == '\n') {
        ++pos;
        ++state.main_tokens;
        continue;
      }
      throw ScriptDesyncError("generated text at byte " + std::to_string(pos) +
                              " does not match the script");
    }
    pos += match->text.size();
    ++state.main_tokens;
    switch (match->kind) {
      case OptionKind::Body: {
        const auto active = static_cast<std::size_t>(state.active_loop);
        if (++state.body_pos == spec_.loops[active].body_tokens.size()) finish_cycle(active);
        break;
      }
      case OptionKind::Trigger:
        state.active_loop = static_cast<int>(*loop);
        state.body_pos = 0;
        if (spec_.loops[*loop].body_tokens.empty()) finish_cycle(*loop);
        break;
      case OptionKind::Solution:
        ++state.solution_pos;
        break;
      case OptionKind::End:
        break;
    }
  }
  return state;
}

TokenDistribution ScriptedBackend::probe_distribution(const ScriptState& state,
                                                      std::string_view probe_out) const {
  TokenDistribution content;
  if (answer_known(state)) {
    content = TokenDistribution::one_hot(spec_.gold_answer);
  } else if (spec_.pre_solution_probe_entropy == ProbeEntropy::OneHot) {
    content = TokenDistribution::one_hot(spec_.filler_answer);
  } else {
    const double p = 1.0 / static_cast<double>(spec_.top_k);
    content.candidates.push_back({spec_.filler_answer, p});
    for (int i = 1; i < spec_.top_k; ++i) {
      content.candidates.push_back({filler_alternative(spec_.filler_answer, i), p});
    }
  }
  if (probe_out.empty()) return content;
  for (const auto& c : content.candidates) {
    if (probe_out == c.text) return TokenDistribution::one_hot("\n");
  }
  return TokenDistribution::one_hot(std::string(kEndOfSequence));
}

TokenDistribution ScriptedBackend::next_distribution(std::string_view context) {
  const auto cue = context.find(kResponseCue);
  if (cue == std::string_view::npos) {
    throw ScriptDesyncError("context does not contain the response cue");
  }
  const auto generated = context.substr(cue + kResponseCue.size());
  const auto marker = generated.rfind(spec_.probe_marker);
  if (marker != std::string_view::npos) {
    const auto state = replay(generated.substr(0, marker));
    return probe_distribution(state, generated.substr(marker + spec_.probe_marker.size()));
  }
  return distribution_at(replay(generated));
}

double simulated_latency(long long tokens, const ScriptedReasonerSpec& spec) {
  if (spec.per_token_latency < 0.0) throw ConfigError("per-token latency must be nonnegative");
  return static_cast<double>(tokens) * spec.per_token_latency;
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const ScriptedReasonerSpec& spec) {
  auto loops = nlohmann::json::array();
  for (const auto& l : spec.loops) {
    nlohmann::json lj{{"position", l.position},
                      {"trigger_word", l.trigger_word},
                      {"body_tokens", l.body_tokens},
                      {"emit_prob", l.emit_prob},
                      {"reveals_answer", l.reveals_answer}};
    if (l.max_cycles) lj["max_cycles"] = *l.max_cycles;
    loops.push_back(std::move(lj));
  }
  j = nlohmann::json{
      {"solution_tokens", spec.solution_tokens},
      {"t_star", spec.t_star},
      {"gold_answer", spec.gold_answer},
      {"loops", std::move(loops)},
      {"pre_solution_probe_entropy",
       spec.pre_solution_probe_entropy == ProbeEntropy::OneHot ? "one_hot" : "uniform_topk"},
      {"per_token_latency", spec.per_token_latency},
      {"filler_answer", spec.filler_answer},
      {"top_k", spec.top_k},
      {"probe_marker", spec.probe_marker},
  };
}

void from_json(const nlohmann::json& j, ScriptedReasonerSpec& spec) {
  spec = ScriptedReasonerSpec{};
  j.at("solution_tokens").get_to(spec.solution_tokens);
  spec.t_star = j.value("t_star", static_cast<int>(spec.solution_tokens.size()));
  spec.gold_answer = j.at("gold_answer").get<std::string>();
  if (j.contains("loops")) {
    for (const auto& lj : j.at("loops")) {
      ScriptLoop l;
      l.position = lj.at("position").get<int>();
      l.trigger_word = lj.value("trigger_word", std::string("Wait"));
      l.body_tokens = lj.value("body_tokens", std::vector<std::string>{});
      l.emit_prob = lj.at("emit_prob").get<double>();
      if (lj.contains("max_cycles") && !lj.at("max_cycles").is_null()) l.max_cycles = lj.at("max_cycles").get<int>();
      l.reveals_answer = lj.value("reveals_answer", false);
      spec.loops.push_back(std::move(l));
    }
  }
  const auto entropy = j.value("pre_solution_probe_entropy", std::string("uniform_topk"));
  if (entropy == "one_hot") {
    spec.pre_solution_probe_entropy = ProbeEntropy::OneHot;
  } else if (entropy == "uniform_topk") {
    spec.pre_solution_probe_entropy = ProbeEntropy::UniformTopK;
  } else {
    throw ConfigError("unknown pre_solution_probe_entropy '" + entropy + "'");
  }
  spec.per_token_latency = j.value("per_token_latency", spec.per_token_latency);
  spec.filler_answer = j.value("filler_answer", spec.filler_answer);
  spec.top_k = j.value("top_k", spec.top_k);
  spec.probe_marker = j.value("probe_marker", spec.probe_marker);
  spec.validate();
}

}  // namespace ars
