#include "ars/engine.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <map>

#include "ars/answer.hpp"
#include "ars/error.hpp"

namespace ars {

// ---------------------------------------------------------------------------
// Triggers

TriggerSet::TriggerSet(std::vector<std::string> words, bool case_sensitive)
    : words_(std::move(words)), case_sensitive_(case_sensitive) {
  if (words_.empty()) throw ConfigError("trigger set must not be empty");
  for (const auto& w : words_) {
    if (w.empty()) throw ConfigError("trigger words must be non-empty");
    if (std::isspace(static_cast<unsigned char>(w.front())) || std::isspace(static_cast<unsigned char>(w.back()))) {
      throw ConfigError("trigger word '" + w + "' has surrounding whitespace");
    }
  }
}

TriggerSet TriggerSet::defaults() { return TriggerSet({"Wait", "But", "Alternatively", "However", "Hmm"}); }

namespace {

bool is_letter(char c) {
  const auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalpha(u) != 0;
}

bool prefix_equal(std::string_view text, std::string_view word, bool case_sensitive) {
  if (text.size() < word.size()) return false;
  if (case_sensitive) return text.starts_with(word);
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) != std::tolower(static_cast<unsigned char>(word[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool detect_trigger(std::string_view token_text, const TriggerSet& triggers) {
  const auto start = token_text.find_first_not_of(" \t\r\n\f\v");
  if (start == std::string_view::npos) return false;
  const auto body = token_text.substr(start);
  for (const auto& w : triggers.words()) {
    if (!prefix_equal(body, w, triggers.case_sensitive())) continue;
    if (body.size() == w.size() || !is_letter(body[w.size()])) return true;
  }
  return false;
}

ResampleResult resample_non_trigger(const TokenDistribution& dist, const TriggerSet& triggers, Rng& rng) {
  validate_distribution(dist);
  const TokenMask is_trigger = [&](std::string_view t) { return detect_trigger(t, triggers); };
  if (!(unmasked_mass(dist, is_trigger) >= kDegenerateMass)) return {std::string(kFallbackToken), true};
  return {sample(dist, rng, is_trigger), false};
}

std::string_view to_string(StopReason r) { return r == StopReason::Eos ? "EOS" : "TOKEN_CAP"; }
std::string_view to_string(TraceStatus s) { return s == TraceStatus::Ok ? "OK" : "ABORTED"; }

void SuppressionConfig::validate() const {
  if (checkpoint_interval < 1) throw ConfigError("checkpoint interval must be at least 1");
  if (max_tokens < 1) throw ConfigError("max_tokens must be at least 1");
  if (!(d1 >= 0.0 && d1 < d2 && d2 <= 1.0)) throw ConfigError("difficulty cut points must satisfy 0 <= d1 < d2 <= 1");
  adaptation.validate();
  probe.validate();
}

// ---------------------------------------------------------------------------
// Generation loop

namespace {

struct LoopPolicy {
  const ReasoningMode* mode = nullptr;  // set: adaptive checkpoints; null: fixed probability
  double fixed_prob = 0.0;
};

constexpr std::uint64_t kProbeStream = 0x70726f6265ULL;

SampleRecord run_sample(std::string_view prompt, GeneratorBackend& backend, const SuppressionConfig& cfg,
                        const LoopPolicy& policy, std::uint64_t seed) {
  SampleRecord rec;
  rec.seed = seed;
  Rng rng(seed);
  std::string context(prompt);
  double suppression_prob = policy.mode ? 0.0 : policy.fixed_prob;
  std::vector<double> scores;
  bool ended = false;

  try {
    while (rec.emitted_tokens < cfg.max_tokens) {
      if (policy.mode && rec.emitted_tokens > 0 && rec.emitted_tokens % cfg.checkpoint_interval == 0) {
        const int index = static_cast<int>(rec.checkpoints.size());
        try {
          Rng probe_rng(derive_seed(seed, kProbeStream + static_cast<std::uint64_t>(index)));
          const auto probe = probe_answer(context, backend, cfg.probe, probe_rng);
          rec.probe_tokens += probe.tokens_used;
          CheckpointRecord ck;
          ck.index = index;
          ck.position = rec.emitted_tokens;
          ck.tentative_answer = probe.tentative_answer;
          ck.confidence = entropy_confidence(probe.dists, cfg.probe.k_top);
          scores.push_back(ck.confidence);
          ck.trend = compute_trend(scores, cfg.adaptation.trend_window);
          ck.threshold = adaptive_threshold(ck.confidence, ck.trend, *policy.mode, cfg.adaptation);
          ck.suppression_prob = suppression_probability(ck.confidence, ck.threshold, cfg.adaptation.ramp_exponent);
          ck.probe_tokens_used = probe.tokens_used;
          suppression_prob = ck.suppression_prob;
          rec.checkpoints.push_back(std::move(ck));
        } catch (const BackendError& e) {
          rec.warnings.push_back("checkpoint at position " + std::to_string(rec.emitted_tokens) +
                                 " skipped: " + e.what());
        } catch (const InvalidDistributionError& e) {
          rec.warnings.push_back("checkpoint at position " + std::to_string(rec.emitted_tokens) +
                                 " skipped: " + e.what());
        }
      }

      const auto dist = backend.next_distribution(context);
      validate_distribution(dist);
      std::string token = sample(dist, rng);
      if (token == kEndOfSequence) {
        ended = true;
        break;
      }
      if (detect_trigger(token, cfg.trigger_set)) {
        const double draw = rng.uniform();
        if (suppression_prob > draw) {
          auto replacement = resample_non_trigger(dist, cfg.trigger_set, rng);
          rec.suppression_events.push_back(SuppressionEvent{rec.emitted_tokens, token, replacement.token,
                                                            suppression_prob, draw, replacement.fallback});
          token = std::move(replacement.token);
          if (token == kEndOfSequence) {
            ended = true;
            break;
          }
        }
      }
      context += token;
      rec.text += token;
      rec.tokens.push_back(std::move(token));
      ++rec.emitted_tokens;
    }
    rec.stop_reason = ended ? StopReason::Eos : StopReason::TokenCap;
  } catch (const BackendError& e) {
    rec.status = TraceStatus::Aborted;
    rec.error = e.what();
  } catch (const InvalidDistributionError& e) {
    rec.status = TraceStatus::Aborted;
    rec.error = e.what();
  }
  rec.final_answer = extract_final_answer(rec.text);
  return rec;
}

void require_text(const Query& q) {
  if (q.text.find_first_not_of(" \t\r\n\f\v") == std::string::npos) {
    throw ConfigError("query '" + q.id + "' has empty text");
  }
}

GenerationTrace assemble(const Query& q, std::vector<SampleRecord> samples, std::size_t selected,
                         const GeneratorBackend& backend, double measured_seconds) {
  GenerationTrace t;
  t.query_id = q.id;
  auto& best = samples[selected];
  t.tokens = best.tokens;
  t.text = best.text;
  t.emitted_tokens = best.emitted_tokens;
  t.checkpoints = best.checkpoints;
  t.suppression_events = best.suppression_events;
  t.final_answer = best.final_answer;
  t.stop_reason = best.stop_reason;
  t.selected_sample = static_cast<int>(selected);
  t.rng_seed = samples.front().seed;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    t.probe_tokens += s.probe_tokens;
    t.cost_tokens += s.emitted_tokens + s.probe_tokens;
    if (s.status == TraceStatus::Aborted && t.status == TraceStatus::Ok) {
      t.status = TraceStatus::Aborted;
      t.error = s.error;
    }
    for (const auto& w : s.warnings) {
      t.warnings.push_back(samples.size() > 1 ? "sample " + std::to_string(i) + ": " + w : w);
    }
  }
  const auto d = backend.descriptor();
  t.wall_latency = d.per_token_latency ? static_cast<double>(t.cost_tokens) * *d.per_token_latency : measured_seconds;
  if (samples.size() > 1) t.samples = std::move(samples);
  return t;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

std::size_t vote(const std::vector<SampleRecord>& samples) {
  if (samples.empty()) throw ConfigError("cannot vote over zero samples");
  std::map<std::string, int> counts;
  for (const auto& s : samples) {
    if (!s.final_answer.empty()) ++counts[s.final_answer];
  }
  int top = 0;
  for (const auto& [answer, n] : counts) top = std::max(top, n);

  std::size_t best = samples.size();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    const bool eligible = counts.empty() || (!s.final_answer.empty() && counts[s.final_answer] == top);
    if (!eligible) continue;
    if (best == samples.size() || s.final_confidence() > samples[best].final_confidence()) best = i;
  }
  return best;
}

GenerationTrace generate_with_ars(const Query& q, GeneratorBackend& backend, const SuppressionConfig& cfg,
                                  const DifficultyLexicon& lex) {
  cfg.validate();
  require_text(q);
  const auto score = heuristic_difficulty(q, lex);
  const auto mode = schedule_mode(score, cfg.d1, cfg.d2);
  const auto prompt = build_prompt(mode, q, q.dataset_kind);

  const auto start = std::chrono::steady_clock::now();
  std::vector<SampleRecord> samples;
  const int k = mode.samples();
  for (int i = 0; i < k; ++i) {
    const auto seed = i == 0 ? cfg.rng_seed : derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(i));
    samples.push_back(run_sample(prompt, backend, cfg, LoopPolicy{&mode, 0.0}, seed));
  }
  const auto selected = vote(samples);
  auto trace = assemble(q, std::move(samples), selected, backend, seconds_since(start));
  trace.method = "ars";
  trace.mode = mode;
  trace.difficulty = score;
  return trace;
}

GenerationTrace generate_with_fixed_suppression(const Query& q, std::string_view prompt, GeneratorBackend& backend,
                                                const SuppressionConfig& cfg, double suppression_prob) {
  cfg.validate();
  require_text(q);
  if (!(suppression_prob >= 0.0 && suppression_prob <= 1.0)) {
    throw ConfigError("fixed suppression probability must lie in [0,1]");
  }
  const auto start = std::chrono::steady_clock::now();
  std::vector<SampleRecord> samples;
  samples.push_back(run_sample(prompt, backend, cfg, LoopPolicy{nullptr, suppression_prob}, cfg.rng_seed));
  return assemble(q, std::move(samples), 0, backend, seconds_since(start));
}

}  // namespace ars
