#include "ars/trace_io.hpp"

#include <fstream>
#include <ostream>

#include "ars/error.hpp"

namespace ars {

namespace {

StopReason stop_reason_from(const std::string& s) {
  if (s == "EOS") return StopReason::Eos;
  if (s == "TOKEN_CAP") return StopReason::TokenCap;
  throw ParseError("unknown stop_reason '" + s + "'", 0);
}

TraceStatus status_from(const std::string& s) {
  if (s == "OK") return TraceStatus::Ok;
  if (s == "ABORTED") return TraceStatus::Aborted;
  throw ParseError("unknown status '" + s + "'", 0);
}

}  // namespace

void to_json(nlohmann::json& j, const DifficultyScore& s) {
  j = {{"value", s.value}, {"length_term", s.length_term}, {"keyword_term", s.keyword_term}, {"symbol_term", s.symbol_term}};
}

void from_json(const nlohmann::json& j, DifficultyScore& s) {
  j.at("value").get_to(s.value);
  j.at("length_term").get_to(s.length_term);
  j.at("keyword_term").get_to(s.keyword_term);
  j.at("symbol_term").get_to(s.symbol_term);
}

void to_json(nlohmann::json& j, const ReasoningMode& m) {
  j = {{"tag", std::string(to_string(m.tag()))}};
  if (const auto* f = std::get_if<CoDFast>(&m.params())) {
    j["drafts"] = f->drafts;
    j["per_draft"] = f->per_draft;
  } else if (const auto* e = std::get_if<ElasticModerate>(&m.params())) {
    j["budget_tokens"] = e->budget_tokens;
  } else if (const auto* d = std::get_if<DeepReflect>(&m.params())) {
    j["sc_k"] = d->sc_k;
  }
}

void from_json(const nlohmann::json& j, ReasoningMode& m) {
  switch (mode_tag_from_string(j.at("tag").get<std::string>())) {
    case ModeTag::Fast:
      m = ReasoningMode(CoDFast{j.value("drafts", 2), j.value("per_draft", 10)});
      break;
    case ModeTag::Mod:
      m = ReasoningMode(ElasticModerate{j.value("budget_tokens", 64)});
      break;
    case ModeTag::Deep:
      m = ReasoningMode(DeepReflect{j.value("sc_k", 3)});
      break;
  }
}

void to_json(nlohmann::json& j, const CheckpointRecord& c) {
  j = {{"index", c.index},
       {"position", c.position},
       {"tentative_answer", c.tentative_answer},
       {"confidence", c.confidence},
       {"trend", c.trend},
       {"threshold", c.threshold},
       {"suppression_prob", c.suppression_prob},
       {"probe_tokens_used", c.probe_tokens_used}};
}

void from_json(const nlohmann::json& j, CheckpointRecord& c) {
  j.at("index").get_to(c.index);
  j.at("position").get_to(c.position);
  j.at("tentative_answer").get_to(c.tentative_answer);
  j.at("confidence").get_to(c.confidence);
  j.at("trend").get_to(c.trend);
  j.at("threshold").get_to(c.threshold);
  j.at("suppression_prob").get_to(c.suppression_prob);
  j.at("probe_tokens_used").get_to(c.probe_tokens_used);
}

void to_json(nlohmann::json& j, const SuppressionEvent& e) {
  j = {{"position", e.position},
       {"suppressed_token", e.suppressed_token},
       {"replacement_token", e.replacement_token},
       {"suppression_prob", e.suppression_prob},
       {"random_draw", e.random_draw},
       {"fallback", e.fallback}};
}

void from_json(const nlohmann::json& j, SuppressionEvent& e) {
  j.at("position").get_to(e.position);
  j.at("suppressed_token").get_to(e.suppressed_token);
  j.at("replacement_token").get_to(e.replacement_token);
  j.at("suppression_prob").get_to(e.suppression_prob);
  j.at("random_draw").get_to(e.random_draw);
  e.fallback = j.value("fallback", false);
}

void to_json(nlohmann::json& j, const SampleRecord& s) {
  j = {{"seed", s.seed},
       {"emitted_tokens", s.emitted_tokens},
       {"probe_tokens", s.probe_tokens},
       {"final_answer", s.final_answer},
       {"final_confidence", s.final_confidence()},
       {"stop_reason", std::string(to_string(s.stop_reason))},
       {"status", std::string(to_string(s.status))},
       {"text", s.text},
       {"tokens", s.tokens},
       {"checkpoints", s.checkpoints},
       {"suppression_events", s.suppression_events},
       {"warnings", s.warnings}};
  if (!s.error.empty()) j["error"] = s.error;
}

void from_json(const nlohmann::json& j, SampleRecord& s) {
  j.at("seed").get_to(s.seed);
  j.at("emitted_tokens").get_to(s.emitted_tokens);
  j.at("probe_tokens").get_to(s.probe_tokens);
  j.at("final_answer").get_to(s.final_answer);
  s.stop_reason = stop_reason_from(j.at("stop_reason").get<std::string>());
  s.status = status_from(j.at("status").get<std::string>());
  j.at("text").get_to(s.text);
  j.at("tokens").get_to(s.tokens);
  j.at("checkpoints").get_to(s.checkpoints);
  j.at("suppression_events").get_to(s.suppression_events);
  s.warnings = j.value("warnings", std::vector<std::string>{});
  s.error = j.value("error", std::string());
}

void to_json(nlohmann::json& j, const GenerationTrace& t) {
  j = nlohmann::json::object();
  j["query_id"] = t.query_id;
  j["method"] = t.method;
  j["mode"] = t.mode ? nlohmann::json(*t.mode) : nlohmann::json(nullptr);
  j["difficulty"] = t.difficulty ? nlohmann::json(*t.difficulty) : nlohmann::json(nullptr);
  j["text"] = t.text;
  j["tokens"] = t.tokens;
  j["emitted_tokens"] = t.emitted_tokens;
  j["probe_tokens"] = t.probe_tokens;
  j["cost_tokens"] = t.cost_tokens;
  j["checkpoints"] = t.checkpoints;
  j["suppression_events"] = t.suppression_events;
  j["final_answer"] = t.final_answer;
  j["stop_reason"] = std::string(to_string(t.stop_reason));
  j["status"] = std::string(to_string(t.status));
  if (!t.error.empty()) j["error"] = t.error;
  j["warnings"] = t.warnings;
  j["wall_latency"] = t.wall_latency;
  j["rng_seed"] = t.rng_seed;
  j["selected_sample"] = t.selected_sample;
  if (!t.samples.empty()) j["samples"] = t.samples;
}

void from_json(const nlohmann::json& j, GenerationTrace& t) {
  t = GenerationTrace{};
  j.at("query_id").get_to(t.query_id);
  t.method = j.value("method", std::string());
  if (j.contains("mode") && !j.at("mode").is_null()) t.mode = j.at("mode").get<ReasoningMode>();
  if (j.contains("difficulty") && !j.at("difficulty").is_null()) t.difficulty = j.at("difficulty").get<DifficultyScore>();
  j.at("text").get_to(t.text);
  t.tokens = j.value("tokens", std::vector<std::string>{});
  j.at("emitted_tokens").get_to(t.emitted_tokens);
  j.at("probe_tokens").get_to(t.probe_tokens);
  j.at("cost_tokens").get_to(t.cost_tokens);
  j.at("checkpoints").get_to(t.checkpoints);
  j.at("suppression_events").get_to(t.suppression_events);
  j.at("final_answer").get_to(t.final_answer);
  t.stop_reason = stop_reason_from(j.at("stop_reason").get<std::string>());
  t.status = status_from(j.at("status").get<std::string>());
  t.error = j.value("error", std::string());
  t.warnings = j.value("warnings", std::vector<std::string>{});
  j.at("wall_latency").get_to(t.wall_latency);
  j.at("rng_seed").get_to(t.rng_seed);
  t.selected_sample = j.value("selected_sample", 0);
  if (j.contains("samples")) j.at("samples").get_to(t.samples);
}

void write_trace_line(std::ostream& out, const GenerationTrace& trace, const nlohmann::json& extra) {
  nlohmann::json j = trace;
  if (extra.is_object()) {
    for (const auto& [k, v] : extra.items()) j[k] = v;
  }
  out << j.dump() << '\n';
}

std::vector<GenerationTrace> read_traces(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trace file '" + path + "'");
  std::vector<GenerationTrace> traces;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      traces.push_back(nlohmann::json::parse(line).get<GenerationTrace>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  return traces;
}

}  // namespace ars
