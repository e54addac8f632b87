#include <fstream>
#include <set>

#include "ars/error.hpp"
#include "ars/harness.hpp"

namespace ars {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view section) {
  if (!j.is_object()) throw ConfigError("config section '" + std::string(section) + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ConfigError("unknown key '" + key + "' in config section '" + std::string(section) + "'");
  }
}

template <typename T>
void read(const json& j, std::string_view key, T& out) {
  const std::string k(key);
  if (!j.contains(k)) return;
  try {
    j.at(k).get_to(out);
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + k + "': " + e.what());
  }
}

std::string energy_mode_name(EnergyMode m) {
  return m == EnergyMode::PowerTimesLatency ? "power_times_latency" : "joules_per_token";
}

}  // namespace

void EnergyModel::validate() const {
  if (mode == EnergyMode::PowerTimesLatency && !(device_power_watts > 0.0)) {
    throw ConfigError("device_power_watts must be positive");
  }
  if (mode == EnergyMode::JoulesPerToken && !(joules_per_token > 0.0)) {
    throw ConfigError("joules_per_token must be positive");
  }
}

double EnergyModel::energy(const GenerationTrace& trace) const {
  if (mode == EnergyMode::PowerTimesLatency) return device_power_watts * trace.wall_latency;
  return joules_per_token * static_cast<double>(trace.cost_tokens);
}

void BaselineConfig::validate() const {
  if (kind == BaselineKind::StaticSuppress && !(static_p >= 0.0 && static_p <= 1.0)) {
    throw ConfigError("static suppression probability must lie in [0,1]");
  }
  if (kind == BaselineKind::BudgetPrompt && budget < 1) throw ConfigError("budget must be at least 1 token");
}

void HarnessConfig::validate() const {
  suppression.validate();
  energy.validate();
  if (!(static_p >= 0.0 && static_p <= 1.0)) throw ConfigError("static_p must lie in [0,1]");
  if (budget_tokens < 1) throw ConfigError("budget_tokens must be at least 1");
  if (n < 1) throw ConfigError("n must be at least 1");
  if (workers < 1) throw ConfigError("workers must be at least 1");
}

HarnessConfig config_from_json(const json& j) {
  check_keys(j, {"suppression", "triggers", "adaptation", "probe", "lexicon", "energy", "baselines", "http", "harness"},
             "top level");
  HarnessConfig cfg;
  auto& s = cfg.suppression;

  if (j.contains("suppression")) {
    const auto& sj = j["suppression"];
    check_keys(sj, {"checkpoint_interval", "max_tokens", "rng_seed", "d1", "d2"}, "suppression");
    read(sj, "checkpoint_interval", s.checkpoint_interval);
    read(sj, "max_tokens", s.max_tokens);
    read(sj, "rng_seed", s.rng_seed);
    read(sj, "d1", s.d1);
    read(sj, "d2", s.d2);
  }
  if (j.contains("triggers")) {
    const auto& tj = j["triggers"];
    check_keys(tj, {"words", "case_sensitive"}, "triggers");
    auto words = s.trigger_set.words();
    bool case_sensitive = s.trigger_set.case_sensitive();
    read(tj, "words", words);
    read(tj, "case_sensitive", case_sensitive);
    s.trigger_set = TriggerSet(std::move(words), case_sensitive);
  }
  if (j.contains("adaptation")) {
    const auto& aj = j["adaptation"];
    check_keys(aj, {"thresholds", "trend_window", "trend_gain", "threshold_floor", "ramp_exponent"}, "adaptation");
    auto& a = s.adaptation;
    if (aj.contains("thresholds")) {
      const auto& th = aj["thresholds"];
      check_keys(th, {"FAST", "MOD", "DEEP"}, "adaptation.thresholds");
      read(th, "FAST", a.fast_threshold);
      read(th, "MOD", a.mod_threshold);
      read(th, "DEEP", a.deep_threshold);
    }
    read(aj, "trend_window", a.trend_window);
    read(aj, "trend_gain", a.trend_gain);
    read(aj, "threshold_floor", a.threshold_floor);
    read(aj, "ramp_exponent", a.ramp_exponent);
  }
  if (j.contains("probe")) {
    const auto& pj = j["probe"];
    check_keys(pj, {"prompt", "budget", "greedy", "k_top"}, "probe");
    read(pj, "prompt", s.probe.probe_prompt);
    read(pj, "budget", s.probe.probe_budget);
    read(pj, "greedy", s.probe.probe_greedy);
    read(pj, "k_top", s.probe.k_top);
  }
  if (j.contains("lexicon")) {
    const auto& lj = j["lexicon"];
    check_keys(lj, {"keywords", "symbol_chars"}, "lexicon");
    auto keywords = cfg.lexicon.keywords();
    auto symbols = cfg.lexicon.symbol_chars_utf8();
    read(lj, "keywords", keywords);
    read(lj, "symbol_chars", symbols);
    cfg.lexicon = DifficultyLexicon(std::move(keywords), std::move(symbols));
  }
  if (j.contains("energy")) {
    const auto& ej = j["energy"];
    check_keys(ej, {"mode", "device_power_watts", "joules_per_token"}, "energy");
    std::string mode = energy_mode_name(cfg.energy.mode);
    read(ej, "mode", mode);
    if (mode == "power_times_latency") {
      cfg.energy.mode = EnergyMode::PowerTimesLatency;
    } else if (mode == "joules_per_token") {
      cfg.energy.mode = EnergyMode::JoulesPerToken;
    } else {
      throw ConfigError("unknown energy mode '" + mode + "'");
    }
    read(ej, "device_power_watts", cfg.energy.device_power_watts);
    read(ej, "joules_per_token", cfg.energy.joules_per_token);
  }
  if (j.contains("baselines")) {
    const auto& bj = j["baselines"];
    check_keys(bj, {"static_p", "budget_tokens"}, "baselines");
    read(bj, "static_p", cfg.static_p);
    read(bj, "budget_tokens", cfg.budget_tokens);
  }
  if (j.contains("http")) {
    const auto& hj = j["http"];
    check_keys(hj, {"base_url", "path", "model", "api_key_env", "top_k", "max_in_flight", "max_attempts", "backoff_ms",
                    "timeout_s", "eos_tokens"},
               "http");
    try {
      from_json(hj, cfg.http);
    } catch (const json::exception& e) {
      throw ConfigError(std::string("config section 'http': ") + e.what());
    }
  }
  if (j.contains("harness")) {
    const auto& hj = j["harness"];
    check_keys(hj, {"n", "workers"}, "harness");
    read(hj, "n", cfg.n);
    read(hj, "workers", cfg.workers);
  }
  cfg.validate();
  return cfg;
}

HarnessConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const HarnessConfig& cfg) {
  const auto& s = cfg.suppression;
  const auto& a = s.adaptation;
  return json{
      {"suppression",
       {{"checkpoint_interval", s.checkpoint_interval},
        {"max_tokens", s.max_tokens},
        {"rng_seed", s.rng_seed},
        {"d1", s.d1},
        {"d2", s.d2}}},
      {"triggers", {{"words", s.trigger_set.words()}, {"case_sensitive", s.trigger_set.case_sensitive()}}},
      {"adaptation",
       {{"thresholds", {{"FAST", a.fast_threshold}, {"MOD", a.mod_threshold}, {"DEEP", a.deep_threshold}}},
        {"trend_window", a.trend_window},
        {"trend_gain", a.trend_gain},
        {"threshold_floor", a.threshold_floor},
        {"ramp_exponent", a.ramp_exponent}}},
      {"probe",
       {{"prompt", s.probe.probe_prompt},
        {"budget", s.probe.probe_budget},
        {"greedy", s.probe.probe_greedy},
        {"k_top", s.probe.k_top}}},
      {"lexicon", {{"keywords", cfg.lexicon.keywords()}, {"symbol_chars", cfg.lexicon.symbol_chars_utf8()}}},
      {"energy",
       {{"mode", energy_mode_name(cfg.energy.mode)},
        {"device_power_watts", cfg.energy.device_power_watts},
        {"joules_per_token", cfg.energy.joules_per_token}}},
      {"baselines", {{"static_p", cfg.static_p}, {"budget_tokens", cfg.budget_tokens}}},
      {"http",
       {{"base_url", cfg.http.base_url},
        {"path", cfg.http.path},
        {"model", cfg.http.model},
        {"api_key_env", cfg.http.api_key_env},
        {"top_k", cfg.http.top_k},
        {"max_in_flight", cfg.http.max_in_flight},
        {"max_attempts", cfg.http.max_attempts},
        {"backoff_ms", cfg.http.initial_backoff.count()},
        {"timeout_s", cfg.http.timeout.count()},
        {"eos_tokens", cfg.http.eos_tokens}}},
      {"harness", {{"n", cfg.n}, {"workers", cfg.workers}}},
  };
}

}  // namespace ars
