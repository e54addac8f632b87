#include "ars/theorem_lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ars/error.hpp"
#include "ars/harness.hpp"
#include "parallel.hpp"

namespace ars {

namespace {

constexpr std::array<std::string_view, 10> kSolutionWords = {" we", " compute", " the", " value", " step",
                                                            " then", " add", " total", " carefully", " next"};
constexpr std::array<std::string_view, 8> kReflectionWords = {" let", " me", " recheck", " the",
                                                              " previous", " result", " once", " more"};

std::vector<std::string> solution_prefix(int length, Rng& rng) {
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(std::max(length, 0)));
  for (int i = 0; i < length; ++i) {
    out.emplace_back(kSolutionWords[static_cast<std::size_t>(rng.uniform_int(0, kSolutionWords.size() - 1))]);
  }
  return out;
}

std::vector<std::string> reflection_body(int length) {
  std::vector<std::string> out;
  for (int i = 0; i < length; ++i) out.emplace_back(kReflectionWords[static_cast<std::size_t>(i) % kReflectionWords.size()]);
  return out;
}

/// Distinct answers: a seeded base plus the instance index.
std::vector<long long> distinct_answers(int n, Rng& rng) {
  const auto base = rng.uniform_int(100, 900000);
  std::vector<long long> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = base + i;
  return out;
}

double mean_of(const std::vector<double>& v) {
  auto sorted = v;
  std::sort(sorted.begin(), sorted.end());
  return std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(sorted.size());
}

}  // namespace

void SyntheticFamilySpec::validate() const {
  if (n_instances < 1) throw ConfigError("n_instances must be at least 1");
  if (max_tokens < 2) throw ConfigError("max_tokens must be at least 2");
  const auto [lo, hi] = t_star_range;
  if (lo < 1 || hi < lo) throw ConfigError("t_star_range must satisfy 1 <= lo <= hi");
  if (hi + loops_per_instance >= max_tokens) {
    throw ConfigError("t_star_range plus loops must stay below max_tokens");
  }
  if (loop_length < 1) throw ConfigError("loop_length must be at least 1");
  if (loops_per_instance < 0) throw ConfigError("loops_per_instance must be nonnegative");
  if (r_max < 1) throw ConfigError("r_max must be at least 1");
  if (loops_per_instance > r_max) throw ConfigError("loops_per_instance must not exceed r_max");
  if (!(emit_prob >= 0.0 && emit_prob < 1.0)) throw ConfigError("emit_prob must lie in [0,1)");
  if (static_cast<long long>(n_instances) > 800000) throw ConfigError("too many instances for distinct answers");
}

std::vector<ScriptedReasonerSpec> synth_instances(const SyntheticFamilySpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto answers = distinct_answers(spec.n_instances, rng);
  std::vector<ScriptedReasonerSpec> out;
  out.reserve(static_cast<std::size_t>(spec.n_instances));
  for (int i = 0; i < spec.n_instances; ++i) {
    const int t_star = static_cast<int>(rng.uniform_int(spec.t_star_range.first, spec.t_star_range.second));
    const auto gold = std::to_string(answers[static_cast<std::size_t>(i)]);

    ScriptedReasonerSpec s;
    s.gold_answer = gold;
    s.t_star = t_star;
    const std::array<std::string, 3> ending = {" Final", " answer:", " \\boxed{" + gold + "}"};
    const int tail = std::min(t_star, 3);
    s.solution_tokens = solution_prefix(t_star - tail, rng);
    for (int k = 3 - tail; k < 3; ++k) s.solution_tokens.push_back(ending[static_cast<std::size_t>(k)]);
    for (int j = 0; j < spec.loops_per_instance; ++j) {
      s.solution_tokens.emplace_back(" ok");
      ScriptLoop loop;
      loop.position = t_star + j;
      loop.trigger_word = " Wait";
      loop.body_tokens = reflection_body(spec.loop_length - 1);
      loop.emit_prob = spec.emit_prob;
      s.loops.push_back(std::move(loop));
    }
    s.pre_solution_probe_entropy = ProbeEntropy::UniformTopK;
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

void NeededReflectionSpec::validate() const {
  if (n_instances < 1) throw ConfigError("n_instances must be at least 1");
  if (length_range.first < 8 || length_range.second < length_range.first) {
    throw ConfigError("length_range must satisfy 8 <= lo <= hi");
  }
  if (!(emit_prob > 0.0 && emit_prob <= 1.0)) throw ConfigError("emit_prob must lie in (0,1]");
  if (n_instances > 800000) throw ConfigError("too many instances for distinct answers");
}

std::vector<ScriptedReasonerSpec> needed_reflection_instances(const NeededReflectionSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto answers = distinct_answers(spec.n_instances, rng);
  std::vector<ScriptedReasonerSpec> out;
  for (int i = 0; i < spec.n_instances; ++i) {
    const auto g = answers[static_cast<std::size_t>(i)];
    const int length = static_cast<int>(rng.uniform_int(spec.length_range.first, spec.length_range.second));

    ScriptedReasonerSpec s;
    s.gold_answer = std::to_string(g);
    s.solution_tokens = solution_prefix(length - 6, rng);
    for (const char* t : {" so", " the", " answer", " is"}) s.solution_tokens.emplace_back(t);
    s.solution_tokens.push_back(" " + std::to_string(g + 1));
    s.solution_tokens.emplace_back(" Done.");
    s.t_star = static_cast<int>(s.solution_tokens.size());

    ScriptLoop loop;
    loop.position = s.t_star - 1;
    loop.trigger_word = " Wait";
    loop.body_tokens = {" that", " is", " off", " by", " one,", " so", " the", " answer", " is",
                        " \\boxed{" + s.gold_answer + "}"};
    loop.emit_prob = spec.emit_prob;
    loop.max_cycles = 1;
    loop.reveals_answer = true;
    s.loops.push_back(std::move(loop));
    s.validate();
    out.push_back(std::move(s));
  }
  return out;
}

Query scripted_query(std::size_t index, const ScriptedReasonerSpec& script, std::string_view prefix) {
  char id[64];
  std::snprintf(id, sizeof id, "%.*s-%04zu", static_cast<int>(prefix.size()), prefix.data(), index);
  Query q;
  q.id = id;
  q.text = "Report the stored value for this scripted instance.";
  q.gold_answer = script.gold_answer;
  q.dataset_kind = DatasetKind::Plain;
  return q;
}

BoundReport empirical_bound_check(std::span<const InstanceLengths> results, double c_slack, double delta,
                                  int r_max) {
  if (results.empty()) throw ConfigError("bound check needs at least one instance");
  if (r_max < 1) throw ConfigError("r_max must be at least 1");
  if (!(c_slack >= 0.0)) throw ConfigError("c_slack must be nonnegative");
  if (!(delta >= 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in [0,1]");
  for (const auto& r : results) {
    if (r.t_star <= 0) throw ConfigError("invalid instance: t_star must be positive");
  }

  BoundReport report;
  report.c_slack = c_slack;
  report.r_max = r_max;
  report.delta_target = delta;
  report.slack_term = c_slack * std::sqrt(std::log(static_cast<double>(r_max)));
  report.per_instance.assign(results.begin(), results.end());

  std::vector<double> ratios;
  ratios.reserve(results.size());
  for (const auto& r : results) ratios.push_back((r.t_ars - report.slack_term) / r.t_star);
  report.epsilon_r_hat = std::max(0.0, mean_of(ratios) - 1.0);

  std::size_t within = 0;
  for (const auto& r : results) {
    const double bound = (1.0 + report.epsilon_r_hat) * r.t_star + report.slack_term;
    // Absorbs rounding in the fitted epsilon when an instance sits exactly on the bound.
    if (r.t_ars <= bound + 1e-9 * r.t_star) ++within;
  }
  report.fraction_within_bound = static_cast<double>(within) / static_cast<double>(results.size());
  report.meets_target = report.fraction_within_bound >= 1.0 - delta;
  return report;
}

std::vector<InstanceLengths> measure_family(std::span<const ScriptedReasonerSpec> scripts,
                                            const SuppressionConfig& cfg, const DifficultyLexicon& lex,
                                            int workers) {
  cfg.validate();
  std::vector<InstanceLengths> out(scripts.size());
  detail::parallel_for(scripts.size(), workers, [&](std::size_t i) {
    ScriptedBackend backend(scripts[i]);
    const auto q = scripted_query(i, scripts[i]);
    SuppressionConfig c = cfg;
    c.rng_seed = query_seed(cfg.rng_seed, q.id);
    const auto ars = generate_with_ars(q, backend, c, lex);
    const auto vanilla = generate_with_fixed_suppression(q, build_vanilla_prompt(q, q.dataset_kind), backend, c, 0.0);
    if (ars.status != TraceStatus::Ok) throw BackendError("instance " + q.id + " aborted: " + ars.error);
    if (vanilla.status != TraceStatus::Ok) throw BackendError("instance " + q.id + " aborted: " + vanilla.error);
    out[i] = {scripts[i].t_star, ars.emitted_tokens, vanilla.emitted_tokens};
  });
  return out;
}

LabReport run_lab(const LabSettings& settings) {
  auto family = settings.family;
  family.max_tokens = settings.suppression.max_tokens;
  const auto scripts = synth_instances(family);

  std::vector<int> intervals = settings.sweep_intervals;
  if (intervals.empty()) {
    intervals.push_back(settings.suppression.checkpoint_interval);
    if (settings.suppression.checkpoint_interval >= 2) intervals.push_back(settings.suppression.checkpoint_interval / 2);
  }

  LabReport report;
  report.family = family;
  for (int interval : intervals) {
    SuppressionConfig cfg = settings.suppression;
    cfg.checkpoint_interval = interval;
    const auto lengths = measure_family(scripts, cfg, settings.lexicon, settings.workers);
    LabPoint point;
    point.checkpoint_interval = interval;
    std::vector<double> ars;
    std::vector<double> vanilla;
    for (const auto& l : lengths) {
      ars.push_back(l.t_ars);
      vanilla.push_back(l.t_vanilla);
    }
    point.mean_t_ars = mean_of(ars);
    point.mean_t_vanilla = mean_of(vanilla);
    point.report = empirical_bound_check(lengths, settings.c_slack, settings.delta, family.r_max);
    report.points.push_back(std::move(point));
  }
  return report;
}

nlohmann::json to_json_document(const LabReport& report) {
  const auto& f = report.family;
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : report.points) {
    points.push_back({{"checkpoint_interval", p.checkpoint_interval},
                      {"mean_t_ars", p.mean_t_ars},
                      {"mean_t_vanilla", p.mean_t_vanilla},
                      {"epsilon_r_hat", p.report.epsilon_r_hat},
                      {"slack_term", p.report.slack_term},
                      {"fraction_within_bound", p.report.fraction_within_bound},
                      {"delta_target", p.report.delta_target},
                      {"meets_target", p.report.meets_target},
                      {"c_slack", p.report.c_slack}});
  }
  return {{"family",
           {{"n_instances", f.n_instances},
            {"t_star_range", {f.t_star_range.first, f.t_star_range.second}},
            {"loop_length", f.loop_length},
            {"loops_per_instance", f.loops_per_instance},
            {"emit_prob", f.emit_prob},
            {"r_max", f.r_max},
            {"seed", f.seed},
            {"max_tokens", f.max_tokens}}},
          {"points", std::move(points)}};
}

std::string per_instance_csv(const BoundReport& report) {
  std::string out = "instance,t_star,t_ars,t_vanilla\n";
  for (std::size_t i = 0; i < report.per_instance.size(); ++i) {
    const auto& r = report.per_instance[i];
    out += std::to_string(i) + ',' + std::to_string(r.t_star) + ',' + std::to_string(r.t_ars) + ',' +
           std::to_string(r.t_vanilla) + '\n';
  }
  return out;
}

}  // namespace ars
