#pragma once

// Desk-scale measurement of the efficiency bound
//   E[T_ars] <= (1 + eps_R) * T* + c_slack * sqrt(ln R_max)
// on scripted instances whose optimal length T* is known by construction.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ars/engine.hpp"
#include "ars/scripted_backend.hpp"

namespace ars {

struct SyntheticFamilySpec {
  int n_instances = 100;
  std::pair<int, int> t_star_range{50, 400};
  int loop_length = 40;  // trigger plus body
  /// Redundant reflection loops per instance; stands in for reasoning complexity.
  int loops_per_instance = 3;
  double emit_prob = 0.7;
  int r_max = 3;
  std::uint64_t seed = 0;
  int max_tokens = 1200;

  /// Throws ConfigError for infeasible ranges or loops_per_instance > r_max.
  void validate() const;
};

/// Instances with T* drawn uniformly from t_star_range. The first T* tokens
/// solve the problem and end with a boxed gold answer; then one separator
/// token per loop follows, with loop j anchored at position T* + j. Gold
/// answers are distinct within a family.
std::vector<ScriptedReasonerSpec> synth_instances(const SyntheticFamilySpec& spec);

/// Instances whose only correct answer sits inside the first reflection body:
/// the solution states a wrong answer, a single-cycle loop near the end
/// (emit_prob 0.99) corrects it, and probes stay uncertain until that loop completes.
struct NeededReflectionSpec {
  int n_instances = 100;
  std::pair<int, int> length_range{40, 160};
  double emit_prob = 0.99;
  std::uint64_t seed = 0;

  void validate() const;
};

std::vector<ScriptedReasonerSpec> needed_reflection_instances(const NeededReflectionSpec& spec);

/// Short plain-text query for a scripted instance (schedules to FAST mode).
Query scripted_query(std::size_t index, const ScriptedReasonerSpec& script, std::string_view prefix = "synth");

struct InstanceLengths {
  int t_star = 0;
  int t_ars = 0;
  int t_vanilla = 0;

  bool operator==(const InstanceLengths&) const = default;
};

struct BoundReport {
  double epsilon_r_hat = 0.0;
  double slack_term = 0.0;
  double fraction_within_bound = 0.0;
  double delta_target = 0.1;
  bool meets_target = false;
  double c_slack = 10.0;
  int r_max = 1;
  std::vector<InstanceLengths> per_instance;
};

/// eps = max(0, mean((t_ars - slack) / t_star) - 1) with slack = c_slack * sqrt(ln r_max);
/// an instance is within the bound when t_ars <= (1 + eps) * t_star + slack.
/// Throws ConfigError for t_star <= 0, an empty input, r_max < 1 or delta outside [0,1].
BoundReport empirical_bound_check(std::span<const InstanceLengths> results, double c_slack, double delta,
                                  int r_max);

/// Runs ARS and the vanilla baseline on every instance. Seeds derive from
/// cfg.rng_seed and the instance id, so the worker count does not matter.
std::vector<InstanceLengths> measure_family(std::span<const ScriptedReasonerSpec> scripts,
                                            const SuppressionConfig& cfg, const DifficultyLexicon& lex,
                                            int workers = 1);

struct LabSettings {
  SyntheticFamilySpec family;
  SuppressionConfig suppression;
  DifficultyLexicon lexicon = DifficultyLexicon::defaults();
  double c_slack = 10.0;
  double delta = 0.1;
  /// Checkpoint intervals to sweep; empty means {interval, interval / 2}.
  std::vector<int> sweep_intervals;
  int workers = 1;
};

struct LabPoint {
  int checkpoint_interval = 0;
  double mean_t_ars = 0.0;
  double mean_t_vanilla = 0.0;
  BoundReport report;
};

struct LabReport {
  SyntheticFamilySpec family;
  std::vector<LabPoint> points;  // the first point uses suppression.checkpoint_interval
};

LabReport run_lab(const LabSettings& settings);

nlohmann::json to_json_document(const LabReport& report);
std::string per_instance_csv(const BoundReport& report);

}  // namespace ars
