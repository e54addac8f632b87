#include <doctest.h>

#include <set>

#include "ars/error.hpp"
#include "ars/harness.hpp"
#include "ars/theorem_lab.hpp"

using namespace ars;

TEST_CASE("synthetic family is deterministic under its seed") {
  SyntheticFamilySpec spec;
  spec.n_instances = 10;
  spec.seed = 1;
  const auto a = synth_instances(spec);
  const auto b = synth_instances(spec);
  REQUIRE(a.size() == 10);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(nlohmann::json(a[i]) == nlohmann::json(b[i]));
  spec.seed = 2;
  CHECK(nlohmann::json(synth_instances(spec)[0]) != nlohmann::json(a[0]));
}

TEST_CASE("synthetic family shape") {
  SyntheticFamilySpec spec;
  spec.n_instances = 40;
  const auto scripts = synth_instances(spec);
  std::set<std::string> golds;
  for (const auto& s : scripts) {
    CHECK(s.t_star >= 50);
    CHECK(s.t_star <= 400);
    CHECK(s.solution_tokens.size() == static_cast<std::size_t>(s.t_star + 3));
    CHECK(s.solution_tokens[static_cast<std::size_t>(s.t_star - 1)] == " \\boxed{" + s.gold_answer + "}");
    REQUIRE(s.loops.size() == 3);
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(s.loops[j].position == s.t_star + static_cast<int>(j));
      CHECK(s.loops[j].body_tokens.size() + 1 == 40);
      CHECK(s.loops[j].emit_prob == 0.7);
    }
    golds.insert(s.gold_answer);
  }
  CHECK(golds.size() == scripts.size());
}

TEST_CASE("degenerate range and no loops") {
  SyntheticFamilySpec spec;
  spec.n_instances = 8;
  spec.t_star_range = {100, 100};
  spec.loops_per_instance = 0;
  const auto scripts = synth_instances(spec);
  for (const auto& s : scripts) CHECK(s.t_star == 100);
  const auto lengths = measure_family(scripts, SuppressionConfig{}, DifficultyLexicon::defaults());
  for (const auto& l : lengths) CHECK(l.t_vanilla == l.t_star);
}

TEST_CASE("infeasible families are rejected") {
  SyntheticFamilySpec spec;
  spec.t_star_range = {50, 1200};
  CHECK_THROWS_AS(synth_instances(spec), ConfigError);
  spec = {};
  spec.t_star_range = {0, 10};
  CHECK_THROWS_AS(synth_instances(spec), ConfigError);
  spec = {};
  spec.loops_per_instance = 4;
  spec.r_max = 3;
  CHECK_THROWS_AS(synth_instances(spec), ConfigError);
}

TEST_CASE("bound check arithmetic") {
  std::vector<InstanceLengths> exact{{100, 100, 150}, {200, 200, 260}, {50, 50, 90}};
  const auto r = empirical_bound_check(exact, 10.0, 0.1, 3);
  CHECK(r.epsilon_r_hat == 0.0);
  CHECK(r.fraction_within_bound == 1.0);
  CHECK(r.meets_target);

  std::vector<InstanceLengths> scaled{{100, 110, 0}, {200, 220, 0}, {50, 55, 0}};
  CHECK(empirical_bound_check(scaled, 0.0, 0.1, 3).epsilon_r_hat == doctest::Approx(0.1).epsilon(1e-12));

  std::vector<InstanceLengths> outlier(9, InstanceLengths{100, 100, 100});
  outlier.push_back({100, 1200, 1200});
  const auto o = empirical_bound_check(outlier, 0.0, 0.05, 3);
  CHECK(o.epsilon_r_hat == doctest::Approx(1.1));
  CHECK(o.fraction_within_bound == doctest::Approx(0.9));
  CHECK_FALSE(o.meets_target);

  CHECK(empirical_bound_check(exact, 10.0, 0.1, 3).slack_term == doctest::Approx(10.0 * std::sqrt(std::log(3.0))));
  std::vector<InstanceLengths> bad{{0, 10, 10}};
  CHECK_THROWS_AS(empirical_bound_check(bad, 10.0, 0.1, 3), ConfigError);
}

TEST_CASE("bound check flags an instance at the cap") {
  std::vector<InstanceLengths> runs(20, InstanceLengths{100, 102, 300});
  runs.push_back({100, 1200, 1200});
  const auto r = empirical_bound_check(runs, 1.0, 0.01, 3);
  CHECK(r.epsilon_r_hat < 0.6);
  CHECK(1200 > (1.0 + r.epsilon_r_hat) * 100 + r.slack_term);
  CHECK(r.fraction_within_bound == doctest::Approx(20.0 / 21.0));
}

TEST_CASE("epsilon is scale invariant without slack") {
  std::vector<InstanceLengths> base{{80, 95, 0}, {120, 160, 0}, {300, 310, 0}};
  const double eps = empirical_bound_check(base, 0.0, 0.1, 2).epsilon_r_hat;
  for (int k : {2, 3, 7}) {
    auto scaled = base;
    for (auto& s : scaled) {
      s.t_star *= k;
      s.t_ars *= k;
    }
    CHECK(empirical_bound_check(scaled, 0.0, 0.1, 2).epsilon_r_hat == doctest::Approx(eps).epsilon(1e-12));
  }
}

TEST_CASE("disabled suppression gives vanilla lengths") {
  SyntheticFamilySpec spec;
  spec.n_instances = 15;
  spec.seed = 9;
  const auto scripts = synth_instances(spec);
  SuppressionConfig cfg;
  cfg.trigger_set = TriggerSet({"Zzyzx"});
  const auto lengths = measure_family(scripts, cfg, DifficultyLexicon::defaults());
  for (const auto& l : lengths) CHECK(l.t_ars == l.t_vanilla);
}

TEST_CASE("more loops never shorten vanilla, ARS grows sub-linearly") {
  double prev_vanilla = 0.0;
  std::vector<double> ars_means;
  for (int loops : {0, 1, 2, 3}) {
    SyntheticFamilySpec spec;
    spec.n_instances = 60;
    spec.loops_per_instance = loops;
    spec.seed = 4;
    LabSettings settings;
    settings.family = spec;
    settings.sweep_intervals = {64};
    const auto report = run_lab(settings);
    CHECK(report.points[0].mean_t_vanilla >= prev_vanilla);
    prev_vanilla = report.points[0].mean_t_vanilla;
    ars_means.push_back(report.points[0].mean_t_ars);
  }
  const double first_step = ars_means[1] - ars_means[0];
  const double last_step = ars_means[3] - ars_means[2];
  CHECK(last_step < first_step);
}

TEST_CASE("needed-reflection instances hide the answer in the loop") {
  NeededReflectionSpec spec;
  spec.n_instances = 5;
  const auto scripts = needed_reflection_instances(spec);
  for (const auto& s : scripts) {
    std::string text;
    for (const auto& t : s.solution_tokens) text += t;
    CHECK(text.find(s.gold_answer) == std::string::npos);
    REQUIRE(s.loops.size() == 1);
    CHECK(s.loops[0].reveals_answer);
    CHECK(s.loops[0].max_cycles == 1);
  }
}

TEST_CASE("lab report documents") {
  LabSettings settings;
  settings.family.n_instances = 5;
  const auto report = run_lab(settings);
  REQUIRE(report.points.size() == 2);
  CHECK(report.points[0].checkpoint_interval == 64);
  CHECK(report.points[1].checkpoint_interval == 32);
  const auto doc = to_json_document(report);
  CHECK(doc["points"].size() == 2);
  const auto csv = per_instance_csv(report.points[0].report);
  CHECK(csv.starts_with("instance,t_star,t_ars,t_vanilla\n"));
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
}
