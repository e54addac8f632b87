#include <doctest.h>

#include <cmath>
#include <vector>

#include "ars/certainty.hpp"
#include "ars/error.hpp"
#include "ars/scripted_backend.hpp"

using namespace ars;

namespace {

TokenDistribution uniform(int k) {
  TokenDistribution d;
  for (int i = 0; i < k; ++i) d.candidates.push_back({"t" + std::to_string(i), 1.0 / k});
  return d;
}

// 1 - (-0.9 ln 0.9 - 0.1 ln 0.1) / ln 2, evaluated by hand before the build.
constexpr double kConfidence91 = 0.5310044064107189;

ScriptedReasonerSpec short_script() {
  ScriptedReasonerSpec s;
  s.solution_tokens = {" a", " b", " c", " \\boxed{7}"};
  s.t_star = 4;
  s.gold_answer = "7";
  s.top_k = 5;
  return s;
}

}  // namespace

TEST_CASE("entropy confidence boundary cases") {
  const std::vector<TokenDistribution> hot(4, TokenDistribution::one_hot("x"));
  CHECK(entropy_confidence(hot, 20) == 1.0);
  const std::vector<TokenDistribution> flat(3, uniform(20));
  CHECK(entropy_confidence(flat, 20) == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<TokenDistribution> half{TokenDistribution{{{"a", 0.5}, {"b", 0.5}}, false}};
  CHECK(entropy_confidence(half, 2) == doctest::Approx(0.0).epsilon(1e-12));
  const std::vector<TokenDistribution> skew{TokenDistribution{{{"a", 0.9}, {"b", 0.1}}, false}};
  CHECK(std::abs(entropy_confidence(skew, 2) - kConfidence91) <= 1e-3);
  CHECK(entropy_confidence(skew, 2) == doctest::Approx(kConfidence91).epsilon(1e-12));
  CHECK(entropy_confidence(std::vector<TokenDistribution>{}, 20) == 0.0);
}

TEST_CASE("entropy confidence keeps the top k and renormalizes") {
  TokenDistribution d{{{"a", 0.5}, {"b", 0.3}, {"c", 0.2}}, false};
  const std::vector<TokenDistribution> one{d};
  // Top-2 renormalized to {0.625, 0.375}.
  const double h = -(0.625 * std::log(0.625) + 0.375 * std::log(0.375));
  CHECK(entropy_confidence(one, 2) == doctest::Approx(std::max(0.0, 1.0 - h / std::log(2.0))));
  for (int k : {2, 3, 5, 20}) {
    const double c = entropy_confidence(one, k);
    CHECK(c >= 0.0);
    CHECK(c <= 1.0);
  }
}

TEST_CASE("trend is the OLS slope over the window") {
  const std::vector<double> up{0.1, 0.2, 0.3};
  CHECK(std::abs(compute_trend(up, 3) - 0.1) <= 1e-12);
  const std::vector<double> flat{0.7, 0.7, 0.7};
  CHECK(compute_trend(flat, 3) == doctest::Approx(0.0));
  const std::vector<double> down{0.3, 0.2, 0.1};
  CHECK(compute_trend(down, 3) == doctest::Approx(-compute_trend(up, 3)));
  const std::vector<double> longer{0.9, 0.0, 0.1, 0.2, 0.3};
  CHECK(compute_trend(longer, 3) == doctest::Approx(0.1));
  const std::vector<double> single{0.5};
  CHECK(compute_trend(single, 3) == 0.0);
}

TEST_CASE("adaptive threshold") {
  AdaptationConfig cfg;
  const auto mod = ReasoningMode::with_defaults(ModeTag::Mod);
  const auto fast = ReasoningMode::with_defaults(ModeTag::Fast);
  CHECK(adaptive_threshold(0.5, -0.3, mod, cfg) == 0.75);
  CHECK(adaptive_threshold(0.5, 0.0, mod, cfg) == 0.75);
  CHECK(adaptive_threshold(0.5, 0.2, mod, cfg) == doctest::Approx(0.65).epsilon(1e-12));
  cfg.trend_gain = 10.0;
  CHECK(adaptive_threshold(0.5, 1.0, fast, cfg) == 0.30);
  CHECK(adaptive_threshold(0.5, 0.0, ReasoningMode::with_defaults(ModeTag::Deep), AdaptationConfig{}) == 0.85);
}

TEST_CASE("suppression ramp") {
  CHECK(suppression_probability(0.6, 0.6, 1.0) == 0.0);
  CHECK(suppression_probability(1.0, 0.6, 1.0) == 1.0);
  CHECK(suppression_probability(1.0, 0.3, 2.0) == 1.0);
  CHECK(suppression_probability(0.8, 0.6, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(suppression_probability(0.2, 0.6, 1.0) == 0.0);
  CHECK_THROWS_AS(suppression_probability(0.8, 1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(suppression_probability(0.8, 0.5, 0.0), ConfigError);
}

TEST_CASE("adaptation config validation") {
  AdaptationConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.fast_threshold = 0.9;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.trend_window = 1;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = {};
  cfg.threshold_floor = 0.7;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("probe after the solution point returns the gold answer one-hot") {
  ScriptedBackend backend(short_script());
  Rng rng(1);
  const std::string context = std::string("prompt") + std::string(kResponseCue) + " a b c \\boxed{7}";
  const auto r = probe_answer(context, backend, ProbeConfig{}, rng);
  CHECK(r.tentative_answer == "7");
  REQUIRE(r.dists.size() == 1);
  CHECK(r.dists[0].candidates.size() == 1);
  CHECK(r.dists[0].candidates[0].probability == 1.0);
  CHECK(entropy_confidence(r.dists, 20) == 1.0);
}

TEST_CASE("probe before the solution point is uniform filler") {
  ScriptedBackend backend(short_script());
  Rng rng(1);
  const std::string context = std::string("prompt") + std::string(kResponseCue) + " a";
  const auto r = probe_answer(context, backend, ProbeConfig{}, rng);
  CHECK(r.tentative_answer == "unsure");
  REQUIRE(r.dists.size() == 1);
  CHECK(r.dists[0].candidates.size() == 5);
  for (const auto& c : r.dists[0].candidates) CHECK(c.probability == doctest::Approx(0.2));
  CHECK(entropy_confidence(r.dists, 5) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("probe budget caps returned tokens") {
  ScriptedBackend backend(short_script());
  Rng rng(1);
  ProbeConfig cfg;
  cfg.probe_budget = 1;
  const std::string context = std::string("p") + std::string(kResponseCue) + " a b c \\boxed{7}";
  const auto r = probe_answer(context, backend, cfg, rng);
  CHECK(r.tokens_used <= 1);
  CHECK(r.dists.size() <= 1);
}
