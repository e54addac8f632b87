#include <doctest.h>

#include <string>

#include "ars/difficulty.hpp"
#include "ars/error.hpp"

using namespace ars;

namespace {

Query make_query(std::string text) {
  Query q;
  q.id = "q";
  q.text = std::move(text);
  return q;
}

std::string plain_words(int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += (i ? " apple" : "apple");
  return s;
}

// Hand-counted: 33 words, 5 keyword hits (polynomial, function, root,
// equation, remainder), 11 symbols -> 0.4*33/80 + 0.4*5/60 + 0.2*1.
constexpr const char* kMathFixture =
    "Let $f(x) = x^2 - 4x + 3$ be a polynomial function. Find the sum of every root of the equation "
    "$f(x) = 0$ and the remainder when $f(7)$ is divided by $5$.";
constexpr double kMathFixtureDifficulty = 0.39833333333333333;

}  // namespace

TEST_CASE("empty text scores zero") {
  const auto s = heuristic_difficulty(make_query(""), DifficultyLexicon::defaults());
  CHECK(s.value == 0.0);
  CHECK(s.length_term == 0.0);
  CHECK(s.keyword_term == 0.0);
  CHECK(s.symbol_term == 0.0);
}

TEST_CASE("forty plain words only contribute the length term") {
  const auto s = heuristic_difficulty(make_query(plain_words(40)), DifficultyLexicon::defaults());
  CHECK(s.value == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(s.keyword_term == 0.0);
  CHECK(s.symbol_term == 0.0);
}

TEST_CASE("math fixture matches the hand-evaluated golden value") {
  const Query q = make_query(kMathFixture);
  const auto lex = DifficultyLexicon::defaults();
  CHECK(count_words(q.text) == 33);
  CHECK(count_symbols(q.text, lex) == 11);
  const auto s = heuristic_difficulty(q, lex);
  CHECK(s.value == doctest::Approx(kMathFixtureDifficulty).epsilon(1e-12));
  CHECK(schedule_mode(s, kDefaultD1, kDefaultD2).tag() == ModeTag::Mod);
}

TEST_CASE("score stays in range and decomposes into its terms") {
  const auto lex = DifficultyLexicon::defaults();
  std::string text;
  for (int i = 0; i < 300; ++i) {
    text += (i % 3 == 0 ? " prove" : i % 3 == 1 ? " x^2+1=" : " word");
    const auto s = heuristic_difficulty(make_query(text), lex);
    CHECK(s.value >= 0.0);
    CHECK(s.value <= 1.0 + 1e-12);
    CHECK(s.value == doctest::Approx(s.length_term + s.keyword_term + s.symbol_term).epsilon(1e-15));
    CHECK(s.length_term <= 0.4);
    CHECK(s.keyword_term <= 0.4);
    CHECK(s.symbol_term <= 0.2);
  }
}

TEST_CASE("score is monotone in each count") {
  const auto lex = DifficultyLexicon::defaults();
  double prev = -1.0;
  std::string text;
  for (int i = 0; i < 100; ++i) {
    text += " integral";
    const double v = heuristic_difficulty(make_query(text), lex).value;
    CHECK(v >= prev);
    prev = v;
  }
  prev = -1.0;
  text = "value";
  for (int i = 0; i < 20; ++i) {
    text += "+";
    const double v = heuristic_difficulty(make_query(text), lex).value;
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("keyword matching is case-insensitive and whole-word") {
  CHECK(count_keyword("Prove that PROVE holds; proven is not a hit", "prove") == 2);
  CHECK(count_keyword("primes and prime", "prime") == 1);
  CHECK(count_keyword("root-finding", "root") == 1);
}

TEST_CASE("unicode symbols count once per code point") {
  const auto lex = DifficultyLexicon::defaults();
  CHECK(count_symbols("∑ ∫ √ π ≤ ≥ ≠", lex) == 7);
  CHECK(count_symbols("café", lex) == 0);
}

TEST_CASE("lexicon validation") {
  CHECK_THROWS_AS(DifficultyLexicon({}, "+"), ConfigError);
  CHECK_THROWS_AS(DifficultyLexicon({"Root", "root"}, "+"), ConfigError);
  CHECK_THROWS_AS(DifficultyLexicon({""}, "+"), ConfigError);
}

TEST_CASE("mode bands are half-open") {
  DifficultyScore s;
  s.value = 0.20;
  CHECK(schedule_mode(s, 0.35, 0.65).tag() == ModeTag::Fast);
  s.value = 0.35;
  CHECK(schedule_mode(s, 0.35, 0.65).tag() == ModeTag::Mod);
  s.value = 0.65;
  CHECK(schedule_mode(s, 0.35, 0.65).tag() == ModeTag::Deep);
  s.value = 0.90;
  CHECK(schedule_mode(s, 0.35, 0.65).tag() == ModeTag::Deep);
  s.value = 1.0;
  CHECK(schedule_mode(s, 0.35, 0.65).tag() == ModeTag::Deep);
  CHECK_THROWS_AS(schedule_mode(s, 0.65, 0.35), ConfigError);
  CHECK_THROWS_AS(schedule_mode(s, 0.5, 0.5), ConfigError);
}

TEST_CASE("mode tag follows the policy alternative") {
  CHECK(ReasoningMode(CoDFast{}).tag() == ModeTag::Fast);
  CHECK(ReasoningMode(ElasticModerate{}).tag() == ModeTag::Mod);
  CHECK(ReasoningMode(DeepReflect{}).tag() == ModeTag::Deep);
  CHECK(ReasoningMode(DeepReflect{}).samples() == 3);
  CHECK(ReasoningMode(CoDFast{}).samples() == 1);
  CHECK(mode_tag_from_string("MOD") == ModeTag::Mod);
}

TEST_CASE("prompts carry their mode constraints exclusively") {
  const Query q = make_query("What is 2 + 3?");
  const auto fast = build_prompt(ReasoningMode::with_defaults(ModeTag::Fast), q, DatasetKind::Plain);
  const auto mod = build_prompt(ReasoningMode::with_defaults(ModeTag::Mod), q, DatasetKind::Plain);
  const auto deep = build_prompt(ReasoningMode::with_defaults(ModeTag::Deep), q, DatasetKind::Plain);
  CHECK(fast.find("at most 2 drafts") != std::string::npos);
  CHECK(fast.find("10 words") != std::string::npos);
  CHECK(mod.find("64 tokens") != std::string::npos);
  for (const char* s : {"drafts", "words each", "tokens"}) CHECK(deep.find(s) == std::string::npos);
  for (const auto* p : {&fast, &mod, &deep}) {
    CHECK(p->find(q.text) != std::string::npos);
    CHECK(p->ends_with(kResponseCue));
  }
  CHECK(build_budget_prompt(q, DatasetKind::Plain, 50).find("less than 50 tokens") != std::string::npos);
}
