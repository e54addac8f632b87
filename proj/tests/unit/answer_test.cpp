#include <doctest.h>

#include "ars/answer.hpp"
#include "ars/harness.hpp"

using namespace ars;

TEST_CASE("final answer extraction precedence") {
  CHECK(extract_final_answer("so x = 3. Final answer: \\boxed{42}") == "42");
  CHECK(extract_final_answer("\\boxed{1} then \\boxed{\\frac{1}{2}}") == "1/2");
  CHECK(extract_final_answer("work\n#### 1,234") == "1234");
  CHECK(extract_final_answer("no numbers here") == "");
  CHECK(extract_final_answer("We get 3 apples, so the answer is 17.") == "17");
  CHECK(extract_final_answer("first 12 then 15 apples") == "15");
  CHECK(extract_final_answer("#### 5 and \\boxed{6}") == "6");
}

TEST_CASE("normalization") {
  CHECK(normalize_answer(" 1,234 ") == "1234");
  CHECK(normalize_answer("$72$") == "72");
  CHECK(normalize_answer("+3.50") == "3.5");
  CHECK(normalize_answer("\\frac{3}{4}") == "3/4");
  CHECK(normalize_answer("10.") == "10");
}

TEST_CASE("rationals") {
  CHECK(parse_rational("0.5") == Rational{1, 2});
  CHECK(parse_rational("2/4") == Rational{1, 2});
  CHECK(parse_rational("-6") == Rational{-6, 1});
  CHECK_FALSE(parse_rational("x+1").has_value());
  CHECK_FALSE(parse_rational("1/0").has_value());
  CHECK_FALSE(parse_rational("99999999999999999999999").has_value());
}

TEST_CASE("scoring") {
  CHECK(score_answer("1234", "1,234"));
  CHECK_FALSE(score_answer("", "anything"));
  CHECK(score_answer("1/2", "0.5"));
  CHECK(score_answer("72", "72.00"));
  CHECK_FALSE(score_answer("71", "72"));
  CHECK(score_answer("x+1", " x+1 "));
}
