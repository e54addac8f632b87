#include <doctest.h>

#include <cmath>
#include <limits>

#include "ars/backend.hpp"
#include "ars/error.hpp"
#include "ars/rng.hpp"

using namespace ars;

TEST_CASE("one-hot sampling returns the token") {
  Rng rng(3);
  for (int i = 0; i < 100; ++i) CHECK(sample(TokenDistribution::one_hot("x"), rng) == "x");
}

TEST_CASE("seeded sampling is reproducible") {
  const TokenDistribution d{{{"a", 0.2}, {"b", 0.3}, {"c", 0.5}}, false};
  Rng r1(99);
  Rng r2(99);
  for (int i = 0; i < 1000; ++i) CHECK(sample(d, r1) == sample(d, r2));
}

TEST_CASE("sampling frequencies stay within three binomial sigmas") {
  const TokenDistribution d{{{"A", 0.25}, {"B", 0.75}}, false};
  Rng rng(2024);
  const int n = 10000;
  int a = 0;
  for (int i = 0; i < n; ++i) a += sample(d, rng) == "A";
  const double sigma = std::sqrt(n * 0.25 * 0.75);
  CHECK(std::abs(a - n * 0.25) <= 3 * sigma);
}

TEST_CASE("masked sampling renormalizes and rejects degenerate mass") {
  const TokenDistribution d{{{"Wait", 0.5}, {"x", 0.5}}, false};
  Rng rng(5);
  const TokenMask mask = [](std::string_view t) { return t == "Wait"; };
  for (int i = 0; i < 100; ++i) CHECK(sample(d, rng, mask) == "x");
  CHECK(unmasked_mass(d, mask) == 0.5);
  const TokenDistribution only{{{"Wait", 1.0}}, false};
  CHECK_THROWS_AS(sample(only, rng, mask), DegenerateDistributionError);
}

TEST_CASE("distribution validation") {
  CHECK_NOTHROW(validate_distribution(TokenDistribution{{{"a", 0.4}, {"b", 0.3}}, true}));
  CHECK_THROWS_AS(validate_distribution(TokenDistribution{}), InvalidDistributionError);
  CHECK_THROWS_AS(validate_distribution(TokenDistribution{{{"a", -0.1}, {"b", 0.5}}, false}), InvalidDistributionError);
  CHECK_THROWS_AS(validate_distribution(TokenDistribution{{{"a", 0.9}, {"b", 0.9}}, false}), InvalidDistributionError);
  CHECK_THROWS_AS(validate_distribution(TokenDistribution{{{"a", 0.0}}, false}), InvalidDistributionError);
  CHECK_THROWS_AS(validate_distribution(TokenDistribution{{{"a", std::numeric_limits<double>::quiet_NaN()}}, false}),
                  InvalidDistributionError);
}

TEST_CASE("argmax prefers the first of equal candidates") {
  CHECK(argmax(TokenDistribution{{{"a", 0.4}, {"b", 0.4}, {"c", 0.2}}, false}) == "a");
  CHECK(argmax(TokenDistribution{{{"a", 0.1}, {"b", 0.6}}, false}) == "b");
}

TEST_CASE("rng helpers are stable") {
  static_assert(fnv1a("") == 0xcbf29ce484222325ULL);
  static_assert(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
  Rng rng(11);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = rng.uniform_int(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
}
