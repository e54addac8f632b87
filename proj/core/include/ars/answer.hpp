#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "ars/difficulty.hpp"

namespace ars {

/// Pulls the final answer out of generated text. Precedence: last \boxed{...},
/// last "#### x", last "answer is X", last standalone number. Returns "" on no match.
std::string extract_final_answer(std::string_view text, DatasetKind kind = DatasetKind::Plain);

/// Canonical answer text: trimmed, "$" and "\!" dropped, \frac{a}{b} -> a/b,
/// and for numbers: commas removed, leading '+' dropped, trailing fractional zeros stripped.
std::string normalize_answer(std::string_view answer);

/// Exact rational p/q with q > 0 and gcd(p, q) = 1.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;
  bool operator==(const Rational&) const = default;
};

/// Parses integers, decimals and a/b fractions (after normalize_answer). nullopt otherwise or on overflow.
std::optional<Rational> parse_rational(std::string_view normalized);

}  // namespace ars
