#pragma once

// Token-generation abstraction: one token at a time, top-k probabilities.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ars/rng.hpp"

namespace ars {

/// Marker token returned by backends when the sequence has ended.
inline constexpr std::string_view kEndOfSequence = "<|eos|>";

struct TokenCandidate {
  std::string text;
  double probability = 0.0;

  bool operator==(const TokenCandidate&) const = default;
};

/// Next-token candidates. Probabilities may sum to less than one when the
/// backend only reports its top-k.
struct TokenDistribution {
  std::vector<TokenCandidate> candidates;
  bool truncated = false;

  static TokenDistribution one_hot(std::string token) { return {{{std::move(token), 1.0}}, false}; }

  double total_mass() const;
  bool operator==(const TokenDistribution&) const = default;
};

/// Throws InvalidDistributionError unless candidates are non-empty, finite,
/// nonnegative, sum to at most 1 + 1e-6 and carry positive total mass.
void validate_distribution(const TokenDistribution& dist);

enum class BackendKind { Scripted, Http };

struct BackendDescriptor {
  BackendKind kind = BackendKind::Scripted;
  bool concurrent_safe = false;
  int top_k = 20;
  /// Concurrent request limit honored by the harness when concurrent_safe.
  int max_in_flight = 1;
  /// Set for simulated backends: latency is tokens * this value instead of wall clock.
  std::optional<double> per_token_latency;
};

/// The model: maps a full context (prompt + generated text) to a next-token distribution.
class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;

  virtual BackendDescriptor descriptor() const = 0;
  virtual TokenDistribution next_distribution(std::string_view context) = 0;
};

using TokenMask = std::function<bool(std::string_view)>;

/// Draws one candidate proportionally to probability among candidates for
/// which `masked` is false (all candidates when no mask is given). Consumes
/// exactly one uniform draw. Throws DegenerateDistributionError when the
/// unmasked mass is below 1e-9.
std::string sample(const TokenDistribution& dist, Rng& rng, const TokenMask& masked = {});

/// Highest-probability candidate; ties go to the earliest candidate.
std::string argmax(const TokenDistribution& dist);

/// Unmasked probability mass.
double unmasked_mass(const TokenDistribution& dist, const TokenMask& masked);

inline constexpr double kDegenerateMass = 1e-9;

}  // namespace ars
