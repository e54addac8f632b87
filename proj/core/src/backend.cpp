#include "ars/backend.hpp"

#include <cmath>

#include "ars/error.hpp"

namespace ars {

double TokenDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& c : candidates) total += c.probability;
  return total;
}

void validate_distribution(const TokenDistribution& dist) {
  if (dist.candidates.empty()) throw InvalidDistributionError("distribution has no candidates");
  double total = 0.0;
  for (const auto& c : dist.candidates) {
    if (!std::isfinite(c.probability) || c.probability < 0.0) {
      throw InvalidDistributionError("candidate '" + c.text + "' has invalid probability");
    }
    total += c.probability;
  }
  if (total > 1.0 + 1e-6) throw InvalidDistributionError("probabilities sum above one");
  if (total <= 0.0) throw InvalidDistributionError("distribution has zero total mass");
}

double unmasked_mass(const TokenDistribution& dist, const TokenMask& masked) {
  double total = 0.0;
  for (const auto& c : dist.candidates) {
    if (masked && masked(c.text)) continue;
    total += c.probability;
  }
  return total;
}

std::string sample(const TokenDistribution& dist, Rng& rng, const TokenMask& masked) {
  const double total = unmasked_mass(dist, masked);
  if (!(total >= kDegenerateMass)) {
    throw DegenerateDistributionError("no unmasked probability mass to sample from");
  }
  const double target = rng.uniform() * total;
  double cumulative = 0.0;
  const TokenCandidate* last = nullptr;
  for (const auto& c : dist.candidates) {
    if (masked && masked(c.text)) continue;
    if (c.probability <= 0.0) continue;
    cumulative += c.probability;
    last = &c;
    if (target < cumulative) return c.text;
  }
  // Rounding can leave target == total; the last positive candidate owns that edge.
  return last->text;
}

std::string argmax(const TokenDistribution& dist) {
  if (dist.candidates.empty()) throw InvalidDistributionError("distribution has no candidates");
  const TokenCandidate* best = &dist.candidates.front();
  for (const auto& c : dist.candidates) {
    if (c.probability > best->probability) best = &c;
  }
  return best->text;
}

}  // namespace ars
