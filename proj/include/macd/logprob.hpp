#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "macd/types.hpp"

namespace macd {

/// Tolerance on |logsumexp| for a distribution to count as normalized.
inline constexpr double kNormalizationTol = 1e-6;

/// Floor applied to -inf (and deeply negative) amateur log-probs before they
/// enter a penalty term, so that expert_lp - alpha * amateur_lp stays finite.
inline constexpr double kDefaultLogpFloor = -30.0;

/// Normalized next-token distribution in natural-log space.
/// Entries may be -inf (zero probability) but never NaN.
struct LogProbDistribution {
    std::vector<double> logp;

    LogProbDistribution() = default;
    explicit LogProbDistribution(std::vector<double> values) : logp(std::move(values)) {}

    std::size_t size() const { return logp.size(); }
    double operator[](std::size_t i) const { return logp[i]; }
};

double logsumexp(std::span<const double> logp);

/// True iff |logsumexp| <= tol and no entry is NaN.
bool is_normalized(const LogProbDistribution& dist, double tol = kNormalizationTol);

/// Subtracts logsumexp so the result is normalized exactly (up to fp error).
LogProbDistribution renormalize(LogProbDistribution dist);

/// Exponent-scales the distribution: result ∝ exp(logp / tau).
/// tau = 1 returns the input bit-for-bit; tau < 1 sharpens, tau > 1 flattens.
LogProbDistribution apply_temperature(const LogProbDistribution& dist, double tau);

inline double floor_logp(double lp, double floor = kDefaultLogpFloor) {
    return lp < floor ? floor : lp;
}

/// Builds a normalized distribution from unnormalized probability weights.
LogProbDistribution dist_from_weights(std::span<const double> weights);

/// Uniform distribution over n tokens.
LogProbDistribution uniform_dist(std::size_t n);

}  // namespace macd
