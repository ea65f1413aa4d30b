#pragma once

#include <cstdint>
#include <random>

#include "macd/logprob.hpp"
#include "macd/types.hpp"

namespace macd {

// Deterministic uniform source. The 53-bit mapping keeps draws identical
// across platforms for a given seed.
class SampleRng {
public:
    explicit SampleRng(std::uint64_t seed) : engine_(seed) {}

    // Uniform draw in [0, 1).
    double next_unit() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

private:
    std::mt19937_64 engine_;
};

// Highest-probability token; ties go to the lower id.
TokenId greedy_argmax(const LogProbDistribution& dist);

// Draw from the k most probable tokens after renormalizing over them.
TokenId topk_sample(const LogProbDistribution& dist, int k, SampleRng& rng);

// Draw from the smallest prefix (by descending probability) whose mass
// reaches p. p == 1.0 keeps every finite-logp token.
TokenId nucleus_sample(const LogProbDistribution& dist, double p, SampleRng& rng);

// Draw from tokens whose surprisal is closest to the distribution entropy,
// keeping the smallest such set with mass >= tau.
TokenId typical_sample(const LogProbDistribution& dist, double tau, SampleRng& rng);

}  // namespace macd
