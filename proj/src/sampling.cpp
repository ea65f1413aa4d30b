#include "macd/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace macd {

namespace {

// Descending-probability order with lower-id tie-break.
struct ByLogpDescId {
    const std::vector<double>& logp;
    bool operator()(TokenId a, TokenId b) const {
        if (logp[a] != logp[b]) return logp[a] > logp[b];
        return a < b;
    }
};

// Renormalizes the shortlist and walks its CDF with a single uniform draw.
// The final entry always absorbs the draw so rounding cannot fall off the end.
TokenId draw_from_subset(const LogProbDistribution& dist, const std::vector<TokenId>& ids,
                         SampleRng& rng) {
    if (ids.empty()) {
        throw_error(ErrorCode::EmptyCandidateSet, "sampling shortlist is empty");
    }
    std::vector<double> probs(ids.size());
    double total = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        probs[i] = std::exp(dist[ids[i]]);
        total += probs[i];
    }
    if (!(total > 0.0)) {
        throw_error(ErrorCode::EmptyCandidateSet, "sampling shortlist has zero mass");
    }
    const double u = rng.next_unit() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
        cum += probs[i];
        if (u < cum) return ids[i];
    }
    return ids.back();
}

std::vector<TokenId> ids_by_prob_desc(const LogProbDistribution& dist) {
    std::vector<TokenId> ids(dist.size());
    std::iota(ids.begin(), ids.end(), TokenId{0});
    std::sort(ids.begin(), ids.end(), ByLogpDescId{dist.logp});
    return ids;
}

}  // namespace

TokenId greedy_argmax(const LogProbDistribution& dist) {
    if (dist.size() == 0) {
        throw_error(ErrorCode::EmptyCandidateSet, "cannot take argmax of an empty distribution");
    }
    TokenId best = 0;
    for (TokenId i = 1; i < dist.size(); ++i) {
        if (dist[i] > dist[best]) best = i;
    }
    return best;
}

TokenId topk_sample(const LogProbDistribution& dist, int k, SampleRng& rng) {
    if (k < 1) throw_error(ErrorCode::InvalidK, "top-k sampling requires k >= 1");
    auto ids = ids_by_prob_desc(dist);
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), ids.size());
    ids.resize(keep);
    return draw_from_subset(dist, ids, rng);
}

TokenId nucleus_sample(const LogProbDistribution& dist, double p, SampleRng& rng) {
    if (!(p > 0.0) || p > 1.0) {
        throw_error(ErrorCode::InvalidParameter, "nucleus p must lie in (0, 1]");
    }
    auto ids = ids_by_prob_desc(dist);
    // Drop -inf tokens; they carry no mass and p == 1.0 must not admit them.
    while (!ids.empty() && std::isinf(dist[ids.back()])) ids.pop_back();
    if (p < 1.0) {
        double cum = 0.0;
        std::size_t keep = ids.size();
        for (std::size_t i = 0; i < ids.size(); ++i) {
            cum += std::exp(dist[ids[i]]);
            if (cum >= p) {
                keep = i + 1;
                break;
            }
        }
        ids.resize(keep);
    }
    return draw_from_subset(dist, ids, rng);
}

TokenId typical_sample(const LogProbDistribution& dist, double tau, SampleRng& rng) {
    if (!(tau > 0.0) || tau > 1.0) {
        throw_error(ErrorCode::InvalidParameter, "typical tau must lie in (0, 1]");
    }
    // Entropy over the finite-mass support.
    double entropy = 0.0;
    for (TokenId i = 0; i < dist.size(); ++i) {
        const double lp = dist[i];
        if (std::isinf(lp)) continue;
        entropy -= std::exp(lp) * lp;
    }
    std::vector<TokenId> ids;
    ids.reserve(dist.size());
    for (TokenId i = 0; i < dist.size(); ++i) {
        if (!std::isinf(dist[i])) ids.push_back(i);
    }
    std::sort(ids.begin(), ids.end(), [&](TokenId a, TokenId b) {
        const double da = std::fabs(-dist[a] - entropy);
        const double db = std::fabs(-dist[b] - entropy);
        if (da != db) return da < db;
        return a < b;
    });
    double cum = 0.0;
    std::size_t keep = ids.size();
    for (std::size_t i = 0; i < ids.size(); ++i) {
        cum += std::exp(dist[ids[i]]);
        if (cum >= tau) {
            keep = i + 1;
            break;
        }
    }
    ids.resize(keep);
    return draw_from_subset(dist, ids, rng);
}

}  // namespace macd
