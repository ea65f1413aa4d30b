#include "macd/candidates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "macd/ensemble.hpp"

namespace macd {

namespace {

// Shared ordering for candidate extraction: higher logp first, lower id on ties.
struct ByLogpDesc {
    const std::vector<double>& logp;
    bool operator()(TokenId a, TokenId b) const {
        if (logp[a] != logp[b]) return logp[a] > logp[b];
        return a < b;
    }
};

CandidateSet make_set(std::vector<TokenId> ids, const LogProbDistribution& dist) {
    CandidateSet out;
    out.expert_logp.reserve(ids.size());
    for (TokenId id : ids) out.expert_logp.push_back(dist[id]);
    out.ids = std::move(ids);
    return out;
}

}  // namespace

FilterSpec FilterSpec::topk(int k) {
    if (k < 1) throw_error(ErrorCode::InvalidK, "top-k filter requires k >= 1");
    FilterSpec spec;
    spec.kind = Kind::TopK;
    spec.k = k;
    return spec;
}

FilterSpec FilterSpec::delta_margin(double delta) {
    if (delta < 0.0 || std::isnan(delta)) {
        throw_error(ErrorCode::NegativeDelta, "delta margin must be >= 0");
    }
    FilterSpec spec;
    spec.kind = Kind::DeltaMargin;
    spec.delta = delta;
    return spec;
}

FilterSpec FilterSpec::joint(double delta, double cr_cap) {
    if (delta < 0.0 || std::isnan(delta)) {
        throw_error(ErrorCode::NegativeDelta, "delta margin must be >= 0");
    }
    if (!(cr_cap > 0.0) || cr_cap > 1.0) {
        throw_error(ErrorCode::InvalidParameter, "joint filter cr_cap must be in (0, 1]");
    }
    FilterSpec spec;
    spec.kind = Kind::Joint;
    spec.delta = delta;
    spec.cr_cap = cr_cap;
    return spec;
}

CandidateSet filter_topk(const LogProbDistribution& dist, int k) {
    if (k < 1) throw_error(ErrorCode::InvalidK, "top-k filter requires k >= 1");
    const std::size_t vocab_size = dist.size();
    const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), vocab_size);

    std::vector<TokenId> ids(vocab_size);
    std::iota(ids.begin(), ids.end(), TokenId{0});
    ByLogpDesc cmp{dist.logp};
    std::partial_sort(ids.begin(), ids.begin() + keep, ids.end(), cmp);
    ids.resize(keep);
    return make_set(std::move(ids), dist);
}

CandidateSet filter_delta_margin(const LogProbDistribution& dist, double delta) {
    if (delta < 0.0 || std::isnan(delta)) {
        throw_error(ErrorCode::NegativeDelta, "delta margin must be >= 0");
    }
    double best = -std::numeric_limits<double>::infinity();
    for (double v : dist.logp) best = std::max(best, v);

    const double cutoff = best - delta;
    std::vector<TokenId> ids;
    for (TokenId id = 0; id < dist.size(); ++id) {
        const double lp = dist[id];
        if (std::isinf(lp) && lp < 0) continue;  // zero-probability tokens never qualify
        if (lp >= cutoff) ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end(), ByLogpDesc{dist.logp});
    return make_set(std::move(ids), dist);
}

CandidateSet filter_joint(const LogProbDistribution& dist, double delta,
                          std::span<const LogProbDistribution> amateur_dists,
                          const VoteRule& rule, double cr_cap) {
    if (!(cr_cap > 0.0)) {
        throw_error(ErrorCode::InvalidParameter, "joint filter cr_cap must be in (0, 1]");
    }
    CandidateSet margin = filter_delta_margin(dist, delta);
    AmateurEvaluation eval = gather_evaluation(amateur_dists, margin);
    const std::vector<double> crs = consensus_ratio(eval, rule, amateur_dists);

    CandidateSet kept;
    for (std::size_t i = 0; i < margin.size(); ++i) {
        if (crs[i] < cr_cap) {
            kept.ids.push_back(margin.ids[i]);
            kept.expert_logp.push_back(margin.expert_logp[i]);
        }
    }
    if (kept.empty()) return margin;  // the consensus clause may not empty the set
    return kept;
}

}  // namespace macd
