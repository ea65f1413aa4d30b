#pragma once

#include <span>
#include <vector>

#include "macd/logprob.hpp"
#include "macd/types.hpp"

namespace macd {

struct VoteRule;  // ensemble.hpp

/// Plausibility-filtered candidate tokens with their expert log-probs,
/// ordered by descending expert logp (ties toward the lower token id).
struct CandidateSet {
    std::vector<TokenId> ids;
    std::vector<double> expert_logp;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
};

struct FilterSpec {
    enum class Kind { TopK, DeltaMargin, Joint };
    Kind kind = Kind::TopK;
    int k = 50;
    double delta = 0.0;
    double cr_cap = 1.0;  // Joint: survivors need consensus ratio < cr_cap

    static FilterSpec topk(int k);
    static FilterSpec delta_margin(double delta);
    static FilterSpec joint(double delta, double cr_cap);
};

/// The min(k, |V|) highest-logp tokens, boundary ties broken by lower id.
CandidateSet filter_topk(const LogProbDistribution& dist, int k);

/// Tokens whose logp is within delta of the argmax; always contains the
/// argmax. delta = +inf keeps every token with finite logp.
CandidateSet filter_delta_margin(const LogProbDistribution& dist, double delta);

/// Delta-margin survivors that additionally have consensus ratio < cr_cap
/// under the amateurs; falls back to the plain delta-margin set when the
/// consensus clause would empty it.
CandidateSet filter_joint(const LogProbDistribution& dist, double delta,
                          std::span<const LogProbDistribution> amateur_dists,
                          const VoteRule& rule, double cr_cap);

}  // namespace macd
