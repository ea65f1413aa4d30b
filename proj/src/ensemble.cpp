#include "macd/ensemble.hpp"

#include <algorithm>
#include <future>
#include <numeric>

namespace macd {

AmateurEnsemble::AmateurEnsemble(std::vector<EnsembleMember> members)
    : members_(std::move(members)) {
    if (members_.empty()) {
        throw_error(ErrorCode::InvalidParameter, "ensemble requires at least one member");
    }
    const auto fp = members_.front().model->vocab().fingerprint();
    for (const auto& m : members_) {
        if (!m.model) {
            throw_error(ErrorCode::InvalidParameter, "ensemble member has no model");
        }
        if (!(m.temperature > 0.0)) {
            throw_error(ErrorCode::NonPositiveTemperature,
                        "ensemble member temperature must be > 0");
        }
        if (m.model->vocab().fingerprint() != fp) {
            throw_error(ErrorCode::VocabMismatch, "ensemble members must share one vocabulary");
        }
    }
}

VoteRule VoteRule::top_rank(int r) {
    if (r < 1) throw_error(ErrorCode::InvalidParameter, "top-rank vote requires r >= 1");
    VoteRule rule;
    rule.kind = Kind::TopRank;
    rule.top_r = r;
    return rule;
}

VoteRule VoteRule::logprob_threshold(double tau) {
    VoteRule rule;
    rule.kind = Kind::LogProbThreshold;
    rule.threshold = tau;
    return rule;
}

std::vector<LogProbDistribution> member_distributions(const AmateurEnsemble& ensemble,
                                                      std::span<const TokenId> context,
                                                      EvalMode mode) {
    const std::size_t k = ensemble.size();
    std::vector<LogProbDistribution> dists(k);
    auto eval_one = [&](std::size_t i) {
        const EnsembleMember& m = ensemble.member(i);
        dists[i] = apply_temperature(m.model->next_logprobs(context), m.temperature);
    };
    if (mode == EvalMode::Sequential || k == 1) {
        for (std::size_t i = 0; i < k; ++i) eval_one(i);
    } else {
        std::vector<std::future<void>> workers;
        workers.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            workers.push_back(std::async(std::launch::async, eval_one, i));
        }
        for (auto& w : workers) w.get();  // join in member order
    }
    return dists;
}

AmateurEvaluation gather_evaluation(std::span<const LogProbDistribution> member_dists,
                                    const CandidateSet& candidates) {
    if (candidates.empty()) {
        throw_error(ErrorCode::EmptyCandidateSet, "cannot evaluate an empty candidate set");
    }
    AmateurEvaluation eval;
    eval.num_members = member_dists.size();
    eval.num_candidates = candidates.size();
    eval.candidate_ids = candidates.ids;
    eval.logp.reserve(eval.num_members * eval.num_candidates);
    for (const auto& dist : member_dists) {
        for (TokenId id : candidates.ids) {
            if (id >= dist.size()) {
                throw_error(ErrorCode::VocabMismatch, "candidate id outside amateur vocabulary");
            }
            eval.logp.push_back(dist[id]);
        }
    }
    return eval;
}

AmateurEvaluation evaluate_candidates(const AmateurEnsemble& ensemble,
                                      std::span<const TokenId> context,
                                      const CandidateSet& candidates, EvalMode mode) {
    const auto dists = member_distributions(ensemble, context, mode);
    return gather_evaluation(dists, candidates);
}

std::vector<int> vote_counts(const AmateurEvaluation& evaluation, const VoteRule& rule,
                             std::span<const LogProbDistribution> full_dists) {
    const std::size_t k = evaluation.num_members;
    const std::size_t m = evaluation.num_candidates;
    std::vector<int> votes(m, 0);

    if (rule.kind == VoteRule::Kind::LogProbThreshold) {
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (evaluation.at(i, j) > rule.threshold) ++votes[j];
            }
        }
        return votes;
    }

    // TopRank: membership in each member's r most probable tokens over the
    // whole vocabulary, ties fully broken by lower id.
    if (full_dists.size() != k) {
        throw_error(ErrorCode::MissingFullDistributions,
                    "top-rank voting needs one full distribution per member");
    }
    for (std::size_t i = 0; i < k; ++i) {
        const auto& lp = full_dists[i].logp;
        const std::size_t vocab_size = lp.size();
        const std::size_t r = std::min<std::size_t>(static_cast<std::size_t>(rule.top_r),
                                                    vocab_size);
        auto before = [&lp](TokenId a, TokenId b) {
            if (lp[a] != lp[b]) return lp[a] > lp[b];
            return a < b;
        };
        std::vector<TokenId> ids(vocab_size);
        std::iota(ids.begin(), ids.end(), TokenId{0});
        std::nth_element(ids.begin(), ids.begin() + (r - 1), ids.end(), before);
        const TokenId boundary = ids[r - 1];
        for (std::size_t j = 0; j < m; ++j) {
            const TokenId cand = evaluation.candidate_ids[j];
            if (cand == boundary || before(cand, boundary)) ++votes[j];
        }
    }
    return votes;
}

std::vector<double> consensus_ratio(const AmateurEvaluation& evaluation, const VoteRule& rule,
                                    std::span<const LogProbDistribution> full_dists) {
    const std::vector<int> votes = vote_counts(evaluation, rule, full_dists);
    std::vector<double> crs(votes.size());
    const double k = static_cast<double>(evaluation.num_members);
    for (std::size_t j = 0; j < votes.size(); ++j) {
        crs[j] = static_cast<double>(votes[j]) / k;
    }
    return crs;
}

std::vector<double> mean_amateur_logp(const AmateurEvaluation& evaluation, double floor) {
    const std::size_t k = evaluation.num_members;
    const std::size_t m = evaluation.num_candidates;
    std::vector<double> means(m, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            means[j] += floor_logp(evaluation.at(i, j), floor);
        }
    }
    for (double& v : means) v /= static_cast<double>(k);
    return means;
}

}  // namespace macd
