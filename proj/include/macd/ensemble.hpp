#pragma once

#include <span>
#include <string>
#include <vector>

#include "macd/candidates.hpp"
#include "macd/language_model.hpp"

namespace macd {

struct EnsembleMember {
    LanguageModelPtr model;
    double temperature = 1.0;  // applied to this member's distribution before any scoring or voting
    std::string label;
};

/// Ordered collection of K amateur models sharing one vocabulary.
/// Member order is fixed and determines every reduction order.
class AmateurEnsemble {
  public:
    explicit AmateurEnsemble(std::vector<EnsembleMember> members);

    std::size_t size() const { return members_.size(); }
    const EnsembleMember& member(std::size_t k) const { return members_.at(k); }
    const std::vector<EnsembleMember>& members() const { return members_; }
    const Vocabulary& vocab() const { return members_.front().model->vocab(); }

  private:
    std::vector<EnsembleMember> members_;
};

enum class EvalMode { Sequential, Parallel };

/// How a member votes that a token is "high probability".
struct VoteRule {
    enum class Kind { TopRank, LogProbThreshold };
    Kind kind = Kind::TopRank;
    int top_r = 10;          // TopRank: token is among the member's r most probable tokens
    double threshold = 0.0;  // LogProbThreshold: member's logp exceeds this value

    static VoteRule top_rank(int r);
    static VoteRule logprob_threshold(double tau);
};

/// Post-temperature amateur log-probs for M candidates under K members.
struct AmateurEvaluation {
    std::size_t num_members = 0;
    std::size_t num_candidates = 0;
    std::vector<TokenId> candidate_ids;
    std::vector<double> logp;  // K x M, row-major

    double at(std::size_t member, std::size_t candidate) const {
        return logp[member * num_candidates + candidate];
    }
};

/// Full per-member distributions (temperature already applied), evaluated
/// sequentially or with one worker per member; results are merged by member
/// index, so both modes are bitwise-identical.
std::vector<LogProbDistribution> member_distributions(const AmateurEnsemble& ensemble,
                                                      std::span<const TokenId> context,
                                                      EvalMode mode);

/// Slices candidate columns out of precomputed member distributions.
AmateurEvaluation gather_evaluation(std::span<const LogProbDistribution> member_dists,
                                    const CandidateSet& candidates);

AmateurEvaluation evaluate_candidates(const AmateurEnsemble& ensemble,
                                      std::span<const TokenId> context,
                                      const CandidateSet& candidates, EvalMode mode);

/// Per-candidate vote counts in [0, K] under the rule. TopRank requires the
/// full member distributions to rank over the whole vocabulary; rank ties at
/// the r boundary break toward the lower token id.
std::vector<int> vote_counts(const AmateurEvaluation& evaluation, const VoteRule& rule,
                             std::span<const LogProbDistribution> full_dists);

/// Consensus ratio per candidate: votes / K, always an exact multiple of 1/K.
std::vector<double> consensus_ratio(const AmateurEvaluation& evaluation, const VoteRule& rule,
                                    std::span<const LogProbDistribution> full_dists);

/// Mean amateur log-prob per candidate, with the -inf floor applied to each
/// entry first; summation runs in member order so results are reproducible.
std::vector<double> mean_amateur_logp(const AmateurEvaluation& evaluation,
                                      double floor = kDefaultLogpFloor);

}  // namespace macd
