#include "macd/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "macd/scoring.hpp"

namespace macd {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t ns_between(Clock::time_point a, Clock::time_point b) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(b - a).count());
}

void require_ensemble(const AmateurEnsemble* ensemble) {
    if (ensemble == nullptr) {
        throw_error(ErrorCode::InvalidParameter,
                    "contrastive strategy requires an amateur ensemble");
    }
}

}  // namespace

bool is_contrastive(StrategyKind kind) {
    return kind == StrategyKind::Cd || kind == StrategyKind::MacdMean ||
           kind == StrategyKind::MacdConsensus;
}

bool is_stochastic(StrategyKind kind) {
    return kind == StrategyKind::TopKSample || kind == StrategyKind::Nucleus ||
           kind == StrategyKind::Typical;
}

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Greedy: return "greedy";
        case StrategyKind::TopKSample: return "topk";
        case StrategyKind::Nucleus: return "nucleus";
        case StrategyKind::Typical: return "typical";
        case StrategyKind::Cd: return "cd";
        case StrategyKind::MacdMean: return "macd_mean";
        case StrategyKind::MacdConsensus: return "macd_consensus";
    }
    return "unknown";
}

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "greedy") return StrategyKind::Greedy;
    if (name == "topk") return StrategyKind::TopKSample;
    if (name == "nucleus") return StrategyKind::Nucleus;
    if (name == "typical") return StrategyKind::Typical;
    if (name == "cd") return StrategyKind::Cd;
    if (name == "macd_mean") return StrategyKind::MacdMean;
    if (name == "macd_consensus") return StrategyKind::MacdConsensus;
    throw_error(ErrorCode::InvalidParameter, "unknown strategy name: " + name);
}

StrategySpec greedy_strategy() {
    StrategySpec s;
    s.kind = StrategyKind::Greedy;
    return s;
}

StrategySpec topk_strategy(int k, std::uint64_t seed) {
    if (k < 1) throw_error(ErrorCode::InvalidK, "top-k sampling requires k >= 1");
    StrategySpec s;
    s.kind = StrategyKind::TopKSample;
    s.sample_k = k;
    s.seed = seed;
    return s;
}

StrategySpec nucleus_strategy(double p, std::uint64_t seed) {
    if (!(p > 0.0) || p > 1.0) {
        throw_error(ErrorCode::InvalidParameter, "nucleus p must lie in (0, 1]");
    }
    StrategySpec s;
    s.kind = StrategyKind::Nucleus;
    s.nucleus_p = p;
    s.seed = seed;
    return s;
}

StrategySpec typical_strategy(double tau, std::uint64_t seed) {
    if (!(tau > 0.0) || tau > 1.0) {
        throw_error(ErrorCode::InvalidParameter, "typical tau must lie in (0, 1]");
    }
    StrategySpec s;
    s.kind = StrategyKind::Typical;
    s.typical_tau = tau;
    s.seed = seed;
    return s;
}

StrategySpec cd_strategy(double alpha, FilterSpec filter) {
    if (alpha < 0.0) throw_error(ErrorCode::InvalidParameter, "alpha must be >= 0");
    StrategySpec s;
    s.kind = StrategyKind::Cd;
    s.alpha = alpha;
    s.filter = filter;
    return s;
}

StrategySpec macd_mean_strategy(double alpha, FilterSpec filter) {
    StrategySpec s = cd_strategy(alpha, filter);
    s.kind = StrategyKind::MacdMean;
    return s;
}

StrategySpec macd_consensus_strategy(double alpha, FilterSpec filter, VoteRule vote_rule) {
    StrategySpec s = cd_strategy(alpha, filter);
    s.kind = StrategyKind::MacdConsensus;
    s.vote_rule = vote_rule;
    return s;
}

ScoredStep score_step(const LanguageModel& expert, const AmateurEnsemble& ensemble,
                      std::span<const TokenId> context, const StrategySpec& strategy,
                      EvalMode mode) {
    const LogProbDistribution expert_dist = expert.next_logprobs(context);

    // Cd contrasts against member 0 only; the others consult every member.
    const auto t0 = Clock::now();
    std::vector<LogProbDistribution> amateur_dists;
    if (strategy.kind == StrategyKind::Cd) {
        const EnsembleMember& m = ensemble.member(0);
        amateur_dists.push_back(
            apply_temperature(m.model->next_logprobs(context), m.temperature));
    } else {
        amateur_dists = member_distributions(ensemble, context, mode);
    }
    const auto t1 = Clock::now();

    ScoredStep step;
    step.amateur_eval_ns = ns_between(t0, t1);
    switch (strategy.filter.kind) {
        case FilterSpec::Kind::TopK:
            step.candidates = filter_topk(expert_dist, strategy.filter.k);
            break;
        case FilterSpec::Kind::DeltaMargin:
            step.candidates = filter_delta_margin(expert_dist, strategy.filter.delta);
            break;
        case FilterSpec::Kind::Joint:
            step.candidates = filter_joint(expert_dist, strategy.filter.delta, amateur_dists,
                                           strategy.vote_rule, strategy.filter.cr_cap);
            break;
    }
    if (step.candidates.empty()) {
        throw_error(ErrorCode::EmptyCandidateSet, "filter produced no candidates");
    }

    const auto t2 = Clock::now();
    const AmateurEvaluation eval = gather_evaluation(amateur_dists, step.candidates);
    const std::size_t m = step.candidates.size();
    step.score.resize(m);
    if (strategy.kind == StrategyKind::MacdConsensus) {
        step.penalty = consensus_ratio(eval, strategy.vote_rule, amateur_dists);
        for (std::size_t j = 0; j < m; ++j) {
            step.score[j] = consensus_penalized_score(step.candidates.expert_logp[j],
                                                      step.penalty[j], strategy.alpha);
        }
    } else {
        step.penalty = mean_amateur_logp(eval, strategy.logp_floor);
        for (std::size_t j = 0; j < m; ++j) {
            step.score[j] = mean_penalized_score(step.candidates.expert_logp[j],
                                                 step.penalty[j], strategy.alpha);
        }
    }
    const auto t3 = Clock::now();
    step.amateur_eval_ns += ns_between(t2, t3);
    return step;
}

std::size_t argmax_scored(const ScoredStep& step) {
    if (step.candidates.empty()) {
        throw_error(ErrorCode::EmptyCandidateSet, "cannot select from an empty scored step");
    }
    std::size_t best = 0;
    for (std::size_t j = 1; j < step.candidates.size(); ++j) {
        const double s = step.score[j];
        const double sb = step.score[best];
        if (s > sb) {
            best = j;
        } else if (s == sb) {
            const double e = step.candidates.expert_logp[j];
            const double eb = step.candidates.expert_logp[best];
            if (e > eb || (e == eb && step.candidates.ids[j] < step.candidates.ids[best])) {
                best = j;
            }
        }
    }
    return best;
}

TokenId decode_step(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                    std::span<const TokenId> context, const StrategySpec& strategy,
                    SampleRng& rng, EvalMode mode, StepTrace& trace) {
    const auto start = Clock::now();
    TokenId chosen = 0;

    if (is_contrastive(strategy.kind)) {
        require_ensemble(ensemble);
        ScoredStep step = score_step(expert, *ensemble, context, strategy, mode);
        const std::size_t best = argmax_scored(step);
        chosen = step.candidates.ids[best];
        trace.candidate_ids = std::move(step.candidates.ids);
        trace.expert_logp = std::move(step.candidates.expert_logp);
        trace.penalty = std::move(step.penalty);
        trace.score = std::move(step.score);
        trace.amateur_eval_ns = step.amateur_eval_ns;
    } else {
        const LogProbDistribution dist = expert.next_logprobs(context);
        switch (strategy.kind) {
            case StrategyKind::Greedy: chosen = greedy_argmax(dist); break;
            case StrategyKind::TopKSample:
                chosen = topk_sample(dist, strategy.sample_k, rng);
                break;
            case StrategyKind::Nucleus:
                chosen = nucleus_sample(dist, strategy.nucleus_p, rng);
                break;
            case StrategyKind::Typical:
                chosen = typical_sample(dist, strategy.typical_tau, rng);
                break;
            default: break;
        }
        trace.candidate_ids = {chosen};
        trace.expert_logp = {dist[chosen]};
        trace.penalty = {0.0};
        trace.score = {dist[chosen]};
        trace.amateur_eval_ns = 0;
    }

    trace.chosen = chosen;
    trace.step_ns = ns_between(start, Clock::now());
    return trace.chosen;
}

DecodeResult decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                    std::span<const TokenId> prompt, const DecodeConfig& config) {
    if (prompt.empty()) {
        throw_error(ErrorCode::InvalidParameter, "decode requires a non-empty prompt");
    }
    if (config.max_new_tokens < 1) {
        throw_error(ErrorCode::InvalidParameter, "max_new_tokens must be >= 1");
    }
    if (is_contrastive(config.strategy.kind)) require_ensemble(ensemble);

    SampleRng rng(config.strategy.seed);
    TokenSequence context(prompt.begin(), prompt.end());
    DecodeResult result;
    result.generated.reserve(static_cast<std::size_t>(config.max_new_tokens));

    for (int t = 0; t < config.max_new_tokens; ++t) {
        StepTrace trace;
        trace.position = context.size();
        const TokenId tok =
            decode_step(expert, ensemble, context, config.strategy, rng,
                        config.ensemble_mode, trace);
        result.generated.push_back(tok);
        result.trace.push_back(std::move(trace));
        context.push_back(tok);
        if (config.eos && tok == *config.eos) break;
    }
    return result;
}

namespace {

struct Hypothesis {
    TokenSequence generated;
    double cum_score = 0.0;
    bool done = false;          // emitted eos
    bool greedy_chain = false;  // exact stepwise-greedy path
};

struct Expansion {
    std::size_t parent = 0;
    TokenId token = 0;
    double cum_score = 0.0;
    double expert_logp = 0.0;
    bool greedy_child = false;
};

bool expansion_before(const Expansion& a, const Expansion& b) {
    if (a.cum_score != b.cum_score) return a.cum_score > b.cum_score;
    if (a.expert_logp != b.expert_logp) return a.expert_logp > b.expert_logp;
    if (a.token != b.token) return a.token < b.token;
    return a.parent < b.parent;
}

// Final ranking: best cumulative score, then the shorter, lexicographically
// smaller sequence. Total order keeps the search deterministic.
bool hypothesis_before(const Hypothesis& a, const Hypothesis& b) {
    if (a.cum_score != b.cum_score) return a.cum_score > b.cum_score;
    if (a.generated.size() != b.generated.size()) {
        return a.generated.size() < b.generated.size();
    }
    return a.generated < b.generated;
}

}  // namespace

DecodeResult decode_beam(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                         std::span<const TokenId> prompt, const DecodeConfig& config,
                         int beam_width) {
    if (beam_width < 1) {
        throw_error(ErrorCode::InvalidParameter, "beam_width must be >= 1");
    }
    if (beam_width == 1) return decode(expert, ensemble, prompt, config);
    if (!is_contrastive(config.strategy.kind)) {
        throw_error(ErrorCode::InvalidParameter,
                    "beam widths above 1 require a contrastive strategy");
    }
    if (prompt.empty()) {
        throw_error(ErrorCode::InvalidParameter, "decode requires a non-empty prompt");
    }
    if (config.max_new_tokens < 1) {
        throw_error(ErrorCode::InvalidParameter, "max_new_tokens must be >= 1");
    }
    require_ensemble(ensemble);

    const std::size_t width = static_cast<std::size_t>(beam_width);
    std::vector<Hypothesis> alive;
    alive.push_back(Hypothesis{{}, 0.0, false, true});
    std::vector<Hypothesis> completed;

    TokenSequence context(prompt.begin(), prompt.end());
    for (int t = 0; t < config.max_new_tokens && !alive.empty(); ++t) {
        std::vector<Expansion> expansions;
        for (std::size_t h = 0; h < alive.size(); ++h) {
            context.resize(prompt.size());
            context.insert(context.end(), alive[h].generated.begin(),
                           alive[h].generated.end());
            const ScoredStep step =
                score_step(expert, *ensemble, context, config.strategy, config.ensemble_mode);
            const std::size_t greedy_j =
                alive[h].greedy_chain ? argmax_scored(step) : step.candidates.size();
            for (std::size_t j = 0; j < step.candidates.size(); ++j) {
                expansions.push_back(Expansion{h, step.candidates.ids[j],
                                               alive[h].cum_score + step.score[j],
                                               step.candidates.expert_logp[j],
                                               j == greedy_j});
            }
        }

        std::sort(expansions.begin(), expansions.end(), expansion_before);
        std::size_t keep = std::min(width, expansions.size());
        // The stepwise-greedy continuation always survives pruning, so the
        // final answer can never score below the width-1 path.
        auto greedy_it = std::find_if(expansions.begin(), expansions.end(),
                                      [](const Expansion& e) { return e.greedy_child; });
        if (greedy_it != expansions.end()) {
            const std::size_t greedy_pos =
                static_cast<std::size_t>(greedy_it - expansions.begin());
            if (greedy_pos >= keep) std::swap(expansions[keep - 1], *greedy_it);
        }

        std::vector<Hypothesis> next;
        next.reserve(keep);
        for (std::size_t i = 0; i < keep; ++i) {
            const Expansion& e = expansions[i];
            Hypothesis hyp;
            hyp.generated = alive[e.parent].generated;
            hyp.generated.push_back(e.token);
            hyp.cum_score = e.cum_score;
            hyp.greedy_chain = e.greedy_child;
            hyp.done = config.eos && e.token == *config.eos;
            next.push_back(std::move(hyp));
        }

        alive.clear();
        for (auto& hyp : next) {
            if (hyp.done) {
                completed.push_back(std::move(hyp));
            } else {
                alive.push_back(std::move(hyp));
            }
        }
    }

    for (auto& hyp : alive) completed.push_back(std::move(hyp));
    const Hypothesis& winner =
        *std::min_element(completed.begin(), completed.end(), hypothesis_before);

    // Replay the winning path to produce the per-token trace. Unlike the
    // width-1 trace, a replayed step's chosen token need not be that step's
    // argmax; the beam committed to it for its cumulative score.
    DecodeResult result;
    result.generated = winner.generated;
    context.resize(prompt.size());
    for (TokenId tok : winner.generated) {
        const auto start = Clock::now();
        ScoredStep step =
            score_step(expert, *ensemble, context, config.strategy, config.ensemble_mode);
        StepTrace trace;
        trace.position = context.size();
        trace.candidate_ids = std::move(step.candidates.ids);
        trace.expert_logp = std::move(step.candidates.expert_logp);
        trace.penalty = std::move(step.penalty);
        trace.score = std::move(step.score);
        trace.chosen = tok;
        trace.amateur_eval_ns = step.amateur_eval_ns;
        trace.step_ns = ns_between(start, Clock::now());
        result.trace.push_back(std::move(trace));
        context.push_back(tok);
    }
    return result;
}

DecodeResult run_decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                        std::span<const TokenId> prompt, const DecodeConfig& config) {
    return decode_beam(expert, ensemble, prompt, config, config.strategy.beam_width);
}

}  // namespace macd
