#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "macd/candidates.hpp"
#include "macd/ensemble.hpp"
#include "macd/language_model.hpp"
#include "macd/sampling.hpp"

namespace macd {

enum class StrategyKind {
    Greedy,
    TopKSample,
    Nucleus,
    Typical,
    Cd,             // single-amateur contrast (ensemble member 0)
    MacdMean,       // mean amateur log-prob penalty
    MacdConsensus,  // consensus-ratio penalty
};

bool is_contrastive(StrategyKind kind);
bool is_stochastic(StrategyKind kind);
const char* strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);

struct StrategySpec {
    StrategyKind kind = StrategyKind::Greedy;
    double alpha = 0.1;           // contrastive penalty weight, >= 0
    int sample_k = 50;            // TopKSample
    double nucleus_p = 0.95;      // Nucleus
    double typical_tau = 0.95;    // Typical
    std::uint64_t seed = 0;       // stochastic variants
    FilterSpec filter = FilterSpec::topk(50);
    VoteRule vote_rule = VoteRule::top_rank(10);
    double logp_floor = kDefaultLogpFloor;
    int beam_width = 1;  // > 1 only for contrastive variants
};

StrategySpec greedy_strategy();
StrategySpec topk_strategy(int k, std::uint64_t seed);
StrategySpec nucleus_strategy(double p, std::uint64_t seed);
StrategySpec typical_strategy(double tau, std::uint64_t seed);
StrategySpec cd_strategy(double alpha, FilterSpec filter);
StrategySpec macd_mean_strategy(double alpha, FilterSpec filter);
StrategySpec macd_consensus_strategy(double alpha, FilterSpec filter, VoteRule vote_rule);

struct DecodeConfig {
    StrategySpec strategy;
    int max_new_tokens = 256;
    std::optional<TokenId> eos;  // stop after emitting this token, if set
    EvalMode ensemble_mode = EvalMode::Sequential;
};

/// One emitted token's worth of observability. For contrastive strategies the
/// arrays cover the whole filtered candidate set; sampling baselines and
/// greedy record only the emitted token. penalty holds the mean amateur logp
/// (Cd/MacdMean) or the consensus ratio (MacdConsensus), zeros otherwise.
struct StepTrace {
    std::size_t position = 0;  // absolute index in prompt + generated
    std::vector<TokenId> candidate_ids;
    std::vector<double> expert_logp;
    std::vector<double> penalty;
    std::vector<double> score;
    TokenId chosen = 0;
    std::uint64_t step_ns = 0;
    std::uint64_t amateur_eval_ns = 0;
};

using DecodeTrace = std::vector<StepTrace>;

struct DecodeResult {
    TokenSequence generated;  // excludes the prompt
    DecodeTrace trace;
};

/// Filtered candidates with their per-candidate penalties and final scores
/// under a contrastive strategy, for one context.
struct ScoredStep {
    CandidateSet candidates;
    std::vector<double> penalty;
    std::vector<double> score;
    std::uint64_t amateur_eval_ns = 0;
};

ScoredStep score_step(const LanguageModel& expert, const AmateurEnsemble& ensemble,
                      std::span<const TokenId> context, const StrategySpec& strategy,
                      EvalMode mode);

/// Index of the winning candidate: highest score, ties to higher expert
/// logp, then to the lower token id.
std::size_t argmax_scored(const ScoredStep& step);

/// One decoding step under any strategy. The rng is consumed only by the
/// stochastic baselines. ensemble may be null for non-contrastive strategies.
TokenId decode_step(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                    std::span<const TokenId> context, const StrategySpec& strategy,
                    SampleRng& rng, EvalMode mode, StepTrace& trace);

/// Autoregressive loop: appends tokens until eos is emitted or
/// max_new_tokens is reached. Deterministic given the config and seed.
DecodeResult decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                    std::span<const TokenId> prompt, const DecodeConfig& config);

/// Beam search over cumulative per-step contrastive scores, re-filtering per
/// hypothesis. The stepwise-greedy chain is always retained, so the returned
/// hypothesis never scores below the width-1 path. beam_width 1 delegates to
/// decode; widths above 1 require a deterministic strategy.
DecodeResult decode_beam(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                         std::span<const TokenId> prompt, const DecodeConfig& config,
                         int beam_width);

/// Dispatches on config.strategy.beam_width.
DecodeResult run_decode(const LanguageModel& expert, const AmateurEnsemble* ensemble,
                        std::span<const TokenId> prompt, const DecodeConfig& config);

}  // namespace macd
