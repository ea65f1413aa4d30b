#pragma once

#include <span>

#include "macd/language_model.hpp"
#include "macd/types.hpp"

namespace macd {

/// Ratio of unique n-grams to total n-grams; 1.0 when the sequence is too
/// short to contain any n-gram (vacuously fully diverse).
double distinct_n(std::span<const TokenId> seq, int n);

/// Product of distinct_n for n = 2, 3, 4.
double diversity(std::span<const TokenId> seq);

/// Fraction of n-gram positions whose n-gram already occurred earlier.
/// window = 0 looks anywhere earlier; window = w only within the previous w
/// n-gram starts.
double repetition_rate(std::span<const TokenId> seq, int n = 4, int window = 0);

/// Mean negative log-likelihood, in nats, of tokens 2..L under the model,
/// each conditioned on its full prefix. The leading token is treated as
/// given, so a uniform model over V scores exactly ln |V| per token.
double expert_nll_per_token(const LanguageModel& expert, std::span<const TokenId> seq);

/// NLL per token of a continuation given a prompt prefix: every continuation
/// token is conditioned on prompt + preceding continuation tokens.
double continuation_nll(const LanguageModel& expert, std::span<const TokenId> prompt,
                        std::span<const TokenId> continuation);

/// Quality metrics of one generated sequence.
struct MetricsReport {
    double distinct2 = 0.0;
    double distinct3 = 0.0;
    double distinct4 = 0.0;
    double diversity = 0.0;
    double repetition = 0.0;
    double nll = 0.0;
};

MetricsReport compute_metrics(const LanguageModel& expert, std::span<const TokenId> prompt,
                              std::span<const TokenId> continuation);

}  // namespace macd
