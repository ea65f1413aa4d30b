#include "macd/metrics.hpp"

#include <map>
#include <vector>

namespace macd {

namespace {

using Gram = std::vector<TokenId>;

Gram gram_at(std::span<const TokenId> seq, std::size_t start, std::size_t n) {
    return Gram(seq.begin() + static_cast<std::ptrdiff_t>(start),
                seq.begin() + static_cast<std::ptrdiff_t>(start + n));
}

}  // namespace

double distinct_n(std::span<const TokenId> seq, int n) {
    if (n < 1) throw_error(ErrorCode::InvalidParameter, "distinct_n requires n >= 1");
    const std::size_t un = static_cast<std::size_t>(n);
    if (seq.size() < un) return 1.0;
    const std::size_t total = seq.size() - un + 1;
    std::map<Gram, bool> seen;
    for (std::size_t i = 0; i < total; ++i) seen[gram_at(seq, i, un)] = true;
    return static_cast<double>(seen.size()) / static_cast<double>(total);
}

double diversity(std::span<const TokenId> seq) {
    return distinct_n(seq, 2) * distinct_n(seq, 3) * distinct_n(seq, 4);
}

double repetition_rate(std::span<const TokenId> seq, int n, int window) {
    if (n < 1) throw_error(ErrorCode::InvalidParameter, "repetition_rate requires n >= 1");
    if (window < 0) throw_error(ErrorCode::InvalidParameter, "window must be >= 0");
    const std::size_t un = static_cast<std::size_t>(n);
    if (seq.size() < un) return 0.0;
    const std::size_t total = seq.size() - un + 1;
    std::size_t repeated = 0;
    // last start position of each gram seen so far
    std::map<Gram, std::size_t> last;
    for (std::size_t i = 0; i < total; ++i) {
        Gram g = gram_at(seq, i, un);
        auto it = last.find(g);
        if (it != last.end() &&
            (window == 0 || i - it->second <= static_cast<std::size_t>(window))) {
            ++repeated;
        }
        last[std::move(g)] = i;
    }
    return static_cast<double>(repeated) / static_cast<double>(total);
}

double expert_nll_per_token(const LanguageModel& expert, std::span<const TokenId> seq) {
    if (seq.size() < 2) {
        throw_error(ErrorCode::InvalidParameter,
                    "expert_nll_per_token requires at least two tokens");
    }
    return continuation_nll(expert, seq.subspan(0, 1), seq.subspan(1));
}

double continuation_nll(const LanguageModel& expert, std::span<const TokenId> prompt,
                        std::span<const TokenId> continuation) {
    if (prompt.empty() || continuation.empty()) {
        throw_error(ErrorCode::InvalidParameter,
                    "continuation_nll requires a non-empty prompt and continuation");
    }
    TokenSequence context(prompt.begin(), prompt.end());
    double total = 0.0;
    for (TokenId tok : continuation) {
        const LogProbDistribution dist = expert.next_logprobs(context);
        if (tok >= dist.size()) {
            throw_error(ErrorCode::VocabMismatch, "token outside the expert vocabulary");
        }
        total -= dist[tok];
        context.push_back(tok);
    }
    return total / static_cast<double>(continuation.size());
}

MetricsReport compute_metrics(const LanguageModel& expert, std::span<const TokenId> prompt,
                              std::span<const TokenId> continuation) {
    MetricsReport report;
    report.distinct2 = distinct_n(continuation, 2);
    report.distinct3 = distinct_n(continuation, 3);
    report.distinct4 = distinct_n(continuation, 4);
    report.diversity = report.distinct2 * report.distinct3 * report.distinct4;
    report.repetition = repetition_rate(continuation, 4, 0);
    report.nll = continuation.empty()
                     ? 0.0
                     : continuation_nll(expert, prompt, continuation);
    return report;
}

}  // namespace macd
