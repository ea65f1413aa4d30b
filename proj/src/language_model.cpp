#include "macd/language_model.hpp"

namespace macd {

void LanguageModel::check_context(std::span<const TokenId> context) const {
    const auto n = vocab().size();
    for (TokenId id : context) {
        if (id >= n) {
            throw_error(ErrorCode::VocabMismatch,
                        "token id " + std::to_string(id) + " outside vocabulary of size " +
                            std::to_string(n));
        }
    }
}

double sequence_logprob(const LanguageModel& model, std::span<const TokenId> seq) {
    if (seq.empty()) {
        throw_error(ErrorCode::InvalidParameter, "sequence_logprob requires a non-empty sequence");
    }
    const auto vocab_size = model.vocab().size();
    double total = 0.0;
    for (std::size_t t = 0; t < seq.size(); ++t) {
        if (seq[t] >= vocab_size) {
            throw_error(ErrorCode::VocabMismatch, "sequence token outside vocabulary");
        }
        const LogProbDistribution dist = model.next_logprobs(seq.subspan(0, t));
        total += dist[seq[t]];
    }
    return total;
}

}  // namespace macd
