#include "macd/table_model.hpp"

namespace macd {

SyntheticTableModel::SyntheticTableModel(std::shared_ptr<const Vocabulary> vocab,
                                         std::size_t context_len, LogProbDistribution default_dist)
    : vocab_(std::move(vocab)), context_len_(context_len), default_dist_(std::move(default_dist)) {
    validate_dist(default_dist_);
}

void SyntheticTableModel::validate_dist(const LogProbDistribution& dist) const {
    if (dist.size() != vocab_->size()) {
        throw_error(ErrorCode::VocabMismatch, "distribution length does not match vocabulary");
    }
    if (!is_normalized(dist)) {
        throw_error(ErrorCode::InvalidParameter, "stored distribution is not normalized");
    }
}

void SyntheticTableModel::set(TokenSequence context, LogProbDistribution dist) {
    if (context.size() != context_len_) {
        throw_error(ErrorCode::InvalidParameter, "context length must equal the table window");
    }
    validate_dist(dist);
    table_[std::move(context)] = std::move(dist);
}

LogProbDistribution SyntheticTableModel::next_logprobs(std::span<const TokenId> context) const {
    check_context(context);
    if (context.size() >= context_len_) {
        const auto tail = context.subspan(context.size() - context_len_);
        TokenSequence key(tail.begin(), tail.end());
        auto it = table_.find(key);
        if (it != table_.end()) return it->second;
    }
    return default_dist_;
}

}  // namespace macd
