#pragma once

#include <map>
#include <memory>

#include "macd/language_model.hpp"

namespace macd {

/// Deterministic lookup-table model: a fixed-length context window maps to a
/// stored distribution, everything else gets the default distribution.
/// Used as an exact oracle backend in tests and synthetic benchmarks.
class SyntheticTableModel final : public LanguageModel {
  public:
    SyntheticTableModel(std::shared_ptr<const Vocabulary> vocab, std::size_t context_len,
                        LogProbDistribution default_dist);

    /// Stores a distribution for one context window (must have length
    /// context_len and be normalized).
    void set(TokenSequence context, LogProbDistribution dist);

    const Vocabulary& vocab() const override { return *vocab_; }
    LogProbDistribution next_logprobs(std::span<const TokenId> context) const override;

    std::size_t context_len() const { return context_len_; }

  private:
    void validate_dist(const LogProbDistribution& dist) const;

    std::shared_ptr<const Vocabulary> vocab_;
    std::size_t context_len_;
    LogProbDistribution default_dist_;
    std::map<TokenSequence, LogProbDistribution> table_;
};

}  // namespace macd
