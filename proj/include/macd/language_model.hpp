#pragma once

#include <memory>
#include <span>

#include "macd/logprob.hpp"
#include "macd/types.hpp"
#include "macd/vocab.hpp"

namespace macd {

/// Conditional autoregressive language model over a fixed vocabulary.
/// Implementations are immutable after construction and safe for concurrent
/// queries; next_logprobs is a pure function of the context.
class LanguageModel {
  public:
    virtual ~LanguageModel() = default;

    virtual const Vocabulary& vocab() const = 0;

    /// Normalized log-probabilities of every next token given the context.
    virtual LogProbDistribution next_logprobs(std::span<const TokenId> context) const = 0;

  protected:
    /// Throws VocabMismatch if any id falls outside the model's vocabulary.
    void check_context(std::span<const TokenId> context) const;
};

/// Log-probability of the whole sequence: sum over t of
/// log P(x_t | x_<t), the first factor conditioned on the empty context.
double sequence_logprob(const LanguageModel& model, std::span<const TokenId> seq);

using LanguageModelPtr = std::shared_ptr<const LanguageModel>;

}  // namespace macd
