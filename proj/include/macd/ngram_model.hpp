#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <vector>

#include "macd/language_model.hpp"

namespace macd {

enum class Smoothing : std::uint8_t {
    Additive = 0,    // (c + lambda) / (T + lambda * |V|), backoff on unseen contexts
    KneserNey = 1,   // interpolated, absolute discount, continuation counts below top
};

struct SmoothingSpec {
    Smoothing kind = Smoothing::Additive;
    double param = 0.01;  // lambda for Additive, discount for KneserNey

    static SmoothingSpec additive(double lambda = 0.01);
    static SmoothingSpec kneser_ney(double discount = 0.75);
};

/// Backoff-smoothed count-based autoregressive LM.
///
/// Counts are kept for every context length 0..order-1 within document
/// boundaries. Queries use the trailing order-1 context tokens; contexts
/// with no observations back off to shorter suffixes.
class NGramModel final : public LanguageModel {
  public:
    static NGramModel train(std::shared_ptr<const Vocabulary> vocab,
                            std::span<const TokenSequence> documents, int order,
                            SmoothingSpec smoothing);

    const Vocabulary& vocab() const override { return *vocab_; }
    LogProbDistribution next_logprobs(std::span<const TokenId> context) const override;

    int order() const { return order_; }
    SmoothingSpec smoothing() const { return smoothing_; }

    /// Versioned binary persistence; save -> load round-trips to a model with
    /// bitwise-identical query results (counts are serialized in sorted order).
    void save(const std::filesystem::path& path) const;
    static NGramModel load(const std::filesystem::path& path);

    std::uint64_t total_tokens() const { return total_tokens_; }

  private:
    struct Row {
        std::map<TokenId, std::uint64_t> counts;
        std::uint64_t total = 0;
    };
    using ContextTable = std::map<TokenSequence, Row>;

    NGramModel(std::shared_ptr<const Vocabulary> vocab, int order, SmoothingSpec smoothing);

    void derive_continuation_tables();
    void fill_additive(std::span<const TokenId> context, std::vector<double>& out) const;
    void fill_kneser_ney(std::span<const TokenId> context, std::vector<double>& out) const;

    std::shared_ptr<const Vocabulary> vocab_;
    int order_;
    SmoothingSpec smoothing_;
    std::uint64_t total_tokens_ = 0;

    // counts_[L]: raw n-gram counts keyed by length-L context.
    std::vector<ContextTable> counts_;
    // continuation_[L]: distinct-predecessor counts for levels below the top,
    // derived from counts_[L+1]; only populated for Kneser-Ney.
    std::vector<ContextTable> continuation_;
};

inline NGramModel train_ngram(std::shared_ptr<const Vocabulary> vocab,
                              std::span<const TokenSequence> documents, int order,
                              SmoothingSpec smoothing) {
    return NGramModel::train(std::move(vocab), documents, order, smoothing);
}

}  // namespace macd
