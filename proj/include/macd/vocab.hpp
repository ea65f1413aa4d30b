#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "macd/types.hpp"

namespace macd {

inline constexpr const char* kUnkToken = "<unk>";
inline constexpr const char* kBosToken = "<bos>";
inline constexpr const char* kEosToken = "<eos>";

/// Dense token-string <-> id mapping with bos/eos/unk specials.
/// Ids are 0..size()-1; the index is the exact inverse of the token list.
class Vocabulary {
  public:
    Vocabulary(std::vector<std::string> tokens, TokenId bos, TokenId eos, TokenId unk);

    std::size_t size() const { return tokens_.size(); }
    const std::string& token(TokenId id) const { return tokens_.at(id); }
    const std::vector<std::string>& tokens() const { return tokens_; }

    /// Id for a token string; unknown strings map to unk.
    TokenId id_of(std::string_view token) const;
    bool contains(std::string_view token) const;

    TokenId bos() const { return bos_; }
    TokenId eos() const { return eos_; }
    TokenId unk() const { return unk_; }

    /// Content hash used for cheap vocab-compatibility checks across models.
    std::uint64_t fingerprint() const { return fingerprint_; }

  private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, TokenId> index_;
    TokenId bos_, eos_, unk_;
    std::uint64_t fingerprint_ = 0;
};

/// Lowercased whitespace word split shared by build_vocab and tokenize.
std::vector<std::string> split_words(std::string_view text);

/// Builds a vocabulary from plain text (one document per line).
/// Specials occupy ids 0..2 (<unk>, <bos>, <eos>); corpus tokens with
/// frequency >= min_count follow, ordered by frequency desc then
/// lexicographically, so the result is deterministic.
Vocabulary build_vocab(std::string_view corpus_text, std::uint64_t min_count = 1);

/// Whitespace tokenization with lowercasing; out-of-vocabulary words map to unk.
TokenSequence tokenize(std::string_view text, const Vocabulary& vocab);

/// Joins tokens with single spaces (inverse of tokenize up to whitespace
/// normalization for in-vocabulary lowercase text).
std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab);

}  // namespace macd
