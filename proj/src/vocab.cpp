#include "macd/vocab.hpp"

#include <algorithm>
#include <cctype>

namespace macd {

namespace {

std::uint64_t fnv1a(std::uint64_t h, std::string_view s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> tokens, TokenId bos, TokenId eos, TokenId unk)
    : tokens_(std::move(tokens)), bos_(bos), eos_(eos), unk_(unk) {
    if (tokens_.empty()) {
        throw_error(ErrorCode::InvalidParameter, "vocabulary must be non-empty");
    }
    const auto n = tokens_.size();
    if (bos_ >= n || eos_ >= n || unk_ >= n) {
        throw_error(ErrorCode::InvalidParameter, "special token id out of range");
    }
    if (bos_ == eos_ || bos_ == unk_ || eos_ == unk_) {
        throw_error(ErrorCode::InvalidParameter, "special token ids must be distinct");
    }
    index_.reserve(n);
    for (TokenId id = 0; id < n; ++id) {
        auto [it, inserted] = index_.emplace(tokens_[id], id);
        if (!inserted) {
            throw_error(ErrorCode::InvalidParameter, "duplicate token: " + tokens_[id]);
        }
    }
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& t : tokens_) {
        h = fnv1a(h, t);
        h = fnv1a(h, "\x1f");
    }
    h = fnv1a(h, std::to_string(bos_) + "," + std::to_string(eos_) + "," + std::to_string(unk_));
    fingerprint_ = h;
}

TokenId Vocabulary::id_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    return it == index_.end() ? unk_ : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
    return index_.find(std::string(token)) != index_.end();
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n) {
        while (i < n && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) {
            words.push_back(to_lower(text.substr(start, i - start)));
        }
    }
    return words;
}

Vocabulary build_vocab(std::string_view corpus_text, std::uint64_t min_count) {
    const std::vector<std::string> words = split_words(corpus_text);
    if (words.empty()) {
        throw_error(ErrorCode::EmptyCorpus, "corpus contains no tokens");
    }
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& w : words) ++freq[w];

    std::vector<std::pair<std::string, std::uint64_t>> kept;
    kept.reserve(freq.size());
    for (auto& [word, count] : freq) {
        if (count < min_count) continue;
        if (word == kUnkToken || word == kBosToken || word == kEosToken) continue;
        kept.emplace_back(word, count);
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    std::vector<std::string> tokens = {kUnkToken, kBosToken, kEosToken};
    tokens.reserve(kept.size() + 3);
    for (auto& [word, count] : kept) tokens.push_back(std::move(word));
    return Vocabulary(std::move(tokens), /*bos=*/1, /*eos=*/2, /*unk=*/0);
}

TokenSequence tokenize(std::string_view text, const Vocabulary& vocab) {
    TokenSequence ids;
    for (const auto& w : split_words(text)) {
        ids.push_back(vocab.id_of(w));
    }
    return ids;
}

std::string detokenize(std::span<const TokenId> ids, const Vocabulary& vocab) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += ' ';
        out += vocab.token(ids[i]);
    }
    return out;
}

}  // namespace macd
