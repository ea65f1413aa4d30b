#include "macd/ngram_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

namespace macd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr char kMagic[8] = {'M', 'A', 'C', 'D', 'N', 'G', '0', '1'};

template <typename T>
void write_pod(std::ostream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T value{};
    is.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!is) throw_error(ErrorCode::IoError, "truncated model file");
    return value;
}

void write_string(std::ostream& os, const std::string& s) {
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::istream& is) {
    const auto len = read_pod<std::uint32_t>(is);
    std::string s(len, '\0');
    is.read(s.data(), len);
    if (!is) throw_error(ErrorCode::IoError, "truncated model file");
    return s;
}

}  // namespace

SmoothingSpec SmoothingSpec::additive(double lambda) {
    if (lambda < 0.0 || !std::isfinite(lambda)) {
        throw_error(ErrorCode::InvalidParameter, "additive lambda must be finite and >= 0");
    }
    return SmoothingSpec{Smoothing::Additive, lambda};
}

SmoothingSpec SmoothingSpec::kneser_ney(double discount) {
    if (!(discount > 0.0 && discount < 1.0)) {
        throw_error(ErrorCode::InvalidParameter, "Kneser-Ney discount must be in (0,1)");
    }
    return SmoothingSpec{Smoothing::KneserNey, discount};
}

NGramModel::NGramModel(std::shared_ptr<const Vocabulary> vocab, int order, SmoothingSpec smoothing)
    : vocab_(std::move(vocab)), order_(order), smoothing_(smoothing) {
    counts_.resize(static_cast<std::size_t>(order_));
}

NGramModel NGramModel::train(std::shared_ptr<const Vocabulary> vocab,
                             std::span<const TokenSequence> documents, int order,
                             SmoothingSpec smoothing) {
    if (order < 1) {
        throw_error(ErrorCode::InvalidOrder, "n-gram order must be >= 1");
    }
    std::uint64_t total = 0;
    for (const auto& doc : documents) total += doc.size();
    if (total < static_cast<std::uint64_t>(order)) {
        throw_error(ErrorCode::CorpusTooSmall,
                    "corpus has " + std::to_string(total) + " tokens, order " +
                        std::to_string(order) + " requires at least that many");
    }

    NGramModel model(std::move(vocab), order, smoothing);
    model.total_tokens_ = total;
    const std::size_t vocab_size = model.vocab_->size();

    TokenSequence ctx;
    for (const auto& doc : documents) {
        for (std::size_t i = 0; i < doc.size(); ++i) {
            if (doc[i] >= vocab_size) {
                throw_error(ErrorCode::VocabMismatch, "training token outside vocabulary");
            }
            const std::size_t max_ctx = std::min<std::size_t>(order - 1, i);
            for (std::size_t len = 0; len <= max_ctx; ++len) {
                ctx.assign(doc.begin() + (i - len), doc.begin() + i);
                Row& row = model.counts_[len][ctx];
                ++row.counts[doc[i]];
                ++row.total;
            }
        }
    }
    if (smoothing.kind == Smoothing::KneserNey) {
        model.derive_continuation_tables();
    }
    return model;
}

void NGramModel::derive_continuation_tables() {
    continuation_.assign(static_cast<std::size_t>(order_ > 0 ? order_ - 1 : 0), ContextTable{});
    for (std::size_t level = 0; level + 1 < counts_.size(); ++level) {
        const ContextTable& upper = counts_[level + 1];
        ContextTable& cont = continuation_[level];
        for (const auto& [ctx, row] : upper) {
            TokenSequence suffix(ctx.begin() + 1, ctx.end());
            Row& out = cont[suffix];
            for (const auto& [tok, count] : row.counts) {
                ++out.counts[tok];
                ++out.total;
            }
        }
    }
}

LogProbDistribution NGramModel::next_logprobs(std::span<const TokenId> context) const {
    check_context(context);
    std::vector<double> out(vocab_->size(), kNegInf);
    if (smoothing_.kind == Smoothing::Additive) {
        fill_additive(context, out);
    } else {
        fill_kneser_ney(context, out);
    }
    return LogProbDistribution(std::move(out));
}

void NGramModel::fill_additive(std::span<const TokenId> context, std::vector<double>& out) const {
    const std::size_t vocab_size = out.size();
    const double lambda = smoothing_.param;
    const std::size_t top = std::min<std::size_t>(order_ - 1, context.size());

    // Longest context suffix with observations wins; the unigram row always exists.
    const Row* row = nullptr;
    for (std::size_t len = top + 1; len-- > 0;) {
        TokenSequence key(context.end() - len, context.end());
        auto it = counts_[len].find(key);
        if (it != counts_[len].end() && it->second.total > 0) {
            row = &it->second;
            break;
        }
    }

    const double total = row ? static_cast<double>(row->total) : 0.0;
    const double denom = total + lambda * static_cast<double>(vocab_size);
    if (denom <= 0.0) {
        // No observations anywhere and lambda == 0; only reachable on an
        // untrained model. Fall back to uniform to keep the contract.
        const double u = -std::log(static_cast<double>(vocab_size));
        std::fill(out.begin(), out.end(), u);
        return;
    }
    const double log_denom = std::log(denom);
    if (lambda > 0.0) {
        const double base = std::log(lambda) - log_denom;
        std::fill(out.begin(), out.end(), base);
    }
    if (row != nullptr) {
        for (const auto& [tok, count] : row->counts) {
            out[tok] = std::log(static_cast<double>(count) + lambda) - log_denom;
        }
    }
}

void NGramModel::fill_kneser_ney(std::span<const TokenId> context, std::vector<double>& out) const {
    const std::size_t vocab_size = out.size();
    const double d = smoothing_.param;
    const std::size_t top = std::min<std::size_t>(order_ - 1, context.size());

    // Interpolated bottom-up: p holds the backoff distribution in prob space.
    // The queried level uses raw counts; levels below it use continuation
    // counts; the base interpolates with the uniform distribution so every
    // token keeps positive probability.
    std::vector<double> p(vocab_size, 1.0 / static_cast<double>(vocab_size));

    const Row* base_row = nullptr;
    if (top == 0) {
        auto it = counts_[0].find(TokenSequence{});
        if (it != counts_[0].end()) base_row = &it->second;
    } else if (!continuation_.empty()) {
        auto it = continuation_[0].find(TokenSequence{});
        if (it != continuation_[0].end()) base_row = &it->second;
    }
    if (base_row != nullptr && base_row->total > 0) {
        const double total = static_cast<double>(base_row->total);
        const double distinct = static_cast<double>(base_row->counts.size());
        const double backoff_mass = d * distinct / total;
        const double uniform = 1.0 / static_cast<double>(vocab_size);
        for (double& v : p) v = backoff_mass * uniform;
        for (const auto& [tok, count] : base_row->counts) {
            p[tok] += std::max(static_cast<double>(count) - d, 0.0) / total;
        }
    }

    for (std::size_t level = 1; level <= top; ++level) {
        const ContextTable& table = level == top ? counts_[level] : continuation_[level];
        TokenSequence key(context.end() - level, context.end());
        auto it = table.find(key);
        if (it == table.end() || it->second.total == 0) continue;  // pure backoff

        const Row& row = it->second;
        const double total = static_cast<double>(row.total);
        const double distinct = static_cast<double>(row.counts.size());
        const double backoff_mass = d * distinct / total;
        std::vector<double> next(vocab_size);
        for (std::size_t i = 0; i < vocab_size; ++i) next[i] = backoff_mass * p[i];
        for (const auto& [tok, count] : row.counts) {
            next[tok] += std::max(static_cast<double>(count) - d, 0.0) / total;
        }
        p.swap(next);
    }

    for (std::size_t i = 0; i < vocab_size; ++i) {
        out[i] = p[i] > 0.0 ? std::log(p[i]) : kNegInf;
    }
}

void NGramModel::save(const std::filesystem::path& path) const {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw_error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    }
    os.write(kMagic, sizeof(kMagic));
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(order_));
    write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(smoothing_.kind));
    write_pod<double>(os, smoothing_.param);
    write_pod<std::uint64_t>(os, total_tokens_);

    write_pod<std::uint64_t>(os, vocab_->size());
    for (const auto& tok : vocab_->tokens()) write_string(os, tok);
    write_pod<std::uint32_t>(os, vocab_->bos());
    write_pod<std::uint32_t>(os, vocab_->eos());
    write_pod<std::uint32_t>(os, vocab_->unk());

    for (const auto& table : counts_) {
        write_pod<std::uint64_t>(os, table.size());
        for (const auto& [ctx, row] : table) {
            for (TokenId id : ctx) write_pod<std::uint32_t>(os, id);
            write_pod<std::uint64_t>(os, row.counts.size());
            for (const auto& [tok, count] : row.counts) {
                write_pod<std::uint32_t>(os, tok);
                write_pod<std::uint64_t>(os, count);
            }
        }
    }
    if (!os) {
        throw_error(ErrorCode::IoError, "failed writing " + path.string());
    }
}

NGramModel NGramModel::load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) {
        throw_error(ErrorCode::ModelNotFound, "cannot open model file " + path.string());
    }
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw_error(ErrorCode::IoError, "bad model file magic in " + path.string());
    }
    const auto order = static_cast<int>(read_pod<std::uint32_t>(is));
    const auto kind = static_cast<Smoothing>(read_pod<std::uint8_t>(is));
    const auto param = read_pod<double>(is);
    const auto total_tokens = read_pod<std::uint64_t>(is);

    const auto vocab_count = read_pod<std::uint64_t>(is);
    std::vector<std::string> tokens;
    tokens.reserve(vocab_count);
    for (std::uint64_t i = 0; i < vocab_count; ++i) tokens.push_back(read_string(is));
    const auto bos = read_pod<std::uint32_t>(is);
    const auto eos = read_pod<std::uint32_t>(is);
    const auto unk = read_pod<std::uint32_t>(is);
    auto vocab = std::make_shared<Vocabulary>(std::move(tokens), bos, eos, unk);

    NGramModel model(std::move(vocab), order, SmoothingSpec{kind, param});
    model.total_tokens_ = total_tokens;
    for (int level = 0; level < order; ++level) {
        const auto n_contexts = read_pod<std::uint64_t>(is);
        ContextTable& table = model.counts_[level];
        auto hint = table.end();
        for (std::uint64_t c = 0; c < n_contexts; ++c) {
            TokenSequence ctx(static_cast<std::size_t>(level));
            for (auto& id : ctx) id = read_pod<std::uint32_t>(is);
            Row row;
            const auto n_entries = read_pod<std::uint64_t>(is);
            for (std::uint64_t e = 0; e < n_entries; ++e) {
                const auto tok = read_pod<std::uint32_t>(is);
                const auto count = read_pod<std::uint64_t>(is);
                row.counts.emplace_hint(row.counts.end(), tok, count);
                row.total += count;
            }
            hint = table.emplace_hint(hint, std::move(ctx), std::move(row));
        }
    }
    if (model.smoothing_.kind == Smoothing::KneserNey) {
        model.derive_continuation_tables();
    }
    return model;
}

}  // namespace macd
