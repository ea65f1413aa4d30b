#include "macd/corpus_gen.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "macd/types.hpp"

namespace macd {

const char* const kCorpusDomains[3] = {"news", "wiki", "story"};

namespace {

struct Pools {
    std::vector<std::string> nouns;
    std::vector<std::string> verbs;
    std::vector<std::string> adjectives;
    std::vector<std::string> templates;
    std::vector<std::string> attractors;  // phrases an attractor doc repeats
};

// Templates use N / V / A placeholders; everything else is emitted verbatim.
Pools domain_pools(const std::string& domain) {
    Pools p;
    if (domain == "news") {
        p.nouns = {"market",  "report",   "government", "minister", "election", "economy",
                   "prices",  "growth",   "officials",  "city",     "police",   "court",
                   "trade",   "deal",     "talks",      "week",     "year",     "budget",
                   "company", "industry", "bank",       "vote",     "council",  "strike",
                   "summit",  "crisis",   "survey",     "region",   "exports",  "figures"};
        p.verbs = {"said",      "rose",    "fell",     "announced", "confirmed", "warned",
                   "showed",    "reached", "opened",   "closed",    "continued", "declined",
                   "increased", "ended",   "reported", "expected",  "approved",  "rejected"};
        p.adjectives = {"new",    "early", "late",    "strong", "weak",     "sharp",
                        "recent", "local", "federal", "senior", "national", "annual"};
        p.templates = {
            "the N V that the N V in the N",
            "the A N V after the N V the N",
            "N in the N V as the A N V",
            "the N of the N V the A N this N",
            "a A N V that N in the N V",
            "the N V and the N of N V again",
            "N V the N before the N V the N",
            "the N N V while A N V in the N",
            "after the N the A N V the N of N",
            "the N V to the N as N V the A N",
        };
        p.attractors = {
            "the market report said prices rose again",
            "officials said the deal was close again",
        };
    } else if (domain == "wiki") {
        p.nouns = {"century", "system",     "species", "river",    "history", "region",
                   "language", "population", "area",    "term",     "theory",  "school",
                   "village",  "valley",     "north",   "south",    "island",  "period",
                   "culture",  "structure",  "process", "surface",  "climate", "mountain",
                   "empire",   "dynasty",    "method",  "material", "family",  "tradition"};
        p.verbs = {"known",     "called",   "found",     "based",    "located",  "formed",
                   "described", "named",    "developed", "used",     "recorded", "divided",
                   "derived",   "included", "considered", "established", "noted", "observed"};
        p.adjectives = {"ancient", "modern",  "large",  "small",   "common", "rare",
                        "early",   "central", "native", "western", "formal", "typical"};
        p.templates = {
            "the N is V for the A N of the N",
            "the A N was V in the N of the N",
            "N in the N are V from the A N",
            "the N of the N is V as a A N",
            "a N of N was V near the N N",
            "the N is V and the N is V by the N",
            "the A N of the N was V during the N",
            "N from the N were V into the A N",
            "in the N the N was V as the N of N",
            "the N and the N are V within the A N",
        };
        p.attractors = {
            "the region is known for the river valley",
            "the system was based on the early method",
        };
    } else {
        p.nouns = {"night", "morning", "door",   "house",  "road",   "voice",
                   "eyes",  "hand",    "heart",  "wind",   "rain",   "forest",
                   "river", "king",    "girl",   "boy",    "man",    "woman",
                   "child", "dream",   "shadow", "light",  "fire",   "stone",
                   "path",  "garden",  "letter", "window", "silence", "winter"};
        p.verbs = {"opened",  "closed",   "walked",  "waited",  "watched",  "turned",
                   "fell",    "rose",     "moved",   "stopped", "listened", "followed",
                   "carried", "remembered", "reached", "stood",  "whispered", "returned"};
        p.adjectives = {"dark",  "quiet", "old",   "young", "cold",   "warm",
                        "long",  "small", "empty", "pale",  "silent", "distant"};
        p.templates = {
            "the N V the N and the A N V",
            "a A N V at the N of the N",
            "the N V while the N V in the A N",
            "in the N the N V the N of the N",
            "the A N V and the N V the N again",
            "the N of the N V as the A N V",
            "N V the N before the N V the A N",
            "the N V the A N near the N N",
            "when the N V the N the A N V",
            "the N and the N V through the A N",
        };
        p.attractors = {
            "the wind rose and the rain fell again",
            "the door opened and the child walked in",
        };
    }
    return p;
}

// Skewed index draw: small indices are much more likely, giving the word
// pools a rough frequency hierarchy.
std::size_t zipf_index(std::mt19937_64& rng, std::size_t n) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto idx = static_cast<std::size_t>(std::floor(static_cast<double>(n) * u * u));
    return std::min(idx, n - 1);
}

std::string expand_template(const std::string& tmpl, const Pools& pools,
                            std::mt19937_64& rng) {
    std::string out;
    for (std::size_t i = 0; i < tmpl.size(); ++i) {
        const char c = tmpl[i];
        const bool placeholder =
            (c == 'N' || c == 'V' || c == 'A') &&
            (i + 1 == tmpl.size() || tmpl[i + 1] == ' ') && (i == 0 || tmpl[i - 1] == ' ');
        if (!placeholder) {
            out.push_back(c);
            continue;
        }
        const std::vector<std::string>* pool = &pools.nouns;
        if (c == 'V') pool = &pools.verbs;
        if (c == 'A') pool = &pools.adjectives;
        out += (*pool)[zipf_index(rng, pool->size())];
    }
    return out;
}

std::string regular_doc(const Pools& pools, const CorpusGenConfig& cfg,
                        std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_sentences(cfg.min_sentences, cfg.max_sentences);
    const int count = n_sentences(rng);
    std::string doc;
    for (int s = 0; s < count; ++s) {
        if (s > 0) doc.push_back(' ');
        doc += expand_template(pools.templates[zipf_index(rng, pools.templates.size())],
                               pools, rng);
    }
    return doc;
}

std::string attractor_doc(const Pools& pools, const CorpusGenConfig& cfg,
                          std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_repeats(cfg.attractor_min_repeats,
                                                 cfg.attractor_max_repeats);
    std::uniform_int_distribution<std::size_t> pick(0, pools.attractors.size() - 1);
    const std::string& phrase = pools.attractors[pick(rng)];
    const int repeats = n_repeats(rng);
    // A regular lead-in sentence ties the attractor phrase into contexts that
    // also occur in ordinary documents.
    std::string doc = expand_template(pools.templates[zipf_index(rng, pools.templates.size())],
                                      pools, rng);
    for (int i = 0; i < repeats; ++i) {
        doc.push_back(' ');
        doc += phrase;
    }
    return doc;
}

}  // namespace

GeneratedCorpus generate_corpus(const CorpusGenConfig& config) {
    if (config.docs_per_domain < 10) {
        throw_error(ErrorCode::InvalidParameter, "docs_per_domain must be >= 10");
    }
    if (config.attractor_fraction < 0.0 || config.attractor_fraction >= 1.0) {
        throw_error(ErrorCode::InvalidParameter, "attractor_fraction must lie in [0, 1)");
    }
    GeneratedCorpus corpus;
    std::mt19937_64 rng(config.seed);
    for (const char* const domain : kCorpusDomains) {
        const Pools pools = domain_pools(domain);
        const int total = config.docs_per_domain;
        const int attractors =
            static_cast<int>(std::lround(config.attractor_fraction * total));
        const int regular = total - attractors;
        const int holdout =
            std::max(1, static_cast<int>(std::lround(config.holdout_fraction * regular)));

        std::vector<std::string> regular_docs;
        regular_docs.reserve(static_cast<std::size_t>(regular));
        for (int i = 0; i < regular; ++i) regular_docs.push_back(regular_doc(pools, config, rng));

        auto& prompts = corpus.prompt_docs[domain];
        prompts.assign(regular_docs.end() - holdout, regular_docs.end());
        regular_docs.resize(regular_docs.size() - static_cast<std::size_t>(holdout));

        corpus.train_docs.insert(corpus.train_docs.end(), regular_docs.begin(),
                                 regular_docs.end());
        for (int i = 0; i < attractors; ++i) {
            std::string doc = attractor_doc(pools, config, rng);
            corpus.train_docs.push_back(doc);
            corpus.bias_docs.push_back(std::move(doc));
        }
    }
    return corpus;
}

void write_corpus_files(const GeneratedCorpus& corpus, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    auto write_lines = [&](const std::string& name, const std::vector<std::string>& lines) {
        const fs::path path = fs::path(dir) / name;
        std::ofstream out(path);
        if (!out) throw_error(ErrorCode::IoError, "cannot write " + path.string());
        for (const auto& line : lines) out << line << '\n';
    };
    write_lines("train.txt", corpus.train_docs);
    write_lines("bias.txt", corpus.bias_docs);
    for (const auto& [domain, docs] : corpus.prompt_docs) {
        write_lines("prompts_" + domain + ".txt", docs);
    }
}

}  // namespace macd
