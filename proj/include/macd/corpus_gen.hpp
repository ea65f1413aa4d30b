#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace macd {

/// Knobs for the synthetic reference corpus. Attractor documents repeat a
/// short phrase many times; they give a count-based expert strong loop
/// attractors that greedy argmax falls into, while staying rare enough that
/// a contrastive penalty can steer around them.
struct CorpusGenConfig {
    std::uint64_t seed = 2026;
    int docs_per_domain = 1400;
    double attractor_fraction = 0.12;  // share of docs that are attractors
    int min_sentences = 3;
    int max_sentences = 8;
    int attractor_min_repeats = 8;
    int attractor_max_repeats = 16;
    double holdout_fraction = 0.10;  // regular docs reserved as prompt sources
};

/// One document per line; tokens are lowercase words separated by spaces.
struct GeneratedCorpus {
    std::vector<std::string> train_docs;  // all domains, attractors included
    std::map<std::string, std::vector<std::string>> prompt_docs;  // domain -> held-out docs
    std::vector<std::string> bias_docs;  // the attractor documents alone
};

extern const char* const kCorpusDomains[3];  // news, wiki, story

GeneratedCorpus generate_corpus(const CorpusGenConfig& config);

/// Writes train.txt, bias.txt, and prompts_<domain>.txt under dir.
void write_corpus_files(const GeneratedCorpus& corpus, const std::string& dir);

}  // namespace macd
