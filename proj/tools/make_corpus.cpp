#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "macd/corpus_gen.hpp"
#include "macd/types.hpp"

int main(int argc, char** argv) {
    CLI::App app{"deterministic synthetic corpus generator"};
    macd::CorpusGenConfig config;
    std::string out_dir = "corpus";
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", config.seed, "generator seed");
    app.add_option("--docs-per-domain", config.docs_per_domain, "documents per domain");
    app.add_option("--attractor-frac", config.attractor_fraction,
                   "fraction of repeated-phrase documents");
    app.add_option("--holdout-frac", config.holdout_fraction,
                   "regular docs held out as prompt sources");
    CLI11_PARSE(app, argc, argv);

    try {
        const macd::GeneratedCorpus corpus = macd::generate_corpus(config);
        macd::write_corpus_files(corpus, out_dir);
        std::cout << "train_docs=" << corpus.train_docs.size()
                  << " bias_docs=" << corpus.bias_docs.size() << "\n";
    } catch (const macd::Error& e) {
        std::cerr << "macd error: code=" << e.code_name() << " message=" << e.what() << "\n";
        return 1;
    }
    return 0;
}
