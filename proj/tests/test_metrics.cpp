#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "macd/metrics.hpp"
#include "macd/ngram_model.hpp"
#include "macd/timing.hpp"
#include "test_helpers.hpp"

using namespace macd;
using test::dist_of;
using test::make_table;
using test::make_vocab;

TEST_CASE("distinct_n hand fixtures") {
    const TokenSequence aaaa = {3, 3, 3, 3};
    CHECK(distinct_n(aaaa, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    const TokenSequence abab = {3, 4, 3, 4};
    CHECK(distinct_n(abab, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // too short for any n-gram: vacuously fully diverse
    CHECK(distinct_n(TokenSequence{3}, 2) == 1.0);
    CHECK(distinct_n(TokenSequence{}, 1) == 1.0);
    CHECK(distinct_n(TokenSequence{3, 4, 5}, 4) == 1.0);

    CHECK_THROWS_AS(distinct_n(aaaa, 0), Error);
}

TEST_CASE("diversity is the product of distinct 2-, 3-, and 4-gram ratios") {
    const TokenSequence aaaaa = {3, 3, 3, 3, 3};
    // 1/4 * 1/3 * 1/2
    CHECK(diversity(aaaaa) == doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    CHECK(diversity(TokenSequence{3}) == 1.0);
}

TEST_CASE("repetition_rate hand fixtures") {
    const TokenSequence aaaaa = {3, 3, 3, 3, 3};
    CHECK(repetition_rate(aaaaa, 1) == doctest::Approx(0.8).epsilon(1e-12));

    const TokenSequence abcabc = {3, 4, 5, 3, 4, 5};
    CHECK(repetition_rate(abcabc, 3) == doctest::Approx(0.25).epsilon(1e-12));

    TokenSequence abcd8;
    for (int i = 0; i < 8; ++i) abcd8.insert(abcd8.end(), {3, 4, 5, 6});
    CHECK(repetition_rate(abcd8, 4) >= 0.75);

    CHECK(repetition_rate(TokenSequence{3, 4}, 4) == 0.0);  // too short
    CHECK_THROWS_AS(repetition_rate(aaaaa, 0), Error);
    CHECK_THROWS_AS(repetition_rate(aaaaa, 2, -1), Error);
}

TEST_CASE("repetition window limits how far back a match may sit") {
    const TokenSequence seq = {3, 4, 5, 5, 5, 3, 4};
    // bigrams: (3,4) (4,5) (5,5) (5,5) (5,3) (3,4)
    CHECK(repetition_rate(seq, 2, 0) == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
    // window 2: the (5,5) repeat at distance 1 counts, the (3,4) at distance 5 does not
    CHECK(repetition_rate(seq, 2, 2) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("sequence metrics are invariant under token relabeling") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 20; ++trial) {
        TokenSequence seq(40);
        for (auto& t : seq) t = static_cast<TokenId>(rng() % 6);
        std::vector<TokenId> perm(6);
        std::iota(perm.begin(), perm.end(), TokenId{0});
        std::shuffle(perm.begin(), perm.end(), rng);
        TokenSequence relabeled;
        for (TokenId t : seq) relabeled.push_back(perm[t]);

        for (int n = 1; n <= 4; ++n) {
            CHECK(distinct_n(seq, n) == distinct_n(relabeled, n));
            CHECK(repetition_rate(seq, n, 0) == repetition_rate(relabeled, n, 0));
            CHECK(repetition_rate(seq, n, 3) == repetition_rate(relabeled, n, 3));
        }
        CHECK(diversity(seq) == diversity(relabeled));
    }
}

TEST_CASE("diversity never exceeds any of its factors") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        TokenSequence seq(10 + rng() % 30);
        for (auto& t : seq) t = static_cast<TokenId>(rng() % 5);
        const double d = diversity(seq);
        CHECK(d <= distinct_n(seq, 2) + 1e-15);
        CHECK(d <= distinct_n(seq, 3) + 1e-15);
        CHECK(d <= distinct_n(seq, 4) + 1e-15);
    }
}

TEST_CASE("a uniform model scores exactly ln V per token") {
    auto vocab = make_vocab(8);
    auto expert = make_table(vocab, 1, uniform_dist(8));
    const TokenSequence seq = {3, 4, 5, 6, 7, 3};
    CHECK(std::fabs(expert_nll_per_token(*expert, seq) - std::log(8.0)) <= 1e-12);
}

TEST_CASE("a deterministic chain has zero nll") {
    auto vocab = make_vocab(5);
    auto expert = make_table(vocab, 1, uniform_dist(5));
    expert->set({3}, dist_of({0.0, 0.0, 0.0, 0.0, 1.0}));
    expert->set({4}, dist_of({0.0, 0.0, 0.0, 1.0, 0.0}));
    const TokenSequence seq = {3, 4, 3, 4};
    CHECK(expert_nll_per_token(*expert, seq) == 0.0);
}

TEST_CASE("nll follows the hand-summed table path") {
    auto vocab = make_vocab(6);
    auto expert = make_table(vocab, 1, uniform_dist(6));
    expert->set({3}, dist_of({0.05, 0.05, 0.05, 0.05, 0.7, 0.1}));
    expert->set({4}, dist_of({0.2, 0.2, 0.2, 0.1, 0.1, 0.2}));
    const TokenSequence seq = {3, 4, 5};
    const double want = -(std::log(0.7) + std::log(0.2)) / 2.0;
    CHECK(expert_nll_per_token(*expert, seq) == doctest::Approx(want).epsilon(1e-12));

    // the same continuation scored explicitly against its prompt
    const TokenSequence prompt = {3};
    const TokenSequence cont = {4, 5};
    CHECK(continuation_nll(*expert, prompt, cont) ==
          doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("nll input validation") {
    auto vocab = make_vocab(5);
    auto expert = make_table(vocab, 1, uniform_dist(5));
    CHECK_THROWS_AS(expert_nll_per_token(*expert, TokenSequence{3}), Error);
    CHECK_THROWS_AS(continuation_nll(*expert, TokenSequence{}, TokenSequence{3}), Error);
    CHECK_THROWS_AS(continuation_nll(*expert, TokenSequence{3}, TokenSequence{}), Error);
    CHECK_THROWS_AS(
        continuation_nll(*expert, TokenSequence{3}, TokenSequence{99}), Error);
}

TEST_CASE("compute_metrics bundles the individual metrics") {
    auto vocab = make_vocab(6);
    auto expert = make_table(vocab, 1, uniform_dist(6));
    const TokenSequence prompt = {3};
    const TokenSequence cont = {4, 5, 4, 5, 4, 5, 4, 5};
    const MetricsReport r = compute_metrics(*expert, prompt, cont);
    CHECK(r.distinct2 == distinct_n(cont, 2));
    CHECK(r.distinct3 == distinct_n(cont, 3));
    CHECK(r.distinct4 == distinct_n(cont, 4));
    CHECK(r.diversity == r.distinct2 * r.distinct3 * r.distinct4);
    CHECK(r.repetition == repetition_rate(cont, 4, 0));
    CHECK(r.nll == continuation_nll(*expert, prompt, cont));
}

TEST_CASE("time_decode validates its inputs") {
    auto vocab = make_vocab(5);
    auto expert = make_table(vocab, 1, uniform_dist(5));
    DecodeConfig cfg;
    cfg.strategy = greedy_strategy();
    cfg.max_new_tokens = 4;
    const std::vector<TokenSequence> prompts = {{3}, {4}};

    CHECK_THROWS_AS(time_decode(*expert, nullptr, prompts, cfg, 0), Error);
    CHECK_THROWS_AS(
        time_decode(*expert, nullptr, std::vector<TokenSequence>{}, cfg, 1), Error);
    cfg.max_new_tokens = 0;
    CHECK_THROWS_AS(time_decode(*expert, nullptr, prompts, cfg, 1), Error);
}

TEST_CASE("time_decode aggregates wall time over prompts and repetitions") {
    auto vocab = make_vocab(5);
    auto expert = make_table(vocab, 1, uniform_dist(5));
    DecodeConfig cfg;
    cfg.strategy = greedy_strategy();
    cfg.max_new_tokens = 8;
    const std::vector<TokenSequence> prompts = {{3}, {4}, {3, 4}};

    const TimingSummary s = time_decode(*expert, nullptr, prompts, cfg, 2);
    CHECK(s.prompts == 3);
    CHECK(s.repetitions == 2);
    CHECK(s.mean_ms > 0.0);
    CHECK(s.stddev_ms >= 0.0);
    // total = mean * (prompts * repetitions), in seconds
    CHECK(s.total_seconds == doctest::Approx(s.mean_ms * 6.0 / 1000.0).epsilon(1e-9));
    CHECK(s.amateur_eval_ms == 0.0);  // greedy never consults amateurs
}

TEST_CASE("amateur evaluation time grows with the member count") {
    // n-gram amateurs give each member measurable per-step work
    const std::string corpus =
        "the quick brown fox jumps over the lazy dog\n"
        "the slow green frog hops over the muddy log\n"
        "a quick red fox runs past the sleepy dog\n"
        "the lazy dog naps while the quick fox waits\n";
    auto vocab = std::make_shared<Vocabulary>(build_vocab(corpus));
    std::vector<TokenSequence> docs;
    docs.push_back(tokenize("the quick brown fox jumps over the lazy dog", *vocab));
    docs.push_back(tokenize("the slow green frog hops over the muddy log", *vocab));
    docs.push_back(tokenize("a quick red fox runs past the sleepy dog", *vocab));
    docs.push_back(tokenize("the lazy dog naps while the quick fox waits", *vocab));

    auto expert = std::make_shared<NGramModel>(
        train_ngram(vocab, docs, 3, SmoothingSpec::additive(0.1)));
    auto amateur = std::make_shared<NGramModel>(
        train_ngram(vocab, docs, 2, SmoothingSpec::additive(0.1)));

    auto ensemble_of = [&](std::size_t k) {
        std::vector<EnsembleMember> members;
        for (std::size_t i = 0; i < k; ++i) members.push_back({amateur, 0.5, "a"});
        return AmateurEnsemble(std::move(members));
    };
    const AmateurEnsemble e1 = ensemble_of(1);
    const AmateurEnsemble e4 = ensemble_of(4);

    DecodeConfig cfg;
    cfg.strategy = macd_mean_strategy(0.1, FilterSpec::topk(5));
    cfg.max_new_tokens = 32;
    const std::vector<TokenSequence> prompts = {tokenize("the quick", *vocab),
                                                tokenize("the lazy", *vocab)};

    auto median_amateur_ms = [&](const AmateurEnsemble& ens) {
        std::vector<double> runs;
        for (int i = 0; i < 5; ++i) {
            runs.push_back(time_decode(*expert, &ens, prompts, cfg, 1).amateur_eval_ms);
        }
        std::sort(runs.begin(), runs.end());
        return runs[2];
    };

    const double ms1 = median_amateur_ms(e1);
    const double ms4 = median_amateur_ms(e4);
    CHECK(ms1 > 0.0);
    CHECK(ms4 > ms1);  // four sequential evaluations cost more than one
}
