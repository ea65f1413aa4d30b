#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "macd/sampling.hpp"
#include "test_helpers.hpp"

using namespace macd;
using test::dist_of;

TEST_CASE("unit draws stay in [0, 1) and reproduce per seed") {
    SampleRng a(42), b(42), c(43);
    bool diverged = false;
    for (int i = 0; i < 1000; ++i) {
        const double u = a.next_unit();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.next_unit());
        if (u != c.next_unit()) diverged = true;
    }
    CHECK(diverged);
}

TEST_CASE("greedy argmax breaks ties toward the lower id") {
    CHECK(greedy_argmax(dist_of({0.1, 0.6, 0.3})) == 1);
    CHECK(greedy_argmax(dist_of({0.3, 0.3, 0.3, 0.1})) == 0);
    CHECK(greedy_argmax(uniform_dist(7)) == 0);
}

TEST_CASE("top-k with k = 1 is greedy regardless of the rng state") {
    const auto dist = dist_of({0.2, 0.5, 0.3});
    SampleRng rng(123);
    for (int i = 0; i < 50; ++i) CHECK(topk_sample(dist, 1, rng) == 1);
}

TEST_CASE("top-k draws stay inside the k-token support") {
    const auto dist = dist_of({0.05, 0.4, 0.35, 0.1, 0.1});
    SampleRng rng(7);
    for (int i = 0; i < 500; ++i) {
        const TokenId t = topk_sample(dist, 2, rng);
        CHECK((t == 1 || t == 2));
    }
}

TEST_CASE("equal seeds give bitwise-equal sampling runs") {
    const auto dist = dist_of({0.25, 0.25, 0.3, 0.2});
    SampleRng r1(99), r2(99);
    for (int i = 0; i < 200; ++i) CHECK(topk_sample(dist, 3, r1) == topk_sample(dist, 3, r2));
}

TEST_CASE("nucleus keeps the smallest prefix reaching p") {
    // sorted mass 0.6, 0.3, 0.1: prefix {0} has 0.6 < 0.7, {0,1} has 0.9 >= 0.7
    const auto dist = dist_of({0.6, 0.3, 0.1});
    SampleRng rng(11);
    std::set<TokenId> seen;
    for (int i = 0; i < 800; ++i) seen.insert(nucleus_sample(dist, 0.7, rng));
    CHECK(seen == std::set<TokenId>{0, 1});
}

TEST_CASE("nucleus with p = 1 spans all finite tokens but never -inf ones") {
    const auto dist = dist_of({0.5, 0.0, 0.3, 0.2});
    SampleRng rng(5);
    std::set<TokenId> seen;
    for (int i = 0; i < 2000; ++i) seen.insert(nucleus_sample(dist, 1.0, rng));
    CHECK(seen == std::set<TokenId>{0, 2, 3});
}

TEST_CASE("nucleus rejects p outside (0, 1]") {
    SampleRng rng(1);
    CHECK_THROWS_AS(nucleus_sample(uniform_dist(3), 0.0, rng), Error);
    CHECK_THROWS_AS(nucleus_sample(uniform_dist(3), 1.5, rng), Error);
    CHECK_THROWS_AS(nucleus_sample(uniform_dist(3), -0.2, rng), Error);
}

TEST_CASE("typical sampling keeps surprisals nearest the entropy") {
    // probs 0.5, 0.25, 0.25: H = 1.5 ln 2. |surprisal - H| is 0.5 ln 2 for all
    // three tokens, so the tie-break orders them 0, 1, 2; token 0 alone already
    // carries mass 0.5 >= tau = 0.4.
    const auto dist = dist_of({0.5, 0.25, 0.25});
    SampleRng rng(3);
    for (int i = 0; i < 300; ++i) CHECK(typical_sample(dist, 0.4, rng) == 0);
}

TEST_CASE("typical sampling covers the full support at tau = 1") {
    const auto dist = dist_of({0.5, 0.25, 0.25});
    SampleRng rng(17);
    std::set<TokenId> seen;
    for (int i = 0; i < 2000; ++i) seen.insert(typical_sample(dist, 1.0, rng));
    CHECK(seen == std::set<TokenId>{0, 1, 2});
}

TEST_CASE("typical rejects tau outside (0, 1]") {
    SampleRng rng(1);
    CHECK_THROWS_AS(typical_sample(uniform_dist(3), 0.0, rng), Error);
    CHECK_THROWS_AS(typical_sample(uniform_dist(3), 1.0001, rng), Error);
}

TEST_CASE("top-k rejects k < 1") {
    SampleRng rng(1);
    CHECK_THROWS_AS(topk_sample(uniform_dist(3), 0, rng), Error);
}
