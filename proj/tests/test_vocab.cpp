#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "macd/vocab.hpp"

using namespace macd;

TEST_CASE("build_vocab orders by frequency then lexicographically") {
    const Vocabulary v = build_vocab("b a a c c c\na b c");
    // c:4, a:3, b:2 after the three specials
    CHECK(v.size() == 6);
    CHECK(v.token(0) == kUnkToken);
    CHECK(v.token(1) == kBosToken);
    CHECK(v.token(2) == kEosToken);
    CHECK(v.token(3) == "c");
    CHECK(v.token(4) == "a");
    CHECK(v.token(5) == "b");
}

TEST_CASE("equal frequencies break ties lexicographically") {
    const Vocabulary v = build_vocab("beta alpha gamma");
    CHECK(v.token(3) == "alpha");
    CHECK(v.token(4) == "beta");
    CHECK(v.token(5) == "gamma");
}

TEST_CASE("min_count filters rare words") {
    const Vocabulary v = build_vocab("a a a b b c", 2);
    CHECK(v.contains("a"));
    CHECK(v.contains("b"));
    CHECK_FALSE(v.contains("c"));
}

TEST_CASE("tokenize lowercases and maps unknown words to unk") {
    const Vocabulary v = build_vocab("alpha beta");
    const TokenSequence ids = tokenize("Alpha GAMMA beta", v);
    REQUIRE(ids.size() == 3);
    CHECK(ids[0] == v.id_of("alpha"));
    CHECK(ids[1] == v.unk());
    CHECK(ids[2] == v.id_of("beta"));
}

TEST_CASE("detokenize inverts tokenize for in-vocabulary text") {
    const Vocabulary v = build_vocab("one two three");
    const std::string text = "two three one one";
    CHECK(detokenize(tokenize(text, v), v) == text);
}

TEST_CASE("empty corpus is rejected") {
    CHECK_THROWS_AS(build_vocab("   \n  \n"), Error);
    try {
        build_vocab("");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyCorpus);
    }
}

TEST_CASE("fingerprint tracks content") {
    const Vocabulary a = build_vocab("x y z");
    const Vocabulary b = build_vocab("x y z");
    const Vocabulary c = build_vocab("x y w");
    CHECK(a.fingerprint() == b.fingerprint());
    CHECK(a.fingerprint() != c.fingerprint());
}

TEST_CASE("duplicate tokens are rejected") {
    CHECK_THROWS_AS(Vocabulary({"a", "b", "a"}, 0, 1, 2), Error);
}

TEST_CASE("special ids must be distinct and in range") {
    CHECK_THROWS_AS(Vocabulary({"a", "b", "c"}, 0, 0, 2), Error);
    CHECK_THROWS_AS(Vocabulary({"a", "b", "c"}, 0, 1, 9), Error);
}

TEST_CASE("special literals in the corpus are not duplicated") {
    const Vocabulary v = build_vocab("a <unk> b <eos>");
    CHECK(v.id_of(kUnkToken) == v.unk());
    CHECK(v.id_of(kEosToken) == v.eos());
    CHECK(v.size() == 5);  // specials + a + b
}
