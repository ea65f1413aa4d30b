#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "macd/logprob.hpp"

using namespace macd;

TEST_CASE("logsumexp of a normalized distribution is zero") {
    const LogProbDistribution d = uniform_dist(7);
    CHECK(std::fabs(logsumexp(d.logp)) < 1e-12);
    CHECK(is_normalized(d));
}

TEST_CASE("logsumexp handles all -inf input") {
    const std::vector<double> all_zero(4, -std::numeric_limits<double>::infinity());
    CHECK(std::isinf(logsumexp(all_zero)));
    CHECK(logsumexp(all_zero) < 0);
}

TEST_CASE("dist_from_weights matches hand logs") {
    const LogProbDistribution d = dist_from_weights(std::vector<double>{1.0, 3.0});
    CHECK(d[0] == doctest::Approx(std::log(0.25)).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(std::log(0.75)).epsilon(1e-12));
}

TEST_CASE("renormalize fixes a shifted distribution") {
    LogProbDistribution d = uniform_dist(5);
    for (double& v : d.logp) v += 3.7;
    CHECK_FALSE(is_normalized(d));
    CHECK(is_normalized(renormalize(d)));
}

TEST_CASE("temperature 1 is the exact identity") {
    LogProbDistribution d = dist_from_weights(std::vector<double>{0.5, 0.2, 0.3});
    const LogProbDistribution out = apply_temperature(d, 1.0);
    REQUIRE(out.size() == d.size());
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(out[i] == d[i]);
}

TEST_CASE("temperature below 1 sharpens and stays normalized") {
    const LogProbDistribution d = dist_from_weights(std::vector<double>{0.6, 0.3, 0.1});
    const LogProbDistribution sharp = apply_temperature(d, 0.5);
    CHECK(is_normalized(sharp));
    // mass concentrates on the argmax
    CHECK(sharp[0] > d[0]);
    CHECK(sharp[2] < d[2]);
}

TEST_CASE("temperature preserves -inf entries") {
    LogProbDistribution d = dist_from_weights(std::vector<double>{0.7, 0.3});
    d.logp.push_back(-std::numeric_limits<double>::infinity());
    const LogProbDistribution out = apply_temperature(renormalize(d), 0.25);
    CHECK(std::isinf(out[2]));
    CHECK(is_normalized(out));
}

TEST_CASE("non-positive temperature is rejected") {
    const LogProbDistribution d = uniform_dist(3);
    CHECK_THROWS_AS(apply_temperature(d, 0.0), Error);
    CHECK_THROWS_AS(apply_temperature(d, -1.0), Error);
    try {
        apply_temperature(d, 0.0);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositiveTemperature);
    }
}

TEST_CASE("floor_logp clamps only below the floor") {
    CHECK(floor_logp(-1.5) == -1.5);
    CHECK(floor_logp(-31.0) == kDefaultLogpFloor);
    CHECK(floor_logp(-std::numeric_limits<double>::infinity()) == kDefaultLogpFloor);
    CHECK(floor_logp(-5.0, -4.0) == -4.0);
}

TEST_CASE("random distributions stay normalized under random temperatures") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> weight(0.01, 5.0);
    std::uniform_real_distribution<double> temp(0.2, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<double> w(1 + trial % 19);
        for (double& x : w) x = weight(rng);
        const LogProbDistribution d = dist_from_weights(w);
        CHECK(is_normalized(d));
        CHECK(is_normalized(apply_temperature(d, temp(rng))));
    }
}
