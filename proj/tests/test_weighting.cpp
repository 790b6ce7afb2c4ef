#include <doctest.h>

#include <cmath>
#include <random>

#include "callcost/weighting.hpp"
#include "helpers.hpp"

using namespace callcost;
using testutil::rel_close;

namespace {

// 53-bit uniform draw in [0, 1); bit-stable across platforms.
double u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

TEST_SUITE("weighting") {

TEST_CASE("tfidf: a word in every document collapses to exactly ln 2") {
    // tf = 1 makes the tf factor 1; df = d makes d/df exactly 1.0, so the
    // idf factor is log(2.0) to the last bit.
    for (std::uint64_t d : {std::uint64_t{1}, std::uint64_t{7}, std::uint64_t{4573}})
        CHECK(tfidf_weight(1, static_cast<std::uint32_t>(d), d) == std::log(2.0));
}

TEST_CASE("tfidf: matches independently computed reference values") {
    CHECK(rel_close(tfidf_weight(7, 3, 4573), 21.593427843406148, 1e-14));
    CHECK(rel_close(tfidf_weight(2, 3, 4573), 12.410715066585441, 1e-14));
    CHECK(rel_close(tfidf_weight(4, 3, 4573), 17.491461888779358, 1e-14));
}

TEST_CASE("tfidf: out-of-domain inputs are rejected") {
    CHECK_THROWS_AS(tfidf_weight(0, 3, 10), DomainError);
    CHECK_THROWS_AS(tfidf_weight(3, 0, 10), DomainError);
    CHECK_THROWS_AS(tfidf_weight(3, 11, 10), DomainError);
}

TEST_CASE("tfidf: increases with tf, decreases with df") {
    for (std::uint32_t tf = 1; tf < 40; ++tf)
        CHECK(tfidf_weight(tf + 1, 5, 1000) > tfidf_weight(tf, 5, 1000));
    for (std::uint32_t df = 1; df < 40; ++df)
        CHECK(tfidf_weight(3, df + 1, 1000) < tfidf_weight(3, df, 1000));
}

TEST_CASE("bm25: a neutral document collapses to exactly the idf factor") {
    // With tf = 1 and dl = avdl the saturation fraction is (k1+1)/(k1+1):
    // dl/avdl is exactly 1.0, (1-b)+b reassembles exactly 1.0 for any b in
    // [0, 1], so the weight equals log(1 + d/df) bit for bit.
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const Bm25Params params{0.5 + 3.0 * u01(rng), u01(rng)};
        const std::uint64_t d = 1 + (rng() % 10000);
        const std::uint32_t df = 1 + static_cast<std::uint32_t>(rng() % d);
        const double dl = 1.0 + 500.0 * u01(rng);
        const double expected = std::log(1.0 + static_cast<double>(d) / static_cast<double>(df));
        CHECK(bm25_weight(1, df, d, dl, dl, params) == expected);
    }
}

TEST_CASE("bm25: df equal to d gives exactly ln 2 for a neutral document") {
    CHECK(bm25_weight(1, 4573, 4573, 100.0, 100.0, Bm25Params{}) == std::log(2.0));
}

TEST_CASE("bm25: matches independently computed reference values") {
    const Bm25Params params{1.2, 0.2};
    CHECK(rel_close(bm25_weight(7, 3, 4573, 120.0, 100.0, params), 13.685925189576803, 1e-14));
    CHECK(rel_close(bm25_weight(2, 3, 4573, 80.0, 100.0, params), 10.232189173642991, 1e-14));
    CHECK(rel_close(bm25_weight(4, 3, 4573, 100.0, 100.0, params), 12.404561644354887, 1e-14));
}

TEST_CASE("bm25: out-of-domain inputs are rejected") {
    const Bm25Params ok{1.2, 0.2};
    CHECK_THROWS_AS(bm25_weight(0, 3, 10, 5.0, 5.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 0, 10, 5.0, 5.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 11, 10, 5.0, 5.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 0.0, 5.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, -2.0, 5.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 5.0, 0.0, ok), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 5.0, 5.0, Bm25Params{0.0, 0.2}), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 5.0, 5.0, Bm25Params{-1.0, 0.2}), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 5.0, 5.0, Bm25Params{1.2, -0.1}), DomainError);
    CHECK_THROWS_AS(bm25_weight(1, 3, 10, 5.0, 5.0, Bm25Params{1.2, 1.1}), DomainError);
}

TEST_CASE("bm25: longer documents weigh less, higher tf weighs more") {
    const Bm25Params params{1.2, 0.2};
    for (double dl = 10.0; dl < 300.0; dl += 10.0)
        CHECK(bm25_weight(3, 5, 1000, dl + 10.0, 100.0, params) <
              bm25_weight(3, 5, 1000, dl, 100.0, params));
    for (std::uint32_t tf = 1; tf < 40; ++tf)
        CHECK(bm25_weight(tf + 1, 5, 1000, 120.0, 100.0, params) >
              bm25_weight(tf, 5, 1000, 120.0, 100.0, params));
}

TEST_CASE("modified bm25: stays within rounding error of plain bm25") {
    const Bm25Params params{1.2, 0.2};
    CHECK(rel_close(bm25_modified_weight(7, 3, 4573, 120.0, 100.0, params, 100.0),
                    13.685925189576803, 1e-9));

    const double pads[] = {100.0, 1.0, -5.0, 3.7, 1e-3, 1e8};
    std::mt19937_64 rng(77);
    for (int i = 0; i < 10000; ++i) {
        const std::uint64_t d = 1 + (rng() % 100000);
        const std::uint32_t df = 1 + static_cast<std::uint32_t>(rng() % d);
        const std::uint32_t tf = 1 + static_cast<std::uint32_t>(rng() % 50);
        const double avdl = 1.0 + 400.0 * u01(rng);
        const double dl = 1.0 + 400.0 * u01(rng);
        const Bm25Params p{0.1 + 4.0 * u01(rng), u01(rng)};
        const double pad = pads[rng() % std::size(pads)];
        const double plain = bm25_weight(tf, df, d, dl, avdl, p);
        const double padded = bm25_modified_weight(tf, df, d, dl, avdl, p, pad);
        CHECK(rel_close(padded, plain, 1e-9));
    }
}

TEST_CASE("modified bm25: zero pad is rejected") {
    CHECK_THROWS_AS(bm25_modified_weight(1, 3, 10, 5.0, 5.0, Bm25Params{}, 0.0), DomainError);
}

TEST_CASE("weights are pure: identical inputs give identical bits") {
    const Bm25Params params{1.37, 0.61};
    for (int i = 0; i < 50; ++i) {
        const auto tf = static_cast<std::uint32_t>(1 + i);
        CHECK(tfidf_weight(tf, 7, 900) == tfidf_weight(tf, 7, 900));
        CHECK(bm25_weight(tf, 7, 900, 55.0, 48.0, params) ==
              bm25_weight(tf, 7, 900, 55.0, 48.0, params));
        CHECK(bm25_modified_weight(tf, 7, 900, 55.0, 48.0, params, 100.0) ==
              bm25_modified_weight(tf, 7, 900, 55.0, 48.0, params, 100.0));
    }
}

}  // TEST_SUITE
