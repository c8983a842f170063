#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "bfa/bits.hpp"

using namespace bfa;

TEST_CASE("mask helpers") {
    CHECK(full_mask(3) == 0b111u);
    CHECK(full_mask(1) == 0b1u);
    CHECK(popcount(0b1011u) == 3);
    CHECK(sign_parity(0b101u, 0b100u) == -1);
    CHECK(sign_parity(0b101u, 0b010u) == 1);
    CHECK(is_subset(0b101u, 0b111u));
    CHECK_FALSE(is_subset(0b101u, 0b011u));
}

TEST_CASE("submask enumeration covers the lattice exactly once") {
    std::set<mask_t> seen;
    for_each_submask(0b1101u, [&](mask_t s) { seen.insert(s); });
    CHECK(seen.size() == 8);
    for (mask_t s : seen) CHECK(is_subset(s, 0b1101u));
}

TEST_CASE("fixed-weight enumeration matches binomial counts") {
    for (int n = 1; n <= 10; ++n) {
        for (int k = 0; k <= n; ++k) {
            long long count = 0;
            mask_t prev = 0;
            bool first = true;
            for_each_of_weight(n, k, [&](mask_t m) {
                CHECK(popcount(m) == k);
                CHECK((m & ~full_mask(n)) == 0);
                if (!first) CHECK(m > prev);  // ascending
                prev = m;
                first = false;
                ++count;
            });
            CHECK(count == binomial(n, k));
        }
    }
}

TEST_CASE("bit deposit and extract invert each other") {
    mask_t positions = 0b101100u;
    for (mask_t compact = 0; compact < 8; ++compact) {
        mask_t wide = deposit_bits(compact, positions);
        CHECK(is_subset(wide, positions));
        CHECK(extract_bits(wide, positions) == compact);
    }
    CHECK(deposit_bits(0b11u, 0b1010u) == 0b1010u);
    CHECK(extract_bits(0b1000u, 0b1010u) == 0b10u);
}

TEST_CASE("mask formatting is one-based") {
    CHECK(mask_to_string(0) == "{}");
    CHECK(mask_to_string(0b101u) == "{1,3}");
}

TEST_CASE("binomial oracle values") {
    CHECK(binomial(8, 4) == 70);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(5, 6) == 0);
}
