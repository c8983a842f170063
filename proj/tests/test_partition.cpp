#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bfa/calculus.hpp"
#include "bfa/partition.hpp"

using namespace bfa;
using Catch::Approx;

namespace {

// chi_S as an exact +-1 valued function on n coordinates.
RealFunction character(int n, mask_t S) {
    RealFunction g(n, 0);
    for (mask_t x = 0; x < g.size(); ++x) g.num[x] = sign_parity(x, S);
    return g;
}

}  // namespace

TEST_CASE("partition construction and invariants", "[partition]") {
    Partition p(6, 2, {0, 1, 0, 1, 0, 1});
    CHECK(p.part_mask(0) == 0b010101u);
    CHECK(p.part_mask(1) == 0b101010u);
    auto c = p.intersection_counts(0b000111);
    REQUIRE(c.size() == 2);
    CHECK(c[0] == 2);
    CHECK(c[1] == 1);

    CHECK_THROWS_AS(Partition(3, 2, {0, 1}), input_error);       // wrong length
    CHECK_THROWS_AS(Partition(3, 2, {0, 1, 2}), input_error);    // label out of range
    CHECK_THROWS_AS(Partition(0, 1, {}), input_error);

    auto s = Partition::single(4);
    CHECK(s.m == 1);
    CHECK(s.part_mask(0) == 0b1111u);
}

TEST_CASE("sampled partitions are deterministic and uniform", "[partition]") {
    auto a = sample_partition(24, 2, 7);
    auto b = sample_partition(24, 2, 7);
    CHECK(a.label == b.label);
    CHECK_FALSE(sample_partition(24, 2, 8).label == a.label);

    auto one = sample_partition(4, 1, 99);
    CHECK(one.label == std::vector<int>{0, 0, 0, 0});

    // Part sizes concentrate around n/m: 5 sigma of Binomial(n, 1/m).
    int n = 10000, m = 4;
    auto big = sample_partition(n, m, 3);
    std::vector<int> size(m, 0);
    for (int v : big.label) ++size[v];
    double sigma = std::sqrt(n * (1.0 / m) * (1 - 1.0 / m));
    for (int j = 0; j < m; ++j)
        CHECK(std::fabs(size[j] - double(n) / m) <= 5 * sigma);
}

TEST_CASE("almost homogeneous certification", "[partition]") {
    // chi_{12} + chi_{34} is homogeneous of degree 2.
    auto g = character(4, 0b0011) + character(4, 0b1100);
    CHECK_NOTHROW(AlmostHomogeneous(g, Frac(1), 2));

    // Degree window (2/3, 3]: sizes 2 and 3 admitted.
    auto h = character(4, 0b0011) + character(4, 0b0111);
    CHECK_NOTHROW(AlmostHomogeneous(h, Frac(2, 3), 3));
    CHECK_THROWS_AS(AlmostHomogeneous(h, Frac(1), 3), input_error);   // |S|=2 < 3
    CHECK_THROWS_AS(AlmostHomogeneous(h, Frac(2, 3), 2), input_error);  // |S|=3 > 2

    // A constant term breaks the lower bound.
    auto with_const = add_constant(g, Dyadic(1, 2));
    CHECK_THROWS_AS(AlmostHomogeneous(with_const, Frac(1), 2), input_error);

    CHECK_THROWS_AS(AlmostHomogeneous(g, Frac(0), 2), input_error);
    CHECK_THROWS_AS(AlmostHomogeneous(g, Frac(3, 2), 2), input_error);
    CHECK_THROWS_AS(AlmostHomogeneous(g, Frac(1), 0), input_error);
}

TEST_CASE("good character set window, frozen case", "[partition]") {
    // d=4, m=2, alpha=1, eps=1/4: per-part window [5/4, 5/2] admits only
    // exactly 2 per part, and the global window forces |S| = 4.
    Partition p(8, 2, {0, 0, 0, 0, 1, 1, 1, 1});
    GoodCharacterSet G(p, 4, Frac(1), Frac(1, 4));
    CHECK(G.member(0b00110011));       // split 2-2
    CHECK_FALSE(G.member(0b00000111));  // |S|=3 fails the global window
    CHECK_FALSE(G.member(0b00001111));  // split 4-0
    CHECK_FALSE(G.member(0b00011111));  // |S|=5 > d
    CHECK_FALSE(G.member(0b01110001));  // split 1-3

    // Center of the window is always a member.
    GoodCharacterSet H(p, 4, Frac(1), Frac(1, 2));
    CHECK(H.member(0b00110101));

    // Zero intersection with a positive lower window is excluded.
    CHECK_FALSE(H.member(0b00001111));  // part 1 gets nothing, lower = 3/2 > 0

    CHECK_THROWS_AS(GoodCharacterSet(p, 4, Frac(1), Frac(1)), input_error);
    CHECK_THROWS_AS(GoodCharacterSet(p, 4, Frac(1), Frac(0)), input_error);
}

TEST_CASE("window membership is monotone in eps", "[partition]") {
    Rng rng(404);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 8 + int(rng.below(5));
        int m = 1 + int(rng.below(3));
        int d = 2 + int(rng.below(5));
        auto I = sample_partition(n, m, rng.next_u64());
        Frac e1(1 + int(rng.below(3)), 10);  // 0.1 .. 0.3
        Frac e2 = e1 + Frac(1 + int(rng.below(5)), 10);
        GoodCharacterSet narrow(I, d, Frac(1, 2), e1);
        GoodCharacterSet wide(I, d, Frac(1, 2), e2);
        for (int s = 0; s < 50; ++s) {
            mask_t S = mask_t(rng.below(mask_t{1} << n));
            if (narrow.member(S)) CHECK(wide.member(S));
        }
    }
}

TEST_CASE("good set membership matches an independent window evaluation", "[partition]") {
    Rng rng(505);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 10;
        int m = 1 + int(rng.below(4));
        int d = 1 + int(rng.below(6));
        Frac alpha(1 + int(rng.below(4)), 4);
        Frac eps(1 + int(rng.below(8)), 10);
        auto I = sample_partition(n, m, rng.next_u64());
        GoodCharacterSet G(I, d, alpha, eps);
        Frac upper = (Frac(1) + eps) * Frac(d, m);
        Frac lower = (Frac(1) - eps - eps) * alpha * upper;
        for (int s = 0; s < 60; ++s) {
            mask_t S = mask_t(rng.below(mask_t{1} << n));
            int w = popcount(S);
            bool want = (Frac(w) >= alpha * Frac(d)) && w <= d;
            for (int c : I.intersection_counts(S))
                want = want && Frac(c) >= lower && Frac(c) <= upper;
            CHECK(G.member(S) == want);
        }
    }
}

TEST_CASE("split probability experiment", "[partition]") {
    // m = 1: both events are certain.
    auto triv = split_probability_check(5, 1, Frac(1), Frac(1, 2), 500, 11);
    CHECK(triv.window_rate == 1.0L);
    CHECK(triv.split_rate == 1.0L);
    CHECK(triv.window_pass);
    CHECK(triv.split_pass);

    // d = m = 2: exact split probability is 2!/2^2 = 1/2, far above (1/16)^2.
    auto half = split_probability_check(2, 2, Frac(1), Frac(1, 2), 20000, 12);
    REQUIRE(half.split_defined);
    CHECK(half.v == 1);
    CHECK(double(half.split_rate) == Approx(0.5).margin(0.02));
    CHECK(double(half.split_bound) == Approx(1.0 / 256).epsilon(1e-10));
    CHECK(half.split_pass);

    // d=4, m=2: equal split probability C(4,2)/16 = 3/8 >= (1/(16 sqrt 2))^2.
    auto ev = split_probability_check(4, 2, Frac(1), Frac(1, 2), 20000, 13);
    CHECK(double(ev.split_rate) == Approx(0.375).margin(0.02));
    CHECK(ev.split_pass);

    // Large-d window: failure rate well under the union bound.
    auto win = split_probability_check(60, 2, Frac(1), Frac(1, 2), 100000, 14);
    CHECK(win.window_pass);
    CHECK(win.window_pass_stated);
    CHECK(double(win.union_window_bound) ==
          Approx(1 - 4 * std::exp(-2.5)).epsilon(1e-12));
    CHECK(win.window_rate > 0.99L);

    // v undefined when m does not divide d.
    auto nod = split_probability_check(5, 2, Frac(1), Frac(1, 2), 100, 15);
    CHECK_FALSE(nod.split_defined);

    CHECK_THROWS_AS(split_probability_check(0, 1, Frac(1), Frac(1, 2), 10, 1),
                    input_error);
    CHECK_THROWS_AS(split_probability_check(4, 2, Frac(1), Frac(1, 2), 0, 1),
                    input_error);
}

TEST_CASE("partition search retains a separated pair", "[partition]") {
    // g = chi_{12} padded to n = 8; a partition separating 1 and 2 keeps all mass.
    auto g = character(8, 0b11);
    AlmostHomogeneous ah(g, Frac(1), 2);
    auto res = find_good_partition(g, ah, 2, Frac(1, 2), 32, 1234);
    CHECK(res.ratio_exact_one);
    CHECK(res.ratio == 1.0L);
    CHECK(res.meets_bound);
    // The chosen partition indeed separates the two live coordinates.
    CHECK(res.partition.label[0] != res.partition.label[1]);
}

TEST_CASE("partition search with m=1 keeps everything", "[partition]") {
    auto g = character(6, 0b011) + character(6, 0b110);
    AlmostHomogeneous ah(g, Frac(1), 2);
    auto res = find_good_partition(g, ah, 1, Frac(1, 3), 4, 77);
    CHECK(res.ratio_exact_one);
    CHECK(res.meets_bound);
}

TEST_CASE("partition search in exact split mode", "[partition]") {
    // g = chi_{12} + chi_{34} on n=6, homogeneous of degree 2, v = 1.
    auto g = character(6, 0b0011) + character(6, 0b1100);
    AlmostHomogeneous ah(g, Frac(1), 2);
    auto res = find_good_partition(g, ah, 2, Frac(1, 2), 64, 5,
                                   SieveMode::exact_split);
    CHECK(res.ratio_exact_one);  // a partition separating both pairs exists
    CHECK(double(res.bound) == Approx(1.0 / 256).epsilon(1e-10));  // (1/(16 sqrt 1))^2
    CHECK(res.meets_bound);

    // Degree not divisible by m.
    auto h3 = character(6, 0b0111);
    AlmostHomogeneous ah3(h3, Frac(1), 3);
    CHECK_THROWS_AS(
        find_good_partition(h3, ah3, 2, Frac(1, 2), 4, 5, SieveMode::exact_split),
        input_error);

    // Almost- but not exactly-homogeneous input is rejected in this mode.
    auto mixed = character(6, 0b0011) + character(6, 0b0001);
    AlmostHomogeneous ahm(mixed, Frac(1, 2), 2);
    CHECK_THROWS_AS(
        find_good_partition(mixed, ahm, 2, Frac(1, 2), 4, 5, SieveMode::exact_split),
        input_error);
}

TEST_CASE("partition search ratio is within [0,1] and improves with attempts", "[partition]") {
    Rng rng(8811);
    // Random degree-2 homogeneous functions: sieved ratio is a valid fraction.
    for (int trial = 0; trial < 6; ++trial) {
        int n = 8;
        RealFunction g(n, 2);
        for (int reps = 0; reps < 5; ++reps) {
            mask_t S = first_of_weight(2);
            for (std::uint64_t skip = rng.below(binomial(n, 2)); skip > 0; --skip)
                S = next_of_weight(S, n);
            g = g + character(n, S);
        }
        if (spectrum(g).mass() == Dyadic(0, 0)) continue;
        AlmostHomogeneous ah(g, Frac(1), 2);
        auto one = find_good_partition(g, ah, 2, Frac(1, 2), 1, trial);
        auto many = find_good_partition(g, ah, 2, Frac(1, 2), 24, trial);
        CHECK(one.ratio >= 0.0L);
        CHECK(one.ratio <= 1.0L);
        CHECK(many.ratio >= one.ratio);
    }
}
