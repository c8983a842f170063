#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bfa/measures.hpp"
#include "bfa/rng.hpp"

using namespace bfa;
using Catch::Approx;

namespace {

BooleanFunction maj3() {
    return BooleanFunction(3, {0, 0, 0, 1, 0, 1, 1, 1});
}

BooleanFunction parity(int n) {
    return BooleanFunction::from_predicate(n, [](mask_t x) { return popcount(x) & 1; });
}

const long double kLn2 = 0.6931471805599453094L;

}  // namespace

TEST_CASE("majority influence profile", "[measures]") {
    auto p = influence_profile(maj3());
    REQUIRE(p.n == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(p.coordinate[i] == Dyadic(1, 3));         // 1/8
        CHECK(p.flip_probability[i] == Dyadic(1, 1));   // pivotal iff other two differ
    }
    CHECK(p.total == Dyadic(3, 3));
    CHECK(p.flip_total == Dyadic(3, 1));
    CHECK(p.variance == Dyadic(1, 2));
    REQUIRE(p.normalized_defined);
    CHECK(double(p.normalized) == Approx(1.5).margin(1e-15));
}

TEST_CASE("dictator and parity influence profiles", "[measures]") {
    BooleanFunction dict = BooleanFunction::from_predicate(5, [](mask_t x) { return x & 1; });
    auto p = influence_profile(dict);
    CHECK(p.coordinate[0] == Dyadic(1, 2));
    CHECK(p.flip_probability[0] == Dyadic(1, 0));
    for (int i = 1; i < 5; ++i) CHECK(p.coordinate[i] == Dyadic(0, 0));
    CHECK(p.total == Dyadic(1, 2));
    CHECK(double(p.normalized) == Approx(1.0).margin(1e-15));

    auto q = influence_profile(parity(4));
    for (int i = 0; i < 4; ++i) {
        CHECK(q.coordinate[i] == Dyadic(1, 2));
        CHECK(q.flip_probability[i] == Dyadic(1, 0));
    }
    CHECK(q.total == Dyadic(1, 0));
    CHECK(double(q.normalized) == Approx(4.0).margin(1e-15));
}

TEST_CASE("constant function has no influence and no normalized form", "[measures]") {
    BooleanFunction one = BooleanFunction::from_predicate(3, [](mask_t) { return true; });
    auto p = influence_profile(one);
    CHECK(p.total == Dyadic(0, 0));
    CHECK(p.variance == Dyadic(0, 0));
    CHECK_FALSE(p.normalized_defined);
}

TEST_CASE("total influence equals the degree-weighted spectral mass", "[measures]") {
    Rng rng(881);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + int(rng.below(5));
        auto f = BooleanFunction::random(n, rng.derive(trial));
        auto p = influence_profile(f);
        auto s = spectrum(f);
        int128 acc = 0;
        for (mask_t m = 0; m < s.size(); ++m)
            acc += int128(popcount(m)) * s.num[m] * s.num[m];
        CHECK(p.total == Dyadic::from_int128(acc, 2 * s.exp));
    }
}

TEST_CASE("generalized influence on frozen values", "[measures]") {
    auto f = maj3();
    auto s = spectrum(f);
    // T = {} recovers the full squared mass.
    CHECK(generalized_influence(s, 0) == Dyadic(1, 1));
    // Singletons match the per-coordinate influence.
    auto p = influence_profile(f);
    for (int i = 0; i < 3; ++i)
        CHECK(generalized_influence(s, mask_t(1) << i) == p.coordinate[i]);
    // Pairs only retain the top coefficient 1/4.
    CHECK(generalized_influence(s, mask_t(0b011)) == Dyadic(1, 4));
    // Degree cap removes it again.
    CHECK(generalized_influence(s, mask_t(0b001), 1) == Dyadic(1, 4));
    CHECK(generalized_influence(s, mask_t(0b011), 1) == Dyadic(0, 0));
    // Monotone under adding coordinates to T.
    CHECK(generalized_influence(s, mask_t(0b111)) == Dyadic(1, 4));
}

TEST_CASE("cross influence frozen values", "[measures]") {
    auto f = maj3();
    // Against itself: sum of influences.
    CHECK(double(cross_influence(f, f)) == Approx(0.375).margin(1e-15));
    // Against its degree-1 truncation: 3 * sqrt(1/8 * 1/16) = 3 / (8 sqrt 2).
    auto g = truncate_degree(f.to_real(), 1);
    CHECK(double(cross_influence(f.to_real(), g)) ==
          Approx(0.26516504294495532).margin(1e-12));
    // Symmetric.
    CHECK(double(cross_influence(g, f.to_real())) ==
          Approx(0.26516504294495532).margin(1e-12));
}

TEST_CASE("entropy report for the dictator", "[measures]") {
    BooleanFunction dict(1, {0, 1});
    auto r = entropy_report(dict);
    CHECK(r.zero_spectrum == false);
    CHECK(double(r.entropy) == Approx(double(kLn2)).margin(1e-15));
    CHECK(double(r.min_entropy) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(double(r.entropy_nonconstant) == Approx(double(kLn2 / 2)).margin(1e-15));
    CHECK(double(r.min_entropy_nonconstant) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(r.variance == Dyadic(1, 2));
}

TEST_CASE("entropy report for majority in both range conventions", "[measures]") {
    auto f = maj3();
    auto r = entropy_report(f);
    // Coefficient squares are 1/4 once and 1/16 four times:
    // entropy = (1/4) ln 4 + (4/16) ln 16 = (3/2) ln 2.
    CHECK(double(r.entropy) == Approx(double(1.5L * kLn2)).margin(1e-15));
    CHECK(double(r.min_entropy) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(double(r.entropy_nonconstant) == Approx(double(kLn2)).margin(1e-15));
    CHECK(double(r.min_entropy_nonconstant) == Approx(double(4 * kLn2)).margin(1e-15));

    auto rpm = entropy_report(f, -1, RangeConvention::plus_minus_one);
    // +-1 view: four coefficients of square 1/4, none at the empty set.
    CHECK(double(rpm.entropy) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(double(rpm.min_entropy) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(double(rpm.entropy_nonconstant) == Approx(double(2 * kLn2)).margin(1e-15));
    CHECK(rpm.variance == Dyadic(1, 0));

    // Degree cap 1 drops the top coefficient: (1/2) ln 2 + (3/16) ln 16.
    auto r1 = entropy_report(f, 1);
    CHECK(double(r1.entropy) == Approx(double(1.25L * kLn2)).margin(1e-15));
    CHECK(r1.degree_cap == 1);
}

TEST_CASE("entropy edge cases", "[measures]") {
    // All-zero function: empty spectrum.
    BooleanFunction zero(3);
    auto r0 = entropy_report(zero);
    CHECK(r0.zero_spectrum);
    CHECK(double(r0.entropy) == 0.0);

    // All-ones function: a single unit coefficient, zero entropy.
    BooleanFunction one = BooleanFunction::from_predicate(3, [](mask_t) { return true; });
    auto r1 = entropy_report(one);
    CHECK_FALSE(r1.zero_spectrum);
    CHECK(double(r1.entropy) == 0.0);
    CHECK(double(r1.min_entropy) == 0.0);

    // Parity in the +-1 view is a single unit coefficient as well.
    auto rp = entropy_report(parity(2), -1, RangeConvention::plus_minus_one);
    CHECK(double(rp.entropy) == Approx(0.0).margin(1e-18));
    CHECK(double(rp.min_entropy) == Approx(0.0).margin(1e-18));
}
