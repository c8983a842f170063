#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bfa/headline.hpp"
#include "bfa/rng.hpp"
#include "bfa/zoo.hpp"

using namespace bfa;
using Catch::Approx;

namespace {

BooleanFunction maj3() {
    return BooleanFunction(3, {0, 0, 0, 1, 0, 1, 1, 1});
}

const long double kLn2 = 0.6931471805599453094L;

bool all_pass(const std::vector<InequalityReport>& rows) {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

const InequalityReport& row(const std::vector<InequalityReport>& rows,
                            const std::string& lemma) {
    for (const auto& r : rows)
        if (r.lemma == lemma) return r;
    throw std::runtime_error("missing row " + lemma);
}

}  // namespace

TEST_CASE("witness search on majority of three") {
    auto w = min_entropy_witness(maj3());
    CHECK(w.n == 3);
    CHECK(w.variance == Approx(0.25).epsilon(0));
    CHECK(w.itilde == Approx(1.5).epsilon(0));
    CHECK(w.size_cap == Approx(15.0).epsilon(0));
    REQUIRE(w.found);

    // Four sets tie at |coefficient| 1/4; the singletons win on size and
    // x1 wins the lexicographic tie.
    CHECK(w.witness == 1);
    CHECK(w.witness_size == 1);
    CHECK(w.witness_value == Approx(0.25).epsilon(0));
    CHECK(w.ratio == Approx(0.5).epsilon(0));
    long double expect = kLn2 / std::log(2.5L);
    CHECK(w.c_star == Approx(static_cast<double>(expect)).epsilon(1e-15));
    CHECK(std::fabs(w.c_star - 0.756470797366L) < 1e-9L);

    // The outright smallest constant sits on the full triple.
    CHECK(w.argmin == 7);
    CHECK(w.c_min == Approx(static_cast<double>(expect / 3)).epsilon(1e-15));
    CHECK(std::fabs(w.c_min - 0.252156932455L) < 1e-9L);
}

TEST_CASE("witness search on parity and dictator") {
    auto par = min_entropy_witness(make_function("parity:n=4"));
    CHECK(par.itilde == Approx(4.0).epsilon(0));
    REQUIRE(par.found);
    CHECK(par.witness == 15);
    CHECK(par.witness_size == 4);
    CHECK(par.ratio == Approx(1.0).epsilon(0));
    CHECK(par.c_star == 0.0L);
    CHECK(par.c_min == 0.0L);
    CHECK(par.argmin == 15);

    auto dict = min_entropy_witness(make_function("dictator:n=3"));
    CHECK(dict.itilde == Approx(1.0).epsilon(0));
    REQUIRE(dict.found);
    CHECK(dict.witness == 1);
    CHECK(dict.ratio == Approx(1.0).epsilon(0));
    CHECK(dict.c_star == 0.0L);
}

TEST_CASE("witness search rejects constants") {
    CHECK_THROWS_AS(min_entropy_witness(BooleanFunction(2)), input_error);
    CHECK_THROWS_AS(
        min_entropy_witness(BooleanFunction::from_predicate(3, [](mask_t) { return true; })),
        input_error);
}

TEST_CASE("witness window is never empty across the zoo") {
    // The spectral average of |S| over nonempty sets equals itilde, so some
    // nonzero coefficient always sits inside the 10*itilde window.
    for (const auto& entry : standard_zoo(10)) {
        auto w = min_entropy_witness(entry.fn);
        INFO(entry.spec);
        CHECK(w.found);
        CHECK(w.witness_size <= w.size_cap + 1e-9L);
        CHECK(w.c_min <= w.c_star + 1e-15L);
    }
}

TEST_CASE("monotone examples put a singleton at the witness constant") {
    for (int n : {3, 5, 7}) {
        auto f = make_function("majority:n=" + std::to_string(n));
        auto w = min_entropy_witness(f);
        REQUIRE(w.found);
        CHECK(w.witness_size == 1);

        Spectrum s = spectrum(f);
        long double root_var = std::sqrt(w.variance);
        long double best = 1e30L;
        for (int i = 0; i < n; ++i) {
            long double v = std::fabs(s.coeff_long_double(mask_t{1} << i));
            if (v == 0) continue;
            best = std::min(best,
                            detail::fitted_set_constant(v / root_var, 1, w.itilde));
        }
        CHECK(best <= w.c_star + 1e-12L);
    }
}

TEST_CASE("concentration mass on majority of three") {
    // tau = 2.5^{-1.5 c}; c = 1.2 puts tau below every |coefficient|.
    auto r = concentration_mass(maj3(), 1.2L, 0.0L);
    CHECK(r.itilde == Approx(1.5).epsilon(0));
    CHECK(r.mass == 0.0L);
    CHECK(r.pass);
    // Smallest magnitude 1/4 already carries mass 1/4 > 0: the minimal
    // constant pushes the threshold just under 1/4.
    long double expect_min = 2 * kLn2 / (1.5L * std::log(2.5L));
    CHECK(r.minimal_c == Approx(static_cast<double>(expect_min)).epsilon(1e-15));

    // eta = 1 tolerates the 1/4-level mass but not the constant term.
    auto r2 = concentration_mass(maj3(), 0.0L, 1.0L);
    CHECK(r2.threshold == Approx(1.0).epsilon(0));
    CHECK(r2.mass == Approx(0.5).epsilon(0));  // whole Parseval mass
    CHECK_FALSE(r2.pass);
    CHECK(r2.minimal_c ==
          Approx(static_cast<double>(kLn2 / (1.5L * std::log(2.5L)))).epsilon(1e-15));

    // eta = 2 accepts everything at c = 0.
    auto r3 = concentration_mass(maj3(), 0.0L, 2.0L);
    CHECK(r3.pass);
    CHECK(r3.minimal_c == 0.0L);
}

TEST_CASE("concentration mass on parity") {
    auto r = concentration_mass(make_function("parity:n=4"), 0.2L, 0.0L);
    CHECK(r.itilde == Approx(4.0).epsilon(0));
    CHECK(r.threshold == Approx(std::pow(5.0, -0.8)).epsilon(1e-15));
    CHECK(r.mass == 0.0L);
    CHECK(r.pass);
}

TEST_CASE("concentration guards and minimal constant semantics") {
    CHECK_THROWS_AS(concentration_mass(BooleanFunction(3), 1.0L, 0.1L), input_error);
    CHECK_THROWS_AS(concentration_mass(maj3(), 1.0L, -0.1L), input_error);

    auto f = make_function("random-dnf:n=10,terms=8,width=3,seed=7");
    auto base = concentration_mass(f, 0.7L, 0.1L);
    auto again = concentration_mass(f, 0.7L, 0.1L);
    CHECK(base.mass == again.mass);
    CHECK(base.minimal_c == again.minimal_c);

    // Mass is nonincreasing in the constant, and the reported minimum
    // really is the crossover: just above passes.
    long double prev = 1e30L;
    for (long double c = 0; c <= 2.01L; c += 0.25L) {
        auto r = concentration_mass(f, c, 0.1L);
        CHECK(r.mass <= prev + 1e-18L);
        prev = r.mass;
    }
    auto at = concentration_mass(f, base.minimal_c + 1e-6L, 0.1L);
    CHECK(at.pass);
}

TEST_CASE("entropy fit matches the hand computation for majority of three") {
    auto fit = entropy_bound_fit(maj3(), 3);
    // Spectrum entropy including the constant term: (1/4)ln4 + 4(1/16)ln16.
    long double lhs = 1.5L * kLn2;
    long double weighted = 9.0L * kLn2 / 16;
    CHECK(fit.lhs == Approx(static_cast<double>(lhs)).epsilon(1e-15));
    CHECK(std::fabs(fit.lhs - 1.0397207708L) < 1e-9L);
    CHECK(fit.weighted_sum == Approx(static_cast<double>(weighted)).epsilon(1e-15));
    CHECK(fit.influence == Approx(0.375).epsilon(0));
    CHECK(fit.structural ==
          Approx(static_cast<double>(weighted + 0.375L)).epsilon(1e-15));
    long double k = lhs / (weighted + 0.375L);
    CHECK(fit.fitted_k == Approx(static_cast<double>(k)).epsilon(1e-15));
    CHECK(std::fabs(fit.fitted_k - 1.3592983L) < 1e-6L);

    // Bucket trace at c = 1: the singletons sit one band down at degree 1,
    // the triple in the top band at degree 3.
    REQUIRE(fit.buckets.size() == 2);
    CHECK(fit.buckets[0].d == 1);
    CHECK(fit.buckets[0].k == 1);
    CHECK(fit.buckets[0].count == 3);
    CHECK(fit.buckets[0].mass == Approx(3.0 / 16).epsilon(1e-18));
    CHECK(fit.buckets[1].d == 3);
    CHECK(fit.buckets[1].k == 0);
    CHECK(fit.buckets[1].count == 1);
    CHECK(fit.buckets[1].mass == Approx(1.0 / 16).epsilon(1e-18));
}

TEST_CASE("entropy fit edge cases") {
    auto zero = entropy_bound_fit(BooleanFunction(2));
    CHECK(zero.lhs == 0.0L);
    CHECK(zero.structural == 0.0L);
    CHECK(zero.fitted_k == 0.0L);
    CHECK(zero.buckets.empty());

    auto ones = entropy_bound_fit(
        BooleanFunction::from_predicate(2, [](mask_t) { return true; }));
    CHECK(ones.lhs == 0.0L);  // single coefficient of squared mass 1
    CHECK(ones.fitted_k == 0.0L);

    auto dict = entropy_bound_fit(make_function("dictator:n=3"), 1);
    REQUIRE(dict.buckets.size() == 1);
    CHECK(dict.buckets[0].d == 1);
    CHECK(dict.buckets[0].k == 0);
    CHECK(dict.buckets[0].count == 1);
    CHECK(dict.buckets[0].mass == Approx(0.25).epsilon(0));

    CHECK_THROWS_AS(entropy_bound_fit(maj3(), 3, 0.0L), input_error);
}

TEST_CASE("entropy fit is stable across tribes sizes") {
    std::vector<std::pair<int, int>> shapes = {{2, 3}, {3, 3}, {3, 4}, {3, 5}};
    long double lo = 1e30L, hi = 0;
    for (auto [w, s] : shapes) {
        auto f = make_function("tribes:w=" + std::to_string(w) +
                               ",s=" + std::to_string(s));
        auto fit = entropy_bound_fit(f);
        INFO("tribes w=" << w << " s=" << s << " k=" << static_cast<double>(fit.fitted_k));
        CHECK(fit.fitted_k > 0);
        lo = std::min(lo, fit.fitted_k);
        hi = std::max(hi, fit.fitted_k);
    }
    CHECK(hi / lo <= 3.0L);
}

TEST_CASE("identity battery on exact examples") {
    auto rows = identities_suite(make_function("parity:n=2"));
    REQUIRE(rows.size() == 9);
    CHECK(all_pass(rows));
    CHECK(row(rows, "parseval").exact);
    CHECK(row(rows, "influence-identity").exact);
    CHECK(row(rows, "derivative-law").exact);
    CHECK_FALSE(row(rows, "cross-influence-restriction").exact);
    CHECK_FALSE(row(rows, "edge-isoperimetry").exact);

    CHECK(all_pass(identities_suite(maj3(), make_function("dictator:n=3"))));
    CHECK(all_pass(identities_suite(make_function("tribes:w=2,s=3"),
                                    make_function("parity:n=6"))));
}

TEST_CASE("identity battery on the zoo") {
    for (const auto& entry : standard_zoo(9)) {
        auto rows = identities_suite(entry.fn);
        INFO(entry.spec);
        CHECK(all_pass(rows));
    }
}

TEST_CASE("identity battery on random pairs") {
    Rng rng(20240817);
    for (int trial = 0; trial < 40; ++trial) {
        auto f = BooleanFunction::random(10, rng.derive(2 * trial));
        auto g = BooleanFunction::random(10, rng.derive(2 * trial + 1));
        auto rows = identities_suite(f, g);
        INFO("trial " << trial);
        for (const auto& r : rows) {
            INFO(r.lemma << " lhs=" << static_cast<double>(r.lhs)
                         << " rhs=" << static_cast<double>(r.rhs) << " " << r.witness);
            CHECK(r.pass);
        }
    }
}

TEST_CASE("identity battery rejects mismatched cubes") {
    CHECK_THROWS_AS(identities_suite(maj3(), make_function("parity:n=4")),
                    input_error);
}
