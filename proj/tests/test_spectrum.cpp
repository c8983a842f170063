#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "bfa/calculus.hpp"
#include "bfa/function.hpp"
#include "bfa/rng.hpp"
#include "bfa/spectrum.hpp"

using namespace bfa;

namespace {
BooleanFunction maj3() { return BooleanFunction(3, {0, 0, 0, 1, 0, 1, 1, 1}); }
BooleanFunction xor2() { return BooleanFunction(2, {0, 1, 1, 0}); }
}  // namespace

TEST_CASE("dictator spectrum: x_1 = (1 - chi_{1})/2") {
    BooleanFunction f(1, {0, 1});
    Spectrum s = spectrum(f);
    CHECK(s.coeff(0b0) == Dyadic(1, 1));
    CHECK(s.coeff(0b1) == Dyadic(-1, 1));
}

TEST_CASE("two-bit parity spectrum has a single nonempty character") {
    Spectrum s = spectrum(xor2());
    CHECK(s.coeff(0b00) == Dyadic(1, 1));
    CHECK(s.coeff(0b01) == Dyadic(0));
    CHECK(s.coeff(0b10) == Dyadic(0));
    CHECK(s.coeff(0b11) == Dyadic(-1, 1));
    CHECK(s.degree() == 2);
}

TEST_CASE("three-bit majority spectrum") {
    Spectrum s = spectrum(maj3());
    CHECK(s.coeff(0b000) == Dyadic(1, 1));
    for (mask_t m : {0b001u, 0b010u, 0b100u}) CHECK(s.coeff(m) == Dyadic(-1, 2));
    for (mask_t m : {0b011u, 0b101u, 0b110u}) CHECK(s.coeff(m) == Dyadic(0));
    CHECK(s.coeff(0b111) == Dyadic(1, 2));
    CHECK(s.degree() == 3);
}

TEST_CASE("walsh transform is self-inverse bit-exactly") {
    Rng rng(11);
    for (int n = 1; n <= 10; n += 3) {
        BooleanFunction f = BooleanFunction::random(n, rng);
        RealFunction back = synthesize(spectrum(f));
        CHECK(back == RealFunction(f));
    }
}

TEST_CASE("parseval holds exactly for random pairs") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 4 + static_cast<int>(rng.below(9));  // up to 12
        BooleanFunction f = BooleanFunction::random(n, rng);
        BooleanFunction g = BooleanFunction::random(n, rng);
        Spectrum sf = spectrum(f), sg = spectrum(g);
        int128 acc = 0;
        for (mask_t m = 0; m < sf.size(); ++m) acc += int128{sf.num[m]} * sg.num[m];
        Dyadic coefficient_side = Dyadic::from_int128(acc, sf.exp + sg.exp);
        CHECK(coefficient_side == inner_product(f, g));
    }
}

TEST_CASE("parseval mass equals E[f^2] exactly") {
    Rng rng(6);
    BooleanFunction f = BooleanFunction::random(9, rng);
    CHECK(spectrum(f).mass() == norm2_squared(f));
}

TEST_CASE("floating spectrum agrees with the exact one") {
    Rng rng(7);
    BooleanFunction f = BooleanFunction::random(10, rng);
    Spectrum exact = spectrum(f), approx = spectrum_float(f);
    double worst = 0;
    for (mask_t m = 0; m < exact.size(); ++m)
        worst = std::max(worst, std::abs(approx.val[m] - exact.coeff_double(m)));
    CHECK(worst < 1e-12);
}

TEST_CASE("spectrum csv export format") {
    std::stringstream ss;
    write_spectrum_csv(spectrum(BooleanFunction(1, {0, 1})), ss);
    CHECK(ss.str() == "mask,coefficient_num,coefficient_den\n0,1,2\n1,-1,2\n");
}

TEST_CASE("degree of constants and truncations") {
    BooleanFunction ones(2, {1, 1, 1, 1});
    CHECK(spectrum(ones).degree() == 0);
    BooleanFunction zeros(2, {0, 0, 0, 0});
    CHECK(spectrum(zeros).degree() == 0);
}
