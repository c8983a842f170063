#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"

namespace bfa {

enum class ArithmeticMode { exact_dyadic, floating };

// In-place butterfly Walsh transform: a[S] <- sum_x (-1)^{|S & x|} a[x].
// Self-inverse up to the factor 2^n. O(n 2^n).
template <class T>
void walsh_transform(std::vector<T>& a) {
    const std::size_t size = a.size();
    for (std::size_t half = 1; half < size; half <<= 1) {
        for (std::size_t block = 0; block < size; block += half << 1) {
            for (std::size_t i = block; i < block + half; ++i) {
                T u = a[i];
                T v = a[i + half];
                a[i] = u + v;
                a[i + half] = u - v;
            }
        }
    }
}

// Fourier coefficients f^(S) = E_x[f(x) chi_S(x)] for all S, stored densely.
// Exact mode keeps num[S] / 2^exp with a shared exponent.
struct Spectrum {
    int n = 0;
    ArithmeticMode mode = ArithmeticMode::exact_dyadic;
    std::vector<long long> num;  // exact mode
    int exp = 0;
    std::vector<double> val;     // floating mode

    mask_t size() const {
        return static_cast<mask_t>(mode == ArithmeticMode::exact_dyadic ? num.size()
                                                                        : val.size());
    }
    Dyadic coeff(mask_t s) const {
        if (mode != ArithmeticMode::exact_dyadic)
            throw input_error("exact coefficient requested from floating spectrum");
        return Dyadic(num[s], exp);
    }
    double coeff_double(mask_t s) const {
        return mode == ArithmeticMode::exact_dyadic ? Dyadic(num[s], exp).to_double()
                                                    : val[s];
    }
    long double coeff_long_double(mask_t s) const {
        return mode == ArithmeticMode::exact_dyadic
                   ? Dyadic(num[s], exp).to_long_double()
                   : static_cast<long double>(val[s]);
    }
    bool is_zero(mask_t s) const {
        return mode == ArithmeticMode::exact_dyadic ? num[s] == 0 : val[s] == 0.0;
    }

    // Largest |S| carrying a nonzero coefficient; 0 for the zero function.
    int degree() const {
        int d = 0;
        for (mask_t s = 0; s < size(); ++s)
            if (!is_zero(s) && popcount(s) > d) d = popcount(s);
        return d;
    }

    // Exact Parseval mass sum_S f^(S)^2 = E[f^2].
    Dyadic mass() const {
        if (mode != ArithmeticMode::exact_dyadic)
            throw input_error("exact mass requested from floating spectrum");
        int128 acc = 0;
        for (auto v : num) acc += int128{v} * v;
        return Dyadic::from_int128(acc, 2 * exp);
    }
};

namespace detail {
inline void check_transform_headroom(const std::vector<long long>& a, int n) {
    long long peak = 0;
    for (auto v : a) {
        long long m = v < 0 ? -v : v;
        if (m > peak) peak = m;
    }
    // Butterfly partial sums grow by at most 2^n over the peak input.
    int bits = 0;
    while (peak >> bits) ++bits;
    if (bits + n > 62) throw resource_error("transform would overflow 64-bit lanes");
}
}  // namespace detail

inline Spectrum spectrum(const RealFunction& g) {
    Spectrum s;
    s.n = g.n;
    s.mode = ArithmeticMode::exact_dyadic;
    s.num = g.num;
    detail::check_transform_headroom(s.num, g.n);
    walsh_transform(s.num);
    s.exp = g.exp + g.n;  // divide by 2^n for the expectation
    return s;
}

inline Spectrum spectrum(const BooleanFunction& f) { return spectrum(RealFunction(f)); }

inline Spectrum spectrum_float(const RealFunction& g) {
    Spectrum s;
    s.n = g.n;
    s.mode = ArithmeticMode::floating;
    s.val.resize(g.num.size());
    const double scale = std::ldexp(1.0, -g.exp - g.n);
    for (std::size_t x = 0; x < g.num.size(); ++x)
        s.val[x] = static_cast<double>(g.num[x]);
    walsh_transform(s.val);
    for (auto& v : s.val) v *= scale;
    return s;
}

inline Spectrum spectrum_float(const BooleanFunction& f) {
    return spectrum_float(RealFunction(f));
}

// Evaluate sum_S f^(S) chi_S back on the cube; exact inverse of spectrum().
inline RealFunction synthesize(const Spectrum& s) {
    if (s.mode != ArithmeticMode::exact_dyadic)
        throw input_error("synthesis requires an exact spectrum");
    RealFunction g(s.n, s.exp);
    g.num = s.num;
    detail::check_transform_headroom(g.num, s.n);
    walsh_transform(g.num);
    g.reduce();
    return g;
}

// Spectrum made from an explicit coefficient list (shared exponent).
inline Spectrum spectrum_from_coeffs(int n, std::vector<long long> coeff_num, int exp) {
    Spectrum s;
    s.n = n;
    s.mode = ArithmeticMode::exact_dyadic;
    if (coeff_num.size() != (std::size_t{1} << n))
        throw input_error("coefficient table length is not 2^n");
    s.num = std::move(coeff_num);
    s.exp = exp;
    return s;
}

// CSV rows "mask,coefficient_num,coefficient_den", one per subset, header first.
inline void write_spectrum_csv(const Spectrum& s, std::ostream& os) {
    os << "mask,coefficient_num,coefficient_den\n";
    for (mask_t m = 0; m < s.size(); ++m) {
        if (s.mode == ArithmeticMode::exact_dyadic) {
            Dyadic c = s.coeff(m);
            os << m << ',' << c.num << ',' << c.den() << '\n';
        } else {
            os << m << ',' << s.val[m] << ",1\n";
        }
    }
}

}  // namespace bfa
