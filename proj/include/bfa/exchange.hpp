#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bfa/calculus.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/report.hpp"
#include "bfa/spectrum.hpp"

namespace bfa {

namespace detail {

// Certify deg(h) <= d by checking the spectral mass above d is exactly zero.
inline void require_degree(const RealFunction& h, int d, const char* who) {
    Spectrum s = spectrum(h);
    for (mask_t S = 0; S < s.size(); ++S)
        if (popcount(S) > d && s.num[S] != 0)
            throw input_error(std::string(who) + ": function exceeds degree " +
                              std::to_string(d));
}

inline int bit_length(int128 v) {
    if (v < 0) v = -v;
    int b = 0;
    while (v > 0) {
        ++b;
        v >>= 1;
    }
    return b;
}

}  // namespace detail

// E_x[max_i h_i(x)^2] <= 3^d * max_i ||h_i||_2 * (E_x[sum_i h_i(x)^2])^{1/2},
// for h_1..h_k all of degree at most d.
inline InequalityReport exchange_check(const std::vector<RealFunction>& h, int d) {
    if (h.empty()) throw input_error("exchange check needs at least one function");
    if (d < 0) throw input_error("exchange check needs d >= 0");
    int n = h[0].n;
    for (const auto& hi : h) {
        if (hi.n != n) throw input_error("exchange check on different cubes");
        detail::require_degree(hi, d, "exchange check");
    }

    // lhs: per point take the exact max of h_i(x)^2, then average.
    long double lhs = 0;
    for (mask_t x = 0; x < (mask_t{1} << n); ++x) {
        long double best = 0;
        for (const auto& hi : h) {
            long double v = hi.value_double(x);
            best = std::max(best, v * v);
        }
        lhs += best;
    }
    lhs /= static_cast<long double>(mask_t{1} << n);

    long double max_norm = 0, sum_sq = 0;
    for (const auto& hi : h) {
        long double ns = norm2_squared(hi).to_long_double();
        max_norm = std::max(max_norm, std::sqrt(ns));
        sum_sq += ns;
    }
    long double rhs = std::pow(3.0L, d) * max_norm * std::sqrt(sum_sq);

    return make_report("max-expectation-exchange",
                       "k=" + std::to_string(h.size()) + ",d=" + std::to_string(d),
                       lhs, rhs);
}

// The paired variant:
// E_x[(sum_i |h'_i|^{4/3} |h_i|^{4/3})^{3/4}]
//   <= 3^d max_i(||h_i|| ||h'_i||)^{1/4} (E[sum h'_i^2] E[sum h_i^2])^{3/8},
// with only the h_i required to have degree at most d.
inline InequalityReport exchange_check_paired(const std::vector<RealFunction>& h,
                                              const std::vector<RealFunction>& hp,
                                              int d) {
    if (h.empty() || h.size() != hp.size())
        throw input_error("paired exchange check needs matching nonempty lists");
    if (d < 0) throw input_error("paired exchange check needs d >= 0");
    int n = h[0].n;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i].n != n || hp[i].n != n)
            throw input_error("paired exchange check on different cubes");
        detail::require_degree(h[i], d, "paired exchange check");
    }

    long double lhs = 0;
    for (mask_t x = 0; x < (mask_t{1} << n); ++x) {
        long double inner = 0;
        for (std::size_t i = 0; i < h.size(); ++i) {
            long double a = std::fabs(hp[i].value_double(x));
            long double b = std::fabs(h[i].value_double(x));
            inner += std::pow(a, 4.0L / 3) * std::pow(b, 4.0L / 3);
        }
        lhs += std::pow(inner, 3.0L / 4);
    }
    lhs /= static_cast<long double>(mask_t{1} << n);

    long double max_prod = 0, sum_h = 0, sum_hp = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        long double nh = norm2_squared(h[i]).to_long_double();
        long double np = norm2_squared(hp[i]).to_long_double();
        max_prod = std::max(max_prod, std::sqrt(nh) * std::sqrt(np));
        sum_h += nh;
        sum_hp += np;
    }
    long double rhs = std::pow(3.0L, d) * std::pow(max_prod, 0.25L) *
                      std::pow(sum_hp * sum_h, 3.0L / 8);

    return make_report("paired-max-expectation-exchange",
                       "k=" + std::to_string(h.size()) + ",d=" + std::to_string(d),
                       lhs, rhs);
}

// ||f||_q <= (q-1)^{d/2} ||f||_2 for deg(f) <= d and q >= 2. The degree is
// read off the spectrum. For q = 4 the comparison is replayed in integer
// arithmetic when the products fit in 128 bits.
inline InequalityReport hypercontractivity_check(const RealFunction& f, long double q) {
    if (q < 2) throw input_error("hypercontractivity check needs q >= 2");
    Spectrum s = spectrum(f);
    int d = s.degree();

    long double lhs = lq_norm(f, static_cast<double>(q));
    long double rhs =
        std::pow(q - 1, d / 2.0L) * std::sqrt(norm2_squared(f).to_long_double());
    InequalityReport r =
        make_report("hypercontractivity",
                    "q=" + std::to_string(static_cast<double>(q)) +
                        ",d=" + std::to_string(d),
                    lhs, rhs);

    if (q == 4) {
        // E[f^4] <= 9^d (E[f^2])^2, i.e. A * 2^n <= 9^d * B^2 with
        // A = sum num^4, B = sum num^2 (common denominators cancel).
        int128 A = 0, B = 0;
        bool fits = true;
        for (mask_t x = 0; x < f.size(); ++x) {
            int128 v = f.num[x];
            int128 v2 = v * v;
            if (detail::bit_length(v2) * 2 + f.n + 2 > 126) {
                fits = false;
                break;
            }
            A += v2 * v2;
            B += v2;
        }
        int128 nine_d = 1;
        for (int i = 0; fits && i < d; ++i) {
            if (detail::bit_length(nine_d) + 4 > 126) fits = false;
            else nine_d *= 9;
        }
        if (fits && detail::bit_length(A) + f.n <= 126 &&
            detail::bit_length(nine_d) + 2 * detail::bit_length(B) <= 126) {
            r.pass = (A << f.n) <= nine_d * B * B;
            r.exact = true;
        }
    }
    return r;
}

}  // namespace bfa
