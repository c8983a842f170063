#pragma once

#include <cmath>
#include <vector>

#include "bfa/calculus.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/function.hpp"
#include "bfa/spectrum.hpp"

namespace bfa {

// Per-coordinate influences in both conventions. `coordinate[i]` is the
// squared derivative norm ||d_i f||_2^2; `flip_probability[i]` is the
// combinatorial variant Pr[f(x) != f(x xor e_i)], four times larger.
struct InfluenceProfile {
    int n = 0;
    std::vector<Dyadic> coordinate;
    Dyadic total;
    std::vector<Dyadic> flip_probability;
    Dyadic flip_total;
    Dyadic variance;
    bool normalized_defined = false;
    long double normalized = 0;  // total / variance
};

inline InfluenceProfile influence_profile(const RealFunction& f) {
    InfluenceProfile p;
    p.n = f.n;
    p.coordinate.resize(f.n);
    p.flip_probability.resize(f.n);
    for (int i = 0; i < f.n; ++i) {
        mask_t bit = mask_t{1} << i;
        int128 acc = 0;
        for (mask_t x = 0; x < f.size(); ++x) {
            if (x & bit) continue;
            long long d = f.num[x] - f.num[x | bit];
            acc += int128{d} * d;
        }
        // d_i f takes value d/2^{exp+1} on each point of the pair.
        p.coordinate[i] = Dyadic::from_int128(acc, 2 * (f.exp + 1) + f.n - 1);
        p.flip_probability[i] = p.coordinate[i] * Dyadic(4);
        p.total = p.total + p.coordinate[i];
    }
    p.flip_total = p.total * Dyadic(4);
    p.variance = variance(f);
    if (p.variance.sign() > 0) {
        p.normalized_defined = true;
        p.normalized = p.total.to_long_double() / p.variance.to_long_double();
    }
    return p;
}

inline InfluenceProfile influence_profile(const BooleanFunction& f) {
    return influence_profile(RealFunction(f));
}

// I_T[f] = sum_{S superset T} f^(S)^2; with d >= 0, computed on f^{<=d}.
inline Dyadic generalized_influence(const Spectrum& s, mask_t T, int d = -1) {
    if (T & ~full_mask(s.n)) throw input_error("influence mask outside [n]");
    int128 acc = 0;
    mask_t complement = full_mask(s.n) & ~T;
    for_each_submask(complement, [&](mask_t u) {
        mask_t set = T | u;
        if (d >= 0 && popcount(set) > d) return;
        acc += int128{s.num[set]} * s.num[set];
    });
    return Dyadic::from_int128(acc, 2 * s.exp);
}

inline Dyadic generalized_influence(const BooleanFunction& f, mask_t T, int d = -1) {
    return generalized_influence(spectrum(f), T, d);
}
inline Dyadic generalized_influence(const RealFunction& f, mask_t T, int d = -1) {
    return generalized_influence(spectrum(f), T, d);
}

// I[f,g] = sum_i sqrt(I_i[f] I_i[g]); irrational in general.
inline long double cross_influence(const InfluenceProfile& pf, const InfluenceProfile& pg) {
    if (pf.n != pg.n) throw input_error("cross influence on different cubes");
    long double acc = 0;
    for (int i = 0; i < pf.n; ++i)
        acc += std::sqrt((pf.coordinate[i] * pg.coordinate[i]).to_long_double());
    return acc;
}

inline long double cross_influence(const RealFunction& f, const RealFunction& g) {
    return cross_influence(influence_profile(f), influence_profile(g));
}
inline long double cross_influence(const BooleanFunction& f, const BooleanFunction& g) {
    return cross_influence(RealFunction(f), RealFunction(g));
}
inline long double cross_influence(const BooleanFunction& f, const RealFunction& g) {
    return cross_influence(RealFunction(f), g);
}

enum class RangeConvention { zero_one, plus_minus_one };

// Shannon-style entropy of the squared coefficients (natural log, zero
// coefficients contribute zero, no renormalization) plus the min-entropy,
// each also computed with S = {} excluded.
struct EntropyReport {
    RangeConvention convention = RangeConvention::zero_one;
    int degree_cap = -1;  // -1: no cap
    Dyadic variance;
    long double entropy = 0;
    long double min_entropy = 0;
    long double entropy_nonconstant = 0;
    long double min_entropy_nonconstant = 0;
    bool zero_spectrum = false;
};

inline EntropyReport entropy_report_of_spectrum(const Spectrum& s, const Dyadic& var,
                                                int D, RangeConvention conv) {
    EntropyReport r;
    r.convention = conv;
    r.degree_cap = D;
    r.variance = var;
    bool any = false, any_nonconst = false;
    long double min_all = 0, min_nc = 0;
    for (mask_t m = 0; m < s.size(); ++m) {
        if (D >= 0 && popcount(m) > D) continue;
        if (s.is_zero(m)) continue;
        long double c2 = s.coeff_long_double(m);
        c2 *= c2;
        long double term = c2 * std::log(1.0L / c2);
        long double neglog = std::log(1.0L / c2);
        r.entropy += term;
        if (!any || neglog < min_all) min_all = neglog;
        any = true;
        if (m != 0) {
            r.entropy_nonconstant += term;
            if (!any_nonconst || neglog < min_nc) min_nc = neglog;
            any_nonconst = true;
        }
    }
    r.min_entropy = min_all;
    r.min_entropy_nonconstant = min_nc;
    r.zero_spectrum = !any;
    return r;
}

inline EntropyReport entropy_report(const BooleanFunction& f, int D = -1,
                                    RangeConvention conv = RangeConvention::zero_one) {
    if (conv == RangeConvention::zero_one)
        return entropy_report_of_spectrum(spectrum(f), variance(f), D, conv);
    RealFunction g = RealFunction::pm_view(f);
    return entropy_report_of_spectrum(spectrum(g), variance(g), D, conv);
}

inline EntropyReport entropy_report(const RealFunction& g, int D = -1) {
    return entropy_report_of_spectrum(spectrum(g), variance(g), D,
                                      RangeConvention::zero_one);
}

}  // namespace bfa
