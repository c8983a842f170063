#pragma once

#include <cmath>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/spectrum.hpp"

namespace bfa {

// ---- exact moments --------------------------------------------------------

inline Dyadic inner_product(const RealFunction& f, const RealFunction& g) {
    if (f.n != g.n) throw input_error("inner product of functions on different cubes");
    int128 acc = 0;
    for (mask_t x = 0; x < f.size(); ++x) acc += int128{f.num[x]} * g.num[x];
    return Dyadic::from_int128(acc, f.exp + g.exp + f.n);
}

inline Dyadic inner_product(const BooleanFunction& f, const BooleanFunction& g) {
    return inner_product(RealFunction(f), RealFunction(g));
}
inline Dyadic inner_product(const BooleanFunction& f, const RealFunction& g) {
    return inner_product(RealFunction(f), g);
}

inline Dyadic expectation(const RealFunction& f) {
    int128 acc = 0;
    for (auto v : f.num) acc += v;
    return Dyadic::from_int128(acc, f.exp + f.n);
}
inline Dyadic expectation(const BooleanFunction& f) { return expectation(RealFunction(f)); }

inline Dyadic norm2_squared(const RealFunction& f) { return inner_product(f, f); }
inline Dyadic norm2_squared(const BooleanFunction& f) {
    return inner_product(f, f);
}

inline Dyadic variance(const RealFunction& f) {
    Dyadic mean = expectation(f);
    return norm2_squared(f) - mean.square();
}
inline Dyadic variance(const BooleanFunction& f) { return variance(RealFunction(f)); }

inline long double norm2(const RealFunction& f) {
    return std::sqrt(norm2_squared(f).to_long_double());
}

// ||f||_q = (E|f|^q)^{1/q} for real q >= 1.
inline long double lq_norm(const RealFunction& f, long double q) {
    long double acc = 0;
    for (auto v : f.num) acc += std::pow(std::abs((long double)v), q);
    return std::pow(acc / std::ldexp(1.0L, f.n), 1.0L / q) / std::ldexp(1.0L, f.exp);
}

// ---- pointwise algebra ----------------------------------------------------

inline RealFunction operator+(const RealFunction& a, const RealFunction& b) {
    if (a.n != b.n) throw input_error("sum of functions on different cubes");
    int e = a.exp > b.exp ? a.exp : b.exp;
    RealFunction r(a.n, e);
    for (mask_t x = 0; x < r.size(); ++x)
        r.num[x] = detail::narrow128(
            (int128{a.num[x]} << (e - a.exp)) + (int128{b.num[x]} << (e - b.exp)),
            "function sum");
    return r;
}

inline RealFunction operator-(const RealFunction& a) {
    RealFunction r = a;
    for (auto& v : r.num) v = -v;
    return r;
}
inline RealFunction operator-(const RealFunction& a, const RealFunction& b) {
    return a + (-b);
}

inline RealFunction operator*(const RealFunction& a, const RealFunction& b) {
    if (a.n != b.n) throw input_error("product of functions on different cubes");
    RealFunction r(a.n, a.exp + b.exp);
    for (mask_t x = 0; x < r.size(); ++x)
        r.num[x] = detail::narrow128(int128{a.num[x]} * b.num[x], "function product");
    return r;
}

inline RealFunction scale(const RealFunction& a, const Dyadic& c) {
    RealFunction r(a.n, a.exp + c.exp);
    for (mask_t x = 0; x < r.size(); ++x)
        r.num[x] = detail::narrow128(int128{a.num[x]} * c.num, "function scale");
    r.reduce();
    return r;
}

inline RealFunction add_constant(const RealFunction& a, const Dyadic& c) {
    int e = a.exp > c.exp ? a.exp : c.exp;
    RealFunction r(a.n, e);
    for (mask_t x = 0; x < r.size(); ++x)
        r.num[x] = detail::narrow128(
            (int128{a.num[x]} << (e - a.exp)) + (int128{c.num} << (e - c.exp)),
            "add constant");
    return r;
}

// ---- degree truncation ----------------------------------------------------

// f^{<=d} = sum_{|S| <= d} f^(S) chi_S, evaluated back on the cube.
inline RealFunction truncate_degree(const Spectrum& s, int d) {
    if (d < 0 || d > s.n) throw input_error("truncation degree out of range");
    Spectrum t = s;
    if (t.mode != ArithmeticMode::exact_dyadic)
        throw input_error("exact truncation requires an exact spectrum");
    for (mask_t m = 0; m < t.size(); ++m)
        if (popcount(m) > d) t.num[m] = 0;
    return synthesize(t);
}

inline RealFunction truncate_degree(const RealFunction& g, int d) {
    return truncate_degree(spectrum(g), d);
}
inline RealFunction truncate_degree(const BooleanFunction& f, int d) {
    return truncate_degree(spectrum(f), d);
}

// Keep only coefficients with |S| in [lo, hi] (a homogeneous band).
inline RealFunction degree_band(const Spectrum& s, int lo, int hi) {
    if (lo < 0 || hi > s.n || lo > hi) throw input_error("degree band out of range");
    Spectrum t = s;
    for (mask_t m = 0; m < t.size(); ++m) {
        int w = popcount(m);
        if (w < lo || w > hi) t.num[m] = 0;
    }
    return synthesize(t);
}

// ---- discrete derivative ---------------------------------------------------

// d_T f(x) = 2^{-|T|} sum_{z subset T} (-1)^{|z|} f(x with T set to z).
// Returned on the full cube, constant along the T directions, so its spectrum
// lives on masks disjoint from T.
inline RealFunction derivative(const RealFunction& f, mask_t T) {
    if (T & ~full_mask(f.n)) throw input_error("derivative mask outside [n]");
    RealFunction r = f;
    for (int i = 0; i < f.n; ++i) {
        mask_t bit = mask_t{1} << i;
        if (!(T & bit)) continue;
        for (mask_t x = 0; x < r.size(); ++x) {
            if (x & bit) continue;
            long long v = r.num[x] - r.num[x | bit];
            r.num[x] = v;
            r.num[x | bit] = v;
        }
    }
    r.exp = f.exp + popcount(T);
    return r;
}

inline RealFunction derivative(const BooleanFunction& f, mask_t T) {
    return derivative(RealFunction(f), T);
}

// ---- restrictions ----------------------------------------------------------

// f_{J -> z}: fix the coordinates in J to the bits of z (z subset J, bit i of
// z gives the value of coordinate i), return the function on the remaining
// n - |J| coordinates, compacted in increasing coordinate order.
inline RealFunction restrict_function(const RealFunction& f, mask_t J, mask_t z) {
    if (J & ~full_mask(f.n)) throw input_error("restriction mask outside [n]");
    if (z & ~J) throw input_error("assignment has bits outside the restricted set");
    int live = f.n - popcount(J);
    if (live == 0) {
        RealFunction r;
        r.n = 0;
        r.num.assign(1, f.num[z]);
        r.exp = f.exp;
        return r;
    }
    mask_t live_mask = full_mask(f.n) & ~J;
    RealFunction r(live, f.exp);
    for (mask_t y = 0; y < r.size(); ++y)
        r.num[y] = f.num[deposit_bits(y, live_mask) | z];
    return r;
}

inline BooleanFunction restrict_function(const BooleanFunction& f, mask_t J, mask_t z) {
    if (J & ~full_mask(f.n)) throw input_error("restriction mask outside [n]");
    if (z & ~J) throw input_error("assignment has bits outside the restricted set");
    int live = f.n - popcount(J);
    if (live == 0)
        throw input_error("restriction fixes every coordinate; use the real form");
    mask_t live_mask = full_mask(f.n) & ~J;
    BooleanFunction r(live);
    for (mask_t y = 0; y < r.size(); ++y)
        r.table[y] = f.table[deposit_bits(y, live_mask) | z];
    return r;
}

// All 2^{|J|} restrictions f_{J -> z} in one pass over the table. Slice index
// zc is the compact form of z over J (deposit_bits(zc, J) recovers z).
inline std::vector<RealFunction> restriction_slices(const RealFunction& f, mask_t J) {
    if (J & ~full_mask(f.n)) throw input_error("restriction mask outside [n]");
    int fixed = popcount(J);
    int live = f.n - fixed;
    mask_t live_mask = full_mask(f.n) & ~J;
    std::vector<RealFunction> out(std::size_t{1} << fixed);
    for (auto& s : out) {
        s.n = live;
        s.num.assign(std::size_t{1} << live, 0);
        s.exp = f.exp;
    }
    for (mask_t x = 0; x < f.size(); ++x)
        out[extract_bits(x, J)].num[extract_bits(x, live_mask)] = f.num[x];
    return out;
}

inline std::vector<RealFunction> restriction_slices(const BooleanFunction& f, mask_t J) {
    return restriction_slices(RealFunction(f), J);
}

}  // namespace bfa
