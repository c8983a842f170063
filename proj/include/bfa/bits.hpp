#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace bfa {

// Subset of [n] encoded as a bitmask; coordinate i <-> bit i-1, so x_1 is the
// least-significant bit everywhere (frozen, the file formats depend on it).
using mask_t = std::uint32_t;

inline int popcount(mask_t m) { return std::popcount(m); }

// (-1)^{|a & b|} as +1/-1.
inline int sign_parity(mask_t a, mask_t b) {
    return (std::popcount(a & b) & 1) ? -1 : 1;
}

inline mask_t full_mask(int n) {
    return n >= 32 ? ~mask_t{0} : (mask_t{1} << n) - 1;
}

inline bool is_subset(mask_t a, mask_t b) { return (a & ~b) == 0; }

// Calls fn(sub) for every sub of m, including m itself and 0.
template <class Fn>
void for_each_submask(mask_t m, Fn&& fn) {
    mask_t sub = m;
    for (;;) {
        fn(sub);
        if (sub == 0) break;
        sub = (sub - 1) & m;
    }
}

// Smallest mask with k bits set.
inline mask_t first_of_weight(int k) { return (k == 0) ? 0 : full_mask(k); }

// Next mask of the same popcount within n bits (Gosper); 0 when exhausted.
inline mask_t next_of_weight(mask_t m, int n) {
    if (m == 0) return 0;
    mask_t c = m & -m;
    mask_t r = m + c;
    mask_t next = (((m ^ r) >> 2) / c) | r;
    return (next & ~full_mask(n)) ? 0 : next;
}

// Calls fn(mask) for every mask of popcount k within n bits, ascending.
template <class Fn>
void for_each_of_weight(int n, int k, Fn&& fn) {
    if (k == 0) {
        fn(mask_t{0});
        return;
    }
    if (k > n) return;
    for (mask_t m = first_of_weight(k); m != 0; m = next_of_weight(m, n)) fn(m);
}

// Scatter the low popcount(positions) bits of compact into the set bits of
// positions, low to high.
inline mask_t deposit_bits(mask_t compact, mask_t positions) {
    mask_t out = 0;
    int j = 0;
    for (mask_t p = positions; p; p &= p - 1, ++j) {
        if (compact & (mask_t{1} << j)) out |= p & -p;
    }
    return out;
}

// Gather the bits of x at the set positions into a compact low-bit mask.
inline mask_t extract_bits(mask_t x, mask_t positions) {
    mask_t out = 0;
    int j = 0;
    for (mask_t p = positions; p; p &= p - 1, ++j) {
        if (x & (p & -p)) out |= mask_t{1} << j;
    }
    return out;
}

// "{}", "{1,3,4}" — one-based coordinates.
inline std::string mask_to_string(mask_t m) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < 32; ++i) {
        if (m & (mask_t{1} << i)) {
            if (!first) s += ',';
            s += std::to_string(i + 1);
            first = false;
        }
    }
    s += '}';
    return s;
}

inline long long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace bfa
