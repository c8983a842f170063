#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>

#include "bfa/errors.hpp"

namespace bfa {

using int128 = __int128;

namespace detail {
inline long long narrow128(int128 v, const char* where) {
    if (v > int128{0x7fffffffffffffffLL} || v < -int128{0x7fffffffffffffffLL})
        throw resource_error(std::string("exact arithmetic overflow in ") + where);
    return static_cast<long long>(v);
}
}  // namespace detail

// Exact dyadic rational num / 2^exp, normalized so num is odd or zero and
// exp >= 0. Covers every quantity the exact pipelines produce: spectra,
// influences, inner products, restriction averages.
struct Dyadic {
    long long num = 0;
    int exp = 0;

    Dyadic() = default;
    Dyadic(long long integer) : num(integer) {}  // NOLINT: implicit by design
    Dyadic(long long numerator, int exponent) : num(numerator), exp(exponent) {
        normalize();
    }

    static Dyadic from_int128(int128 numerator, int exponent) {
        // Reduce before narrowing so large-but-even intermediates survive.
        if (numerator == 0) return Dyadic{};
        while (exponent > 0 && (numerator & 1) == 0) {
            numerator >>= 1;
            --exponent;
        }
        Dyadic d;
        d.num = detail::narrow128(numerator, "dyadic");
        d.exp = exponent;
        d.normalize();
        return d;
    }

    void normalize() {
        if (num == 0) {
            exp = 0;
            return;
        }
        while (exp > 0 && (num & 1) == 0) {
            num >>= 1;
            --exp;
        }
        while (exp < 0) {
            num = detail::narrow128(int128{num} * 2, "dyadic normalize");
            ++exp;
        }
    }

    bool is_zero() const { return num == 0; }
    int sign() const { return num > 0 ? 1 : (num < 0 ? -1 : 0); }
    Dyadic abs() const { return num < 0 ? Dyadic(-num, exp) : *this; }

    // Denominator 2^exp as an integer; exact values used here keep exp small.
    long long den() const {
        if (exp >= 63) throw resource_error("dyadic denominator too large");
        return 1LL << exp;
    }

    double to_double() const { return std::ldexp(static_cast<double>(num), -exp); }
    long double to_long_double() const {
        return std::ldexp(static_cast<long double>(num), -exp);
    }

    std::string to_string() const {
        if (exp == 0) return std::to_string(num);
        return std::to_string(num) + "/2^" + std::to_string(exp);
    }

    friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
        int e = a.exp > b.exp ? a.exp : b.exp;
        int128 an = int128{a.num} << (e - a.exp);
        int128 bn = int128{b.num} << (e - b.exp);
        return from_int128(an + bn, e);
    }
    friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
    friend Dyadic operator-(const Dyadic& a) { return Dyadic(-a.num, a.exp); }
    friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
        return from_int128(int128{a.num} * b.num, a.exp + b.exp);
    }
    Dyadic square() const { return *this * *this; }

    friend bool operator==(const Dyadic& a, const Dyadic& b) {
        return a.num == b.num && a.exp == b.exp;
    }
    friend bool operator!=(const Dyadic& a, const Dyadic& b) { return !(a == b); }
    friend bool operator<(const Dyadic& a, const Dyadic& b) {
        int e = a.exp > b.exp ? a.exp : b.exp;
        return (int128{a.num} << (e - a.exp)) < (int128{b.num} << (e - b.exp));
    }
    friend bool operator>(const Dyadic& a, const Dyadic& b) { return b < a; }
    friend bool operator<=(const Dyadic& a, const Dyadic& b) { return !(b < a); }
    friend bool operator>=(const Dyadic& a, const Dyadic& b) { return !(a < b); }
};

// Exact fraction with arbitrary positive denominator; used for the partition
// window bounds, where thresholds like (1-2e)a(1+e)d/m must compare against
// integer intersection sizes without float boundary disputes.
struct Frac {
    long long num = 0;
    long long den = 1;

    Frac() = default;
    Frac(long long n) : num(n) {}  // NOLINT: implicit by design
    Frac(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw input_error("fraction with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    // Exact value of a decimal or "p/q" literal, e.g. "0.25", "1/3".
    static Frac parse(const std::string& text);

    int sign() const { return num < 0 ? -1 : num > 0 ? 1 : 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    long double to_long_double() const {
        return static_cast<long double>(num) / static_cast<long double>(den);
    }

    friend Frac operator+(const Frac& a, const Frac& b) {
        return Frac(detail::narrow128(int128{a.num} * b.den + int128{b.num} * a.den, "frac"),
                    detail::narrow128(int128{a.den} * b.den, "frac"));
    }
    friend Frac operator-(const Frac& a, const Frac& b) { return a + Frac(-b.num, b.den); }
    friend Frac operator*(const Frac& a, const Frac& b) {
        return Frac(detail::narrow128(int128{a.num} * b.num, "frac"),
                    detail::narrow128(int128{a.den} * b.den, "frac"));
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num == 0) throw input_error("fraction division by zero");
        return Frac(detail::narrow128(int128{a.num} * b.den, "frac"),
                    detail::narrow128(int128{a.den} * b.num, "frac"));
    }
    friend bool operator<(const Frac& a, const Frac& b) {
        return int128{a.num} * b.den < int128{b.num} * a.den;
    }
    friend bool operator>(const Frac& a, const Frac& b) { return b < a; }
    friend bool operator<=(const Frac& a, const Frac& b) { return !(b < a); }
    friend bool operator>=(const Frac& a, const Frac& b) { return !(a < b); }
    friend bool operator==(const Frac& a, const Frac& b) {
        return a.num == b.num && a.den == b.den;
    }

    std::string to_string() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

inline Frac Frac::parse(const std::string& text) {
    if (text.empty()) throw input_error("empty fraction literal");
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            return Frac(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        }
        auto dot = text.find('.');
        if (dot == std::string::npos) return Frac(std::stoll(text));
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        long long den = 1;
        for (std::size_t i = dot + 1; i < text.size(); ++i) den *= 10;
        return Frac(std::stoll(digits), den);
    } catch (const std::logic_error&) {
        throw input_error("bad fraction literal: " + text);
    }
}

}  // namespace bfa
