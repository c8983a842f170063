#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/errors.hpp"
#include "bfa/rng.hpp"

namespace bfa {

// Default cap on coordinate count: 2^24 doubles is 128 MiB, the practical
// desk-scale limit. Constructors take an override for deliberate excursions.
inline constexpr int kDefaultMaxN = 24;

struct RealFunction;

inline std::size_t table_size_checked(int n, int max_n) {
    if (n < 1) throw input_error("coordinate count must be >= 1");
    if (n > max_n)
        throw resource_error("coordinate count " + std::to_string(n) +
                             " above cap " + std::to_string(max_n));
    return std::size_t{1} << n;
}

// f: {0,1}^n -> {0,1}, dense truth table; index x encodes the point with
// x_1 as the least-significant bit.
struct BooleanFunction {
    int n = 0;
    std::vector<std::uint8_t> table;

    BooleanFunction() = default;
    explicit BooleanFunction(int n_, int max_n = kDefaultMaxN)
        : n(n_), table(table_size_checked(n_, max_n), 0) {}
    BooleanFunction(int n_, std::vector<std::uint8_t> t, int max_n = kDefaultMaxN)
        : n(n_), table(std::move(t)) {
        if (table.size() != table_size_checked(n_, max_n))
            throw input_error("truth table length is not 2^n");
        for (auto v : table)
            if (v > 1) throw input_error("truth table entry outside {0,1}");
    }

    template <class Pred>
    static BooleanFunction from_predicate(int n, Pred&& pred, int max_n = kDefaultMaxN) {
        BooleanFunction f(n, max_n);
        for (mask_t x = 0; x < f.size(); ++x) f.table[x] = pred(x) ? 1 : 0;
        return f;
    }

    static BooleanFunction random(int n, Rng rng, int max_n = kDefaultMaxN) {
        BooleanFunction f(n, max_n);
        for (auto& v : f.table) v = static_cast<std::uint8_t>(rng.next_u64() & 1);
        return f;
    }

    mask_t size() const { return static_cast<mask_t>(table.size()); }
    int operator()(mask_t x) const { return table[x]; }

    RealFunction to_real() const;  // 0/1 values
    RealFunction to_pm() const;    // 1 - 2f, values in {+1,-1}

    friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
        return a.n == b.n && a.table == b.table;
    }

    void save(std::ostream& os) const;
    void save(const std::string& path) const;
    static BooleanFunction load(std::istream& is, int max_n = kDefaultMaxN);
    static BooleanFunction load(const std::string& path, int max_n = kDefaultMaxN);
};

// g: {0,1}^n -> R with exact dyadic values num[x] / 2^exp (uniform exponent,
// so transforms stay in integer arithmetic end to end).
struct RealFunction {
    int n = 0;
    std::vector<long long> num;
    int exp = 0;

    RealFunction() = default;
    RealFunction(int n_, int exponent, int max_n = kDefaultMaxN)
        : n(n_), num(table_size_checked(n_, max_n), 0), exp(exponent) {}
    RealFunction(int n_, std::vector<long long> values, int exponent,
                 int max_n = kDefaultMaxN)
        : n(n_), num(std::move(values)), exp(exponent) {
        if (num.size() != table_size_checked(n_, max_n))
            throw input_error("value table length is not 2^n");
    }

    explicit RealFunction(const BooleanFunction& f) : n(f.n), num(f.table.size()), exp(0) {
        for (std::size_t x = 0; x < num.size(); ++x) num[x] = f.table[x];
    }

    // The +-1 view 1 - 2f: maps {0,1} values to {+1,-1}.
    static RealFunction pm_view(const BooleanFunction& f) {
        RealFunction g(f.n, 0);
        for (mask_t x = 0; x < f.size(); ++x) g.num[x] = 1 - 2 * f.table[x];
        return g;
    }

    mask_t size() const { return static_cast<mask_t>(num.size()); }
    Dyadic value(mask_t x) const { return Dyadic(num[x], exp); }
    double value_double(mask_t x) const { return Dyadic(num[x], exp).to_double(); }

    // Divide out shared powers of two; keeps later products small.
    void reduce() {
        if (exp == 0) return;
        bool any = false;
        for (auto v : num) any |= (v != 0);
        if (!any) {
            exp = 0;
            return;
        }
        while (exp > 0) {
            for (auto v : num)
                if (v & 1) return;
            for (auto& v : num) v >>= 1;
            --exp;
        }
    }

    friend bool operator==(const RealFunction& a, const RealFunction& b) {
        RealFunction x = a, y = b;
        x.reduce();
        y.reduce();
        return x.n == y.n && x.exp == y.exp && x.num == y.num;
    }
};

inline RealFunction BooleanFunction::to_real() const { return RealFunction(*this); }
inline RealFunction BooleanFunction::to_pm() const { return RealFunction::pm_view(*this); }

// --- truth-table file format ---------------------------------------------
// line 1: "n=<k>"        line 2: 2^k characters of '0'/'1' in index order

inline void BooleanFunction::save(std::ostream& os) const {
    os << "n=" << n << "\n";
    for (auto v : table) os.put(static_cast<char>('0' + v));
    os << "\n";
}

inline void BooleanFunction::save(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw input_error("cannot open " + path + " for writing");
    save(os);
}

inline BooleanFunction BooleanFunction::load(std::istream& is, int max_n) {
    std::string header;
    if (!std::getline(is, header)) throw parse_error("missing header line", 0);
    if (header.size() >= 1 && header.back() == '\r') header.pop_back();
    if (header.rfind("n=", 0) != 0) throw parse_error("expected \"n=<k>\" header", 0);
    int n;
    try {
        std::size_t used = 0;
        n = std::stoi(header.substr(2), &used);
        if (used != header.size() - 2) throw std::invalid_argument("trailing");
    } catch (const std::logic_error&) {
        throw parse_error("bad coordinate count in header", 2);
    }
    std::size_t table_len = table_size_checked(n, max_n);
    std::size_t line_start = header.size() + 1;
    std::string row;
    if (!std::getline(is, row)) throw parse_error("missing table line", line_start);
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.size() != table_len)
        throw parse_error("table has " + std::to_string(row.size()) +
                              " entries, expected " + std::to_string(table_len),
                          line_start + (row.size() < table_len ? row.size() : table_len));
    BooleanFunction f(n, max_n);
    for (std::size_t i = 0; i < table_len; ++i) {
        if (row[i] != '0' && row[i] != '1')
            throw parse_error("table entry not '0'/'1'", line_start + i);
        f.table[i] = static_cast<std::uint8_t>(row[i] - '0');
    }
    return f;
}

inline BooleanFunction BooleanFunction::load(const std::string& path, int max_n) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw input_error("cannot open " + path);
    return load(is, max_n);
}

}  // namespace bfa
