#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/graph_edges.hpp"
#include "bfa/rng.hpp"

namespace bfa {

// A named function family plus parameters, e.g. "tribes:w=4,s=4" or
// "random-dnf:n=12,terms=12,width=3,seed=202". Everything is deterministic
// in (family, parameters): randomized families take their seed as a parameter.
struct FamilySpec {
    std::string family;
    std::map<std::string, std::string> params;

    static FamilySpec parse(const std::string& text) {
        FamilySpec spec;
        auto colon = text.find(':');
        spec.family = text.substr(0, colon);
        if (spec.family.empty()) throw input_error("empty family id");
        if (colon == std::string::npos) return spec;
        std::string rest = text.substr(colon + 1);
        std::size_t pos = 0;
        while (pos < rest.size()) {
            auto comma = rest.find(',', pos);
            std::string item =
                rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = item.find('=');
            if (eq == std::string::npos || eq == 0)
                throw input_error("family parameter must be key=value: " + item);
            spec.params[item.substr(0, eq)] = item.substr(eq + 1);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        return spec;
    }

    std::string to_string() const {
        std::string s = family;
        char sep = ':';
        for (const auto& [k, v] : params) {
            s += sep;
            s += k + "=" + v;
            sep = ',';
        }
        return s;
    }

    long long get_int(const std::string& key, long long fallback,
                      bool required = false) const {
        auto it = params.find(key);
        if (it == params.end()) {
            if (required) throw input_error("family " + family + " needs parameter " + key);
            return fallback;
        }
        try {
            return std::stoll(it->second);
        } catch (const std::logic_error&) {
            throw input_error("bad integer for parameter " + key + ": " + it->second);
        }
    }

    std::string get_str(const std::string& key, const std::string& fallback) const {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    }
};

namespace detail {

inline BooleanFunction make_tribes(int width, int count, int max_n) {
    if (width < 1 || count < 1) throw input_error("tribes needs w >= 1, s >= 1");
    int n = width * count;
    return BooleanFunction::from_predicate(
        n,
        [&](mask_t x) {
            for (int t = 0; t < count; ++t) {
                mask_t block = (full_mask(width)) << (t * width);
                if ((x & block) == block) return true;
            }
            return false;
        },
        max_n);
}

inline BooleanFunction make_address(int a, int max_n) {
    if (a < 1) throw input_error("address needs a >= 1");
    if (a >= 16 || a + (1LL << a) > max_n)
        throw resource_error("address function exceeds the coordinate cap");
    int n = a + (1 << a);
    return BooleanFunction::from_predicate(
        n,
        [&](mask_t x) {
            mask_t selector = x & full_mask(a);
            return (x >> (a + selector)) & 1;
        },
        max_n);
}

inline BooleanFunction make_random_dnf(int n, int terms, int width, std::uint64_t seed,
                                       int max_n) {
    if (terms < 1 || width < 1 || width > n)
        throw input_error("random-dnf needs 1 <= width <= n and terms >= 1");
    Rng rng = Rng(seed).derive(0x646e66ULL);
    std::vector<mask_t> positive(terms), support(terms);
    std::vector<int> vars(n);
    for (int t = 0; t < terms; ++t) {
        for (int i = 0; i < n; ++i) vars[i] = i;
        mask_t sup = 0, pos = 0;
        for (int j = 0; j < width; ++j) {  // partial Fisher-Yates draw
            int pick = j + static_cast<int>(rng.below(n - j));
            std::swap(vars[j], vars[pick]);
            mask_t bit = mask_t{1} << vars[j];
            sup |= bit;
            if (rng.next_u64() & 1) pos |= bit;
        }
        support[t] = sup;
        positive[t] = pos;
    }
    return BooleanFunction::from_predicate(
        n,
        [&](mask_t x) {
            for (int t = 0; t < terms; ++t)
                if ((x & support[t]) == positive[t]) return true;
            return false;
        },
        max_n);
}

inline BooleanFunction make_triangle_property(int N, int max_n) {
    if (N < 3) throw input_error("triangle property needs at least 3 vertices");
    int n = N * (N - 1) / 2;
    std::vector<mask_t> triangles;
    for (int a = 1; a <= N; ++a)
        for (int b = a + 1; b <= N; ++b)
            for (int c = b + 1; c <= N; ++c)
                triangles.push_back((mask_t{1} << edge_coordinate(a, b, N)) |
                                    (mask_t{1} << edge_coordinate(a, c, N)) |
                                    (mask_t{1} << edge_coordinate(b, c, N)));
    return BooleanFunction::from_predicate(
        n,
        [&](mask_t x) {
            for (mask_t t : triangles)
                if ((x & t) == t) return true;
            return false;
        },
        max_n);
}

}  // namespace detail

inline BooleanFunction make_function(const FamilySpec& spec, int max_n = kDefaultMaxN) {
    const std::string& id = spec.family;
    if (id == "dictator") {
        int n = static_cast<int>(spec.get_int("n", 1));
        return BooleanFunction::from_predicate(n, [](mask_t x) { return x & 1; }, max_n);
    }
    if (id == "parity") {
        int n = static_cast<int>(spec.get_int("n", 0, true));
        return BooleanFunction::from_predicate(
            n, [](mask_t x) { return popcount(x) & 1; }, max_n);
    }
    if (id == "majority") {
        int n = static_cast<int>(spec.get_int("n", 0, true));
        if (n % 2 == 0) throw input_error("majority needs odd n");
        return BooleanFunction::from_predicate(
            n, [n](mask_t x) { return 2 * popcount(x) > n; }, max_n);
    }
    if (id == "tribes")
        return detail::make_tribes(static_cast<int>(spec.get_int("w", 0, true)),
                                   static_cast<int>(spec.get_int("s", 0, true)), max_n);
    if (id == "address")
        return detail::make_address(static_cast<int>(spec.get_int("a", 0, true)), max_n);
    if (id == "random-dnf")
        return detail::make_random_dnf(static_cast<int>(spec.get_int("n", 0, true)),
                                       static_cast<int>(spec.get_int("terms", 0, true)),
                                       static_cast<int>(spec.get_int("width", 0, true)),
                                       static_cast<std::uint64_t>(spec.get_int("seed", 1)),
                                       max_n);
    if (id == "graph-property") {
        std::string prop = spec.get_str("property", "triangle");
        if (prop != "triangle")
            throw input_error("unknown graph property: " + prop);
        return detail::make_triangle_property(
            static_cast<int>(spec.get_int("vertices", 0, true)), max_n);
    }
    if (id == "inner-product") {
        int k = static_cast<int>(spec.get_int("k", 0, true));
        if (k < 1) throw input_error("inner-product needs k >= 1");
        return BooleanFunction::from_predicate(
            2 * k,
            [k](mask_t x) {
                int acc = 0;
                for (int i = 0; i < k; ++i)
                    acc ^= ((x >> (2 * i)) & (x >> (2 * i + 1))) & 1;
                return acc;
            },
            max_n);
    }
    if (id == "from-file") {
        auto it = spec.params.find("path");
        if (it == spec.params.end()) throw input_error("from-file needs path=<file>");
        return BooleanFunction::load(it->second, max_n);
    }
    throw input_error("unknown family: " + id);
}

inline BooleanFunction make_function(const std::string& spec_text,
                                     int max_n = kDefaultMaxN) {
    return make_function(FamilySpec::parse(spec_text), max_n);
}

inline const std::vector<std::string>& family_ids() {
    static const std::vector<std::string> ids = {
        "dictator",     "parity",        "majority",  "tribes",   "address",
        "random-dnf",   "graph-property", "inner-product", "from-file"};
    return ids;
}

struct ZooEntry {
    std::string spec;
    BooleanFunction fn;
};

// The deterministic function list driven by every verification suite.
inline std::vector<ZooEntry> standard_zoo(int max_n) {
    static const char* kSpecs[] = {
        "dictator:n=5",
        "parity:n=2",
        "parity:n=5",
        "parity:n=8",
        "parity:n=13",
        "majority:n=3",
        "majority:n=5",
        "majority:n=7",
        "majority:n=9",
        "majority:n=11",
        "majority:n=13",
        "majority:n=15",
        "tribes:w=2,s=2",
        "tribes:w=2,s=3",
        "tribes:w=3,s=3",
        "tribes:w=3,s=4",
        "tribes:w=2,s=7",
        "tribes:w=3,s=5",
        "tribes:w=4,s=4",
        "address:a=2",
        "address:a=3",
        "inner-product:k=2",
        "inner-product:k=4",
        "inner-product:k=6",
        "inner-product:k=7",
        "graph-property:vertices=4,property=triangle",
        "graph-property:vertices=5,property=triangle",
        "random-dnf:n=10,terms=8,width=3,seed=101",
        "random-dnf:n=12,terms=12,width=3,seed=202",
        "random-dnf:n=14,terms=16,width=4,seed=303",
    };
    std::vector<ZooEntry> zoo;
    for (const char* text : kSpecs) {
        BooleanFunction f = make_function(FamilySpec::parse(text));
        if (f.n <= max_n) zoo.push_back({text, std::move(f)});
    }
    return zoo;
}

}  // namespace bfa
