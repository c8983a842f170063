#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/graph_edges.hpp"
#include "bfa/headline.hpp"
#include "bfa/measures.hpp"
#include "bfa/report.hpp"

namespace bfa {

// Permutation symmetry: orbits of coordinate sets under a generated group,
// the largest set size at which every orbit is still large, and the
// influence lower bound that follows for symmetric functions.

struct GroupSpec {
    int n = 0;
    // Zero-based images: generator g maps coordinate i to g[i].  An empty
    // list is the trivial group.
    std::vector<std::vector<int>> generators;
};

namespace detail {

inline void validate_group(const GroupSpec& g) {
    if (g.n < 0 || g.n > 62) throw input_error("group degree out of range");
    for (std::size_t k = 0; k < g.generators.size(); ++k) {
        const auto& gen = g.generators[k];
        if (static_cast<int>(gen.size()) != g.n)
            throw input_error("generator " + std::to_string(k + 1) +
                              " has wrong length");
        std::vector<char> seen(g.n, 0);
        for (int image : gen) {
            if (image < 0 || image >= g.n || seen[image])
                throw input_error("generator " + std::to_string(k + 1) +
                                  " is not a permutation");
            seen[image] = 1;
        }
    }
}

inline mask_t permute_mask(mask_t s, const std::vector<int>& gen) {
    mask_t out = 0;
    while (s) {
        int i = std::countr_zero(s);
        out |= mask_t{1} << gen[i];
        s &= s - 1;
    }
    return out;
}

}  // namespace detail

// ---- stock groups --------------------------------------------------------

inline GroupSpec trivial_group(int n) {
    GroupSpec g;
    g.n = n;
    return g;
}

inline GroupSpec cyclic_group(int n) {
    GroupSpec g;
    g.n = n;
    if (n > 1) {
        std::vector<int> shift(n);
        for (int i = 0; i < n; ++i) shift[i] = (i + 1) % n;
        g.generators.push_back(std::move(shift));
    }
    return g;
}

inline GroupSpec symmetric_group(int n) {
    GroupSpec g;
    g.n = n;
    if (n > 1) {
        std::vector<int> swap01(n);
        for (int i = 0; i < n; ++i) swap01[i] = i;
        swap01[0] = 1;
        swap01[1] = 0;
        g.generators.push_back(std::move(swap01));
    }
    if (n > 2) {
        std::vector<int> cycle(n);
        for (int i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
        g.generators.push_back(std::move(cycle));
    }
    return g;
}

// Lift a group of vertex permutations of [N] to the C(N,2) edge
// coordinates shared with the graph-property functions.
inline GroupSpec edge_action(const GroupSpec& vertex_group, int N) {
    detail::validate_group(vertex_group);
    if (vertex_group.n != N) throw input_error("vertex group degree must be N");
    GroupSpec g;
    g.n = N * (N - 1) / 2;
    for (const auto& vp : vertex_group.generators) {
        std::vector<int> ep(g.n);
        for (const auto& [i, j] : edge_list(N))
            ep[edge_coordinate(i, j, N)] =
                edge_coordinate(vp[i - 1] + 1, vp[j - 1] + 1, N);
        g.generators.push_back(std::move(ep));
    }
    return g;
}

// Generators file: one permutation per line, one-based images separated by
// whitespace; every line must have the same length.
inline GroupSpec load_generators(std::istream& in) {
    GroupSpec g;
    std::string line;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        std::size_t line_start = offset;
        offset += line.size() + 1;
        std::istringstream row(line);
        std::vector<int> gen;
        long long v;
        while (row >> v) gen.push_back(static_cast<int>(v - 1));
        if (gen.empty()) continue;  // blank line
        if (g.generators.empty())
            g.n = static_cast<int>(gen.size());
        else if (static_cast<int>(gen.size()) != g.n)
            throw parse_error("generator lines have different lengths", line_start);
        if (!row.eof()) throw parse_error("bad token in generator line", line_start);
        g.generators.push_back(std::move(gen));
    }
    if (g.generators.empty()) throw parse_error("no generators in file", 0);
    detail::validate_group(g);
    return g;
}

inline GroupSpec load_generators(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open generators file: " + path);
    return load_generators(in);
}

// ---- orbits ---------------------------------------------------------------

struct OrbitResult {
    long long size = 0;
    std::vector<mask_t> elements;  // sorted; empty unless requested
};

// Breadth-first closure of S under the generators.  Permutations preserve
// popcount, so the orbit stays inside one weight level.
inline OrbitResult orbit(mask_t S, const GroupSpec& G, bool keep_elements = true) {
    detail::validate_group(G);
    if (S & ~full_mask(G.n)) throw input_error("set outside the group's domain");
    std::unordered_set<mask_t> seen{S};
    std::vector<mask_t> frontier{S};
    while (!frontier.empty()) {
        std::vector<mask_t> next;
        for (mask_t cur : frontier)
            for (const auto& gen : G.generators) {
                mask_t img = detail::permute_mask(cur, gen);
                if (seen.insert(img).second) next.push_back(img);
            }
        frontier = std::move(next);
    }
    OrbitResult r;
    r.size = static_cast<long long>(seen.size());
    if (keep_elements) {
        r.elements.assign(seen.begin(), seen.end());
        std::sort(r.elements.begin(), r.elements.end());
    }
    return r;
}

// ---- the largest all-orbits-big size --------------------------------------

struct OrbitReport {
    int n = 0;
    int s_max = 0;
    long double t = 0;
    std::vector<long long> min_orbit;  // min_orbit[s-1] = min over |S| = s
    int value = 0;                     // the parameter a_t(G), capped at s_max
    bool saturated = false;            // condition still holds at s_max
    std::vector<long double> margin;   // ln(min_orbit[s-1]) - ln2 t s ln(K)
    std::string params;
};

// Largest K <= s_max such that every nonempty S with |S| <= K has
// |orbit(S)| >= 2^{t |S| ln K}.  K = 1 makes the requirement vacuous
// (threshold 1), so candidates start at 2 and the value 0 means even K = 2
// fails.  Orbits are enumerated exhaustively per weight level with
// memoization: each set is visited once, since orbits partition the level.
inline OrbitReport a_parameter(const GroupSpec& G, long double t, int s_max) {
    detail::validate_group(G);
    if (s_max < 1 || s_max > G.n) throw input_error("size cap outside [1, n]");
    long long work = 0;
    for (int s = 1; s <= s_max; ++s) work += binomial(G.n, s);
    if (work > 5'000'000) throw resource_error("orbit enumeration beyond the level cap");

    OrbitReport rep;
    rep.n = G.n;
    rep.s_max = s_max;
    rep.t = t;
    rep.min_orbit.assign(s_max, 0);
    for (int s = 1; s <= s_max; ++s) {
        std::unordered_set<mask_t> visited;
        long long best = -1;
        for_each_of_weight(G.n, s, [&](mask_t S) {
            if (visited.count(S)) return;
            OrbitResult o = orbit(S, G);
            for (mask_t q : o.elements) visited.insert(q);
            if (best < 0 || o.size < best) best = o.size;
        });
        rep.min_orbit[s - 1] = best;
    }

    const long double ln2 = std::log(2.0L);
    auto holds_at = [&](int k) {
        for (int s = 1; s <= k; ++s) {
            long double need = ln2 * t * s * std::log(static_cast<long double>(k));
            if (std::log(static_cast<long double>(rep.min_orbit[s - 1])) <
                need - 1e-12L)
                return false;
        }
        return true;
    };
    for (int k = 2; k <= s_max; ++k)
        if (holds_at(k)) rep.value = k;
    rep.saturated = rep.value == s_max;

    int k_eval = std::max(rep.value, 2);
    rep.margin.resize(s_max);
    for (int s = 1; s <= s_max; ++s)
        rep.margin[s - 1] =
            std::log(static_cast<long double>(rep.min_orbit[s - 1])) -
            ln2 * t * s * std::log(static_cast<long double>(k_eval));

    rep.params = "n=" + std::to_string(G.n) + " t=" +
                 std::to_string(static_cast<double>(t)) +
                 " sMax=" + std::to_string(s_max) +
                 " value=" + std::to_string(rep.value) +
                 (rep.saturated ? " saturated" : "");
    return rep;
}

// ---- influence lower bound for symmetric functions ------------------------

// Verify f is symmetric under every generator, then check
// I[f] >= c * a_t(G) * var(f) together with the witness-level bound
// |f^(S*)| <= sqrt(var) / sqrt(|orbit(S*)|) at the witness from the
// near-maximal coefficient search.
inline InequalityReport bk_check(const BooleanFunction& f, const GroupSpec& G,
                                 long double c, long double t, int s_max = 6) {
    detail::validate_group(G);
    if (f.n != G.n) throw input_error("group degree does not match the function");
    for (std::size_t k = 0; k < G.generators.size(); ++k)
        for (mask_t x = 0; x < f.size(); ++x) {
            mask_t y = detail::permute_mask(x, G.generators[k]);
            if (f(x) != f(y))
                throw input_error("function is not symmetric under generator " +
                                  std::to_string(k + 1) + " at x=" +
                                  mask_to_string(x));
        }

    WitnessReport w = min_entropy_witness(f);
    OrbitReport a = a_parameter(G, t, s_max);
    OrbitResult orb = orbit(w.witness, G, false);

    InequalityReport r;
    r.lemma = "bk-influence";
    r.exact = false;
    InfluenceProfile p = influence_profile(RealFunction(f));
    long double var = p.variance.to_long_double();
    r.lhs = c * a.value * var;
    r.rhs = p.total.to_long_double();
    r.slack = r.rhs - r.lhs;
    r.term1 = w.witness_value;
    r.term2 = std::sqrt(var) / std::sqrt(static_cast<long double>(orb.size));
    r.pass = within_relative(r.lhs, r.rhs) && within_relative(r.term1, r.term2);
    r.witness = mask_to_string(w.witness);
    r.params = "c=" + std::to_string(static_cast<double>(c)) +
               " t=" + std::to_string(static_cast<double>(t)) +
               " a=" + std::to_string(a.value) +
               " sMax=" + std::to_string(s_max) +
               " orbit=" + std::to_string(orb.size);
    return r;
}

}  // namespace bfa
