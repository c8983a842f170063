#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/rng.hpp"
#include "bfa/spectrum.hpp"

namespace bfa {

// A labeling of the n coordinates into m disjoint parts (0-based part ids).
struct Partition {
    int n = 0;
    int m = 1;
    std::vector<int> label;

    Partition() = default;
    Partition(int n_, int m_, std::vector<int> label_)
        : n(n_), m(m_), label(std::move(label_)) {
        if (n < 1 || m < 1) throw input_error("partition needs n >= 1, m >= 1");
        if (label.size() != std::size_t(n))
            throw input_error("partition label count differs from n");
        for (int v : label)
            if (v < 0 || v >= m) throw input_error("partition label outside [m]");
    }

    static Partition single(int n) { return Partition(n, 1, std::vector<int>(n, 0)); }

    mask_t part_mask(int j) const {
        mask_t out = 0;
        for (int i = 0; i < n; ++i)
            if (label[i] == j) out |= mask_t{1} << i;
        return out;
    }

    // |S cap I_j| for every part.
    std::vector<int> intersection_counts(mask_t S) const {
        std::vector<int> c(m, 0);
        for (int i = 0; i < n; ++i)
            if (S & (mask_t{1} << i)) ++c[label[i]];
        return c;
    }
};

// Each coordinate picks its part independently and uniformly.
inline Partition sample_partition(int n, int m, std::uint64_t seed) {
    if (n < 1 || m < 1) throw input_error("partition needs n >= 1, m >= 1");
    Rng rng = Rng(seed).derive(0x70617274ULL);
    std::vector<int> label(n);
    for (int i = 0; i < n; ++i) label[i] = static_cast<int>(rng.below(m));
    return Partition(n, m, std::move(label));
}

// A function whose spectrum is supported on alpha*d <= |S| <= d, certified at
// construction time in exact arithmetic.
struct AlmostHomogeneous {
    RealFunction g;
    Spectrum sg;
    Frac alpha;
    int d = 0;

    AlmostHomogeneous(RealFunction g_, Frac alpha_, int d_)
        : g(std::move(g_)), sg(spectrum(g)), alpha(alpha_), d(d_) {
        if (d < 1) throw input_error("homogeneity degree must be >= 1");
        if (alpha.sign() <= 0 || Frac(1) < alpha)
            throw input_error("homogeneity factor must be in (0, 1]");
        for (mask_t S = 0; S < sg.size(); ++S) {
            if (sg.num[S] == 0) continue;
            int w = popcount(S);
            // alpha * d <= w <= d, compared exactly.
            if (w > d || Frac(w) < alpha * Frac(d))
                throw input_error("support outside the homogeneity window at " +
                                  mask_to_string(S));
        }
    }
};

// The sieve window: S is kept when alpha*d <= |S| <= d and, for every part,
// (1-2eps)*alpha*(1+eps)*d/m <= |S cap I_j| <= (1+eps)*d/m. All comparisons
// are exact rational arithmetic; boundary cases are members.
struct GoodCharacterSet {
    Partition partition;
    int d;
    Frac alpha, eps;
    Frac part_lower, part_upper;  // window endpoints for each |S cap I_j|

    GoodCharacterSet(Partition I, int d_, Frac alpha_, Frac eps_)
        : partition(std::move(I)), d(d_), alpha(alpha_), eps(eps_) {
        if (d < 1) throw input_error("sieve degree must be >= 1");
        if (alpha.sign() <= 0 || Frac(1) < alpha)
            throw input_error("sieve alpha must be in (0, 1]");
        if (eps.sign() <= 0 || !(eps < Frac(1)))
            throw input_error("sieve eps must be in (0, 1)");
        Frac dm = Frac(d, partition.m);
        part_upper = (Frac(1) + eps) * dm;
        part_lower = (Frac(1) - eps - eps) * alpha * part_upper;
    }

    bool member(mask_t S) const {
        int w = popcount(S);
        if (w > d || Frac(w) < alpha * Frac(d)) return false;
        for (int c : partition.intersection_counts(S)) {
            Frac fc(c);
            if (fc < part_lower || part_upper < fc) return false;
        }
        return true;
    }

    // The equal-split sieve: |S| = d and every part receives exactly v = d/m.
    bool exact_split_member(mask_t S) const {
        if (partition.m < 1 || d % partition.m != 0) return false;
        if (popcount(S) != d) return false;
        int v = d / partition.m;
        for (int c : partition.intersection_counts(S))
            if (c != v) return false;
        return true;
    }
};

inline GoodCharacterSet good_character_set(Partition I, int d, Frac alpha, Frac eps) {
    return GoodCharacterSet(std::move(I), d, alpha, eps);
}

// ---- split probability experiment ------------------------------------------

// Empirical behaviour of a random partition against a size-d set: how often
// every part count lands in the sieve window, and how often the split is
// exactly even. Rates are compared against the analytic lower bounds
//   window (per part):   1 - 2 exp(-eps^2 d / (3m))
//   window (all parts):  1 - 2m exp(-eps^2 d / (3m))
//   exact split:         (1 / (16 sqrt(v)))^{d/v},  v = d/m integer.
// A pass allows five standard errors of Monte Carlo slack.
struct SplitProbabilityReport {
    int d = 0, m = 0;
    Frac alpha, eps;
    long long trials = 0;
    std::uint64_t seed = 0;
    long long window_hits = 0;
    long long split_hits = 0;
    bool split_defined = false;  // v = d/m is an integer
    int v = 0;
    long double window_rate = 0, split_rate = 0;
    long double stated_window_bound = 0;  // without the union factor m
    long double union_window_bound = 0;   // with it
    long double split_bound = 0;
    bool window_pass = false;         // vs the union bound
    bool window_pass_stated = false;  // vs the per-part bound
    bool split_pass = false;
};

namespace detail {

inline long double monte_carlo_sigma(long double rate, long long trials) {
    return std::sqrt(rate * (1 - rate) / trials) + 1.0L / trials;
}

}  // namespace detail

inline SplitProbabilityReport split_probability_check(int d, int m, Frac alpha,
                                                      Frac eps, long long trials,
                                                      std::uint64_t seed) {
    if (d < 1 || m < 1) throw input_error("split check needs d >= 1, m >= 1");
    if (trials < 1) throw input_error("split check needs trials >= 1");
    SplitProbabilityReport r;
    r.d = d;
    r.m = m;
    r.alpha = alpha;
    r.eps = eps;
    r.trials = trials;
    r.seed = seed;
    r.split_defined = (d % m == 0);
    r.v = r.split_defined ? d / m : 0;

    Frac dm = Frac(d, m);
    Frac upper = (Frac(1) + eps) * dm;
    Frac lower = (Frac(1) - eps - eps) * alpha * upper;

    Rng rng = Rng(seed).derive(0x73706c69ULL);
    std::vector<int> count(m);
    for (long long t = 0; t < trials; ++t) {
        std::fill(count.begin(), count.end(), 0);
        for (int i = 0; i < d; ++i) ++count[rng.below(m)];
        bool window = true, split = r.split_defined;
        for (int j = 0; j < m; ++j) {
            Frac fc(count[j]);
            if (fc < lower || upper < fc) window = false;
            if (count[j] != r.v) split = false;
        }
        r.window_hits += window;
        r.split_hits += split;
    }

    r.window_rate = static_cast<long double>(r.window_hits) / trials;
    r.split_rate = static_cast<long double>(r.split_hits) / trials;
    long double decay =
        std::exp(-eps.to_long_double() * eps.to_long_double() * d / (3.0L * m));
    r.stated_window_bound = 1 - 2 * decay;
    r.union_window_bound = 1 - 2 * m * decay;
    if (r.split_defined)
        r.split_bound = std::exp((static_cast<long double>(d) / r.v) *
                                 (-std::log(16.0L) - 0.5L * std::log(static_cast<long double>(r.v))));

    long double sw = detail::monte_carlo_sigma(r.window_rate, trials);
    r.window_pass = r.window_rate + 5 * sw >= r.union_window_bound;
    r.window_pass_stated = r.window_rate + 5 * sw >= r.stated_window_bound;
    if (r.split_defined) {
        long double ss = detail::monte_carlo_sigma(r.split_rate, trials);
        r.split_pass = r.split_rate + 5 * ss >= r.split_bound;
    }
    return r;
}

// ---- best-of-R partition search ---------------------------------------------

enum class SieveMode { window, exact_split };

struct PartitionSearch {
    Partition partition;
    SieveMode mode = SieveMode::window;
    int attempts = 0;
    long double ratio = 0;   // sieved / total coefficient-product mass, in [0,1]
    bool ratio_exact_one = false;
    bool total_zero = false;
    long double bound = 0;   // analytic guarantee for a random partition
    bool meets_bound = false;
};

namespace detail {

// sum over S in the sieve of |f^(S) g^(S)|, as an integer numerator (the
// common denominator cancels in the ratio).
template <class Keep>
inline int128 sieved_product_mass(const Spectrum& sf, const Spectrum& sg, Keep&& keep) {
    int128 acc = 0;
    for (mask_t S = 0; S < sf.size(); ++S) {
        if (sf.num[S] == 0 || sg.num[S] == 0) continue;
        if (!keep(S)) continue;
        int128 p = int128{sf.num[S]} * sg.num[S];
        acc += p < 0 ? -p : p;
    }
    return acc;
}

}  // namespace detail

// Draw `attempts` partitions and keep the one retaining the most
// |f^ g^| mass through the sieve; compare with the guarantee for the mode:
//   window:      1 - 2m exp(-eps^2 alpha d / (3m))
//   exact_split: (1/(16 sqrt v))^{d/v} with v = d/m (g must be d-homogeneous).
inline PartitionSearch find_good_partition(const Spectrum& sf, const AlmostHomogeneous& g,
                                           int m, Frac eps, int attempts,
                                           std::uint64_t seed,
                                           SieveMode mode = SieveMode::window) {
    if (sf.n != g.sg.n) throw input_error("partition search on different cubes");
    if (m < 1) throw input_error("partition search needs m >= 1");
    if (attempts < 1) throw input_error("partition search needs attempts >= 1");
    if (mode == SieveMode::exact_split) {
        if (g.d % m != 0)
            throw input_error("exact split needs m dividing the degree");
        if (g.alpha < Frac(1))
            throw input_error("exact split needs a degree-homogeneous function");
    }

    int128 total = detail::sieved_product_mass(sf, g.sg, [](mask_t) { return true; });

    PartitionSearch best;
    best.mode = mode;
    best.attempts = attempts;
    best.total_zero = (total == 0);

    int128 best_good = -1;
    for (int a = 0; a < attempts; ++a) {
        Partition I = sample_partition(sf.n, m, hash_mix(seed, 0x66677000ULL + a));
        int128 good;
        if (mode == SieveMode::window) {
            GoodCharacterSet G(I, g.d, g.alpha, eps);
            good = detail::sieved_product_mass(sf, g.sg,
                                               [&](mask_t S) { return G.member(S); });
        } else {
            int v = g.d / m;
            good = detail::sieved_product_mass(sf, g.sg, [&](mask_t S) {
                if (popcount(S) != g.d) return false;
                for (int c : I.intersection_counts(S))
                    if (c != v) return false;
                return true;
            });
        }
        if (good > best_good) {
            best_good = good;
            best.partition = std::move(I);
        }
        if (best_good == total) break;  // cannot improve
    }

    if (best.total_zero) {
        best.ratio = 1;
        best.ratio_exact_one = true;
    } else {
        best.ratio = static_cast<long double>(best_good) / static_cast<long double>(total);
        best.ratio_exact_one = (best_good == total);
    }

    if (mode == SieveMode::window) {
        long double decay = std::exp(-eps.to_long_double() * eps.to_long_double() *
                                     g.alpha.to_long_double() * g.d / (3.0L * m));
        best.bound = 1 - 2 * m * decay;
    } else {
        int v = g.d / m;
        best.bound = std::exp((static_cast<long double>(g.d) / v) *
                              (-std::log(16.0L) - 0.5L * std::log(static_cast<long double>(v))));
    }
    best.meets_bound = best.ratio_exact_one || best.ratio >= best.bound - 1e-12L;
    return best;
}

inline PartitionSearch find_good_partition(const RealFunction& f, const AlmostHomogeneous& g,
                                           int m, Frac eps, int attempts,
                                           std::uint64_t seed,
                                           SieveMode mode = SieveMode::window) {
    return find_good_partition(spectrum(f), g, m, eps, attempts, seed, mode);
}

}  // namespace bfa
