#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/rng.hpp"

namespace bfa {

// Query access to a target function for the sampling-based estimators.
// Three sources: an exact truth table, the same table behind a per-point
// label-flip channel (labels are pinned by hashing (seed, x), so repeated
// queries agree), and a real-valued sparse character combination that serves
// as synthetic ground truth. Values are served in the +-1 convention, labels
// in 0/1; every call counts one query.
class MembershipOracle {
public:
    static MembershipOracle exact(BooleanFunction f) {
        MembershipOracle o;
        o.kind_ = Kind::table;
        o.f_ = std::move(f);
        o.n_ = o.f_.n;
        return o;
    }

    static MembershipOracle noisy(BooleanFunction f, long double flip_rate,
                                  std::uint64_t noise_seed) {
        if (!(flip_rate >= 0 && flip_rate < 1))
            throw input_error("flip rate must lie in [0, 1)");
        MembershipOracle o = exact(std::move(f));
        o.kind_ = Kind::noisy;
        o.rho_ = flip_rate;
        o.noise_seed_ = noise_seed;
        return o;
    }

    // Target sum_S c_S chi_S given by its coefficient list; duplicate masks
    // fold by addition.
    static MembershipOracle synthetic(int n,
                                      const std::vector<std::pair<mask_t, long double>>& terms) {
        if (n < 1 || n > 30) throw input_error("coordinate count must lie in [1, 30]");
        MembershipOracle o;
        o.kind_ = Kind::synthetic;
        o.n_ = n;
        std::map<mask_t, long double> fold;
        for (const auto& [s, c] : terms) {
            if ((s & ~full_mask(n)) != 0)
                throw input_error("term mask has coordinates outside the domain");
            fold[s] += c;
        }
        o.range_ = 0;
        o.mass_ = 0;
        for (const auto& [s, c] : fold) {
            if (c == 0) continue;
            o.terms_.emplace_back(s, c);
            o.range_ += std::fabs(c);
            o.mass_ += c * c;
        }
        return o;
    }

    int n() const { return n_; }
    bool boolean() const { return kind_ != Kind::synthetic; }
    long long queries() const { return count_; }
    long double flip_rate() const { return rho_; }

    // Sup-norm bound on served values; 1 for Boolean sources.
    long double range() const { return range_; }
    // Upper bound on the total squared coefficient mass; 1 for Boolean sources.
    long double mass_bound() const { return mass_; }

    // +-1 view (real value for synthetic sources).
    long double pm(mask_t x) {
        ++count_;
        switch (kind_) {
            case Kind::table:
                return f_.table[x] ? -1.0L : 1.0L;
            case Kind::noisy:
                return noisy_label(x) ? -1.0L : 1.0L;
            default: {
                long double acc = 0;
                for (const auto& [s, c] : terms_) acc += c * sign_parity(s, x);
                return acc;
            }
        }
    }

    // 0/1 view; synthetic sources label 1 where the served value is negative.
    int label(mask_t x) {
        ++count_;
        switch (kind_) {
            case Kind::table:
                return f_.table[x];
            case Kind::noisy:
                return noisy_label(x);
            default: {
                long double acc = 0;
                for (const auto& [s, c] : terms_) acc += c * sign_parity(s, x);
                return acc < 0 ? 1 : 0;
            }
        }
    }

    const BooleanFunction& table() const {
        if (kind_ == Kind::synthetic)
            throw input_error("synthetic source has no truth table");
        return f_;
    }

private:
    enum class Kind { table, noisy, synthetic };

    int noisy_label(mask_t x) const {
        const bool flip =
            static_cast<double>(hash_mix(noise_seed_, x) >> 11) * 0x1.0p-53 < rho_;
        return f_.table[x] ^ (flip ? 1 : 0);
    }

    Kind kind_ = Kind::table;
    BooleanFunction f_;
    std::vector<std::pair<mask_t, long double>> terms_;
    int n_ = 0;
    long double rho_ = 0;
    std::uint64_t noise_seed_ = 0;
    long double range_ = 1;
    long double mass_ = 1;
    long long count_ = 0;
};

namespace detail {

// In-place unnormalized Walsh transform: a[c] <- sum_w a[w] (-1)^{|c & w|}.
inline void walsh_bins(std::vector<double>& a) {
    for (std::size_t len = 1; len < a.size(); len <<= 1)
        for (std::size_t i = 0; i < a.size(); i += len << 1)
            for (std::size_t j = i; j < i + len; ++j) {
                const double u = a[j];
                const double v = a[j + len];
                a[j] = u + v;
                a[j + len] = u - v;
            }
}

// Two-sided Hoeffding sample count for means of [-bound, bound] variables:
// enough draws that the mean misses by more than `accuracy` with probability
// at most `delta`.
inline long long hoeffding_samples(long double bound, long double accuracy, long double delta) {
    const long double s = 2.0L * bound * bound * std::log(2.0L / delta) / (accuracy * accuracy);
    if (!(s < 9.0e17L)) return 1LL << 60;
    return std::max<long long>(1, static_cast<long long>(std::ceil(s)));
}

}  // namespace detail

// Paired-sample estimate of the prefix bucket weight
// W(k, beta) = sum over S with S cap {1..k} = beta of fhat(S)^2.
struct BucketEstimate {
    long double value = 0;
    long double std_error = 0;
    long long samples = 0;
};

// Unbiased: with shared suffix z, E[f(y,z) f(y',z) chi_beta(y) chi_beta(y')]
// equals W(k, beta). Costs two queries per sample.
inline BucketEstimate bucket_weight(MembershipOracle& oracle, int k, mask_t beta,
                                    long long samples, std::uint64_t seed) {
    const int n = oracle.n();
    if (k < 0 || k > n) throw input_error("prefix length outside [0, n]");
    const mask_t ymask = full_mask(k);
    if ((beta & ~ymask) != 0) throw input_error("bucket index has bits outside the prefix");
    if (samples < 1) throw input_error("sample count must be >= 1");
    const mask_t zmask = full_mask(n - k);
    Rng rng(seed);
    long double sum = 0;
    long double sumsq = 0;
    for (long long i = 0; i < samples; ++i) {
        const mask_t y = static_cast<mask_t>(rng.next_u64()) & ymask;
        const mask_t yp = static_cast<mask_t>(rng.next_u64()) & ymask;
        const mask_t z = static_cast<mask_t>(rng.next_u64()) & zmask;
        const long double prod = oracle.pm(y | (z << k)) * oracle.pm(yp | (z << k)) *
                                 sign_parity(y, beta) * sign_parity(yp, beta);
        sum += prod;
        sumsq += prod * prod;
    }
    const long double mean = sum / samples;
    long double var = 0;
    if (samples > 1)
        var = std::max(0.0L, (sumsq - samples * mean * mean) / (samples - 1));
    return {mean, std::sqrt(var / samples), samples};
}

// Recursive prefix search for heavy characters. Coordinates are fixed in
// natural order; a prefix bucket survives when its estimated weight reaches
// theta^2/2. Intermediate levels are sampled to accuracy theta^2/2 (enough
// to never lose a bucket holding a theta-heavy character) and the final
// level to theta^2/4, so with probability >= confidence the output contains
// every S with |fhat(S)| >= theta and nothing with |fhat(S)| < theta/2.
// Each level estimates all children from one paired-sample batch binned by
// y xor y', so sample cost does not grow with the survivor count. Throws
// resource_error before any level whose batch would push the oracle past
// `budget` queries.
inline std::vector<mask_t> km_search(MembershipOracle& oracle, long double theta,
                                     long double confidence, long long budget,
                                     std::uint64_t seed) {
    if (!(theta > 0)) throw input_error("character threshold must be positive");
    if (!(confidence > 0 && confidence < 1))
        throw input_error("confidence must lie strictly between 0 and 1");
    if (budget < 1) throw input_error("query budget must be positive");
    const int n = oracle.n();
    if (n > 22) throw resource_error("prefix search supports up to 22 coordinates");

    const long double keep = theta * theta / 2;
    const long long max_keep = std::max<long long>(
        1, static_cast<long long>(std::ceil(4 * oracle.mass_bound() / (theta * theta))));
    const long double delta =
        (1 - confidence) / (2.0L * n * static_cast<long double>(max_keep));
    const long double bound = oracle.range() * oracle.range();
    const long long start = oracle.queries();

    std::vector<mask_t> live{0};
    for (int level = 0; level < n && !live.empty(); ++level) {
        const bool last = (level == n - 1);
        const long double accuracy = last ? theta * theta / 4 : keep;
        const long long s = detail::hoeffding_samples(bound, accuracy, delta);
        const long long used = oracle.queries() - start;
        if (used > budget - 2 * s)
            throw resource_error("query budget exceeded: level " + std::to_string(level + 1) +
                                 " needs " + std::to_string(2 * s) + " queries with " +
                                 std::to_string(budget - used) + " left");
        const int bits = level + 1;
        const mask_t ymask = full_mask(bits);
        const mask_t zmask = full_mask(n - bits);
        std::vector<double> bins(std::size_t{1} << bits, 0.0);
        Rng rng = Rng(seed).derive(static_cast<std::uint64_t>(level) + 1);
        for (long long i = 0; i < s; ++i) {
            const mask_t y = static_cast<mask_t>(rng.next_u64()) & ymask;
            const mask_t yp = static_cast<mask_t>(rng.next_u64()) & ymask;
            const mask_t z = static_cast<mask_t>(rng.next_u64()) & zmask;
            bins[y ^ yp] +=
                static_cast<double>(oracle.pm(y | (z << bits)) * oracle.pm(yp | (z << bits)));
        }
        detail::walsh_bins(bins);
        std::vector<std::pair<long double, mask_t>> kept;
        const mask_t high = mask_t{1} << level;
        for (const mask_t b : live)
            for (const mask_t child : {b, b | high}) {
                const long double est = static_cast<long double>(bins[child]) / s;
                if (est >= keep) kept.emplace_back(est, child);
            }
        std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (kept.size() > static_cast<std::size_t>(max_keep)) kept.resize(max_keep);
        live.clear();
        for (const auto& e : kept) live.push_back(e.second);
        std::sort(live.begin(), live.end());
    }
    return live;
}

// Polynomial with explicit character support.
struct SparsePolynomial {
    int n = 0;
    std::map<mask_t, long double> coeff;
    long double l1_weight = 0;
    int sparsity = 0;

    // Drop exact-zero entries and recompute the cached weight and count.
    void refresh() {
        std::erase_if(coeff, [](const auto& e) { return e.second == 0.0L; });
        l1_weight = 0;
        for (const auto& [s, c] : coeff) l1_weight += std::fabs(c);
        sparsity = static_cast<int>(coeff.size());
    }

    long double value(mask_t x) const {
        long double acc = 0;
        for (const auto& [s, c] : coeff) acc += c * sign_parity(s, x);
        return acc;
    }
};

// 0/1-convention prediction: 1 when the polynomial clears 1/2.
inline int threshold_label(const SparsePolynomial& p, mask_t x) {
    return p.value(x) >= 0.5L ? 1 : 0;
}

// Sparse fit over a fixed mask set in the +-1 view. `tau` is the additive
// accuracy every coefficient meets simultaneously with probability 0.95
// (two-sided Hoeffding at the given sample count); `residual` estimates
// ||f - p||_2 from a fresh batch of the same size.
struct ApproxResult {
    SparsePolynomial poly;
    long double tau = 0;
    long double residual = 0;
    long long samples = 0;
};

// Costs 2 * samples queries: one batch shared by every coefficient estimate
// and one fresh batch for the residual. An empty mask set yields the zero
// polynomial (the residual then estimates ||f||_2).
inline ApproxResult build_sparse_approx(MembershipOracle& oracle,
                                        const std::vector<mask_t>& masks, long long samples,
                                        std::uint64_t seed) {
    if (samples < 1) throw input_error("sample count must be >= 1");
    const int n = oracle.n();
    if (n > 22) throw resource_error("sparse fitting supports up to 22 coordinates");
    std::vector<mask_t> sets(masks);
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    if (!sets.empty() && (sets.back() & ~full_mask(n)) != 0)
        throw input_error("mask has coordinates outside the domain");

    ApproxResult out;
    out.poly.n = n;
    out.samples = samples;
    const mask_t xmask = full_mask(n);

    // One Walsh pass turns per-point value sums into every character sum at
    // once, so the batch is shared by all coefficients.
    std::vector<double> tally(std::size_t{1} << n, 0.0);
    Rng crng = Rng(seed).derive(1);
    for (long long i = 0; i < samples; ++i) {
        const mask_t x = static_cast<mask_t>(crng.next_u64()) & xmask;
        tally[x] += static_cast<double>(oracle.pm(x));
    }
    detail::walsh_bins(tally);
    for (const mask_t s : sets)
        out.poly.coeff[s] = static_cast<long double>(tally[s]) / samples;
    out.poly.refresh();
    const long double m = static_cast<long double>(std::max<std::size_t>(1, sets.size()));
    out.tau = oracle.range() * std::sqrt(2.0L * std::log(2.0L * m / 0.05L) / samples);

    // Synthesize p on the table once, then sample the residual by lookup.
    std::vector<double> ptable(std::size_t{1} << n, 0.0);
    for (const auto& [s, c] : out.poly.coeff) ptable[s] = static_cast<double>(c);
    detail::walsh_bins(ptable);
    Rng rrng = Rng(seed).derive(2);
    long double rsum = 0;
    for (long long i = 0; i < samples; ++i) {
        const mask_t x = static_cast<mask_t>(rrng.next_u64()) & xmask;
        const long double d = oracle.pm(x) - static_cast<long double>(ptable[x]);
        rsum += d * d;
    }
    out.residual = std::sqrt(std::max(0.0L, rsum / samples));
    return out;
}

// Disagreement between the thresholded polynomial and a reference.
struct ErrorEstimate {
    long double value = 0;
    long double sigma = 0;
    long long samples = 0;
    bool exact = false;
};

inline ErrorEstimate hypothesis_error(const SparsePolynomial& p, const BooleanFunction& ref) {
    if (p.n != ref.n) throw input_error("coordinate count mismatch");
    long long diff = 0;
    for (mask_t x = 0; x < ref.size(); ++x)
        diff += threshold_label(p, x) != ref(x) ? 1 : 0;
    return {static_cast<long double>(diff) / ref.size(), 0.0L,
            static_cast<long long>(ref.size()), true};
}

inline ErrorEstimate hypothesis_error(const SparsePolynomial& p, MembershipOracle& oracle,
                                      long long samples, std::uint64_t seed) {
    if (p.n != oracle.n()) throw input_error("coordinate count mismatch");
    if (samples < 1) throw input_error("sample count must be >= 1");
    Rng rng(seed);
    const mask_t xmask = full_mask(oracle.n());
    long long diff = 0;
    for (long long i = 0; i < samples; ++i) {
        const mask_t x = static_cast<mask_t>(rng.next_u64()) & xmask;
        diff += threshold_label(p, x) != oracle.label(x) ? 1 : 0;
    }
    const long double est = static_cast<long double>(diff) / samples;
    return {est, std::sqrt(std::max(0.0L, est * (1 - est) / samples)), samples, false};
}

// Calibrated exponent behind the search threshold theta = (1+K)^(-cal*K),
// and the fixed confidence the search runs at.
inline constexpr long double kAgnosticCal = 1.12L;
inline constexpr long double kSearchConfidence = 0.9L;

struct LearnResult {
    int n = 0;
    long double k_budget = 0;
    long double eps = 0;
    long double theta = 0;
    std::vector<mask_t> masks;
    SparsePolynomial poly;  // 0/1 view backing the hypothesis
    long double tau = 0;
    long double error_estimate = 0;  // disagreement with oracle labels, fresh sample
    long double error_sigma = 0;
    long long queries = 0;
    long long coeff_samples = 0;
    long long error_samples = 0;
    std::uint64_t seed = 0;
    // Fitting method behind the hypothesis; coefficient rounding stands in
    // for the least-squares regression a full pipeline would run.
    std::string regression = "coefficient-rounding";
    std::string params;
};

// Agnostic pipeline: search for characters heavy at theta = (1+K)^(-cal*K),
// fit their coefficients to pointwise-safe accuracy eps / (2 * #masks),
// convert to the 0/1 view, and predict 1 where the polynomial clears 1/2.
// The error estimate is fresh-sample disagreement against the oracle's own
// labels (within eps/8 at the 0.95 level).
inline LearnResult agnostic_learn(MembershipOracle& oracle, long double k_budget,
                                  long double eps, std::uint64_t seed,
                                  long long budget = 1LL << 62) {
    if (!(k_budget >= 1)) throw input_error("influence budget must be >= 1");
    if (!(eps > 0 && eps < 1)) throw input_error("accuracy must lie strictly between 0 and 1");
    LearnResult out;
    out.n = oracle.n();
    out.k_budget = k_budget;
    out.eps = eps;
    out.seed = seed;
    out.theta = std::pow(1.0L + k_budget, -kAgnosticCal * k_budget);
    const long long start = oracle.queries();

    out.masks = km_search(oracle, out.theta, kSearchConfidence, budget, hash_mix(seed, 1));
    // The constant term is always fitted: its bucket is the never-tested root.
    if (!std::binary_search(out.masks.begin(), out.masks.end(), mask_t{0}))
        out.masks.insert(out.masks.begin(), 0);

    const long double m = static_cast<long double>(out.masks.size());
    const long double tau_target = eps / (2.0L * m);
    out.coeff_samples = detail::hoeffding_samples(oracle.range(), tau_target, 0.05L / m);
    long long used = oracle.queries() - start;
    if (used > budget - 2 * out.coeff_samples)
        throw resource_error("query budget exceeded: coefficient fit needs " +
                             std::to_string(2 * out.coeff_samples) + " queries with " +
                             std::to_string(budget - used) + " left");
    const ApproxResult fit =
        build_sparse_approx(oracle, out.masks, out.coeff_samples, hash_mix(seed, 2));
    out.tau = fit.tau;

    // 0/1 view of the fitted polynomial: g01 = (1 - g_pm) / 2.
    out.poly.n = out.n;
    for (const auto& [s, c] : fit.poly.coeff) out.poly.coeff[s] = -c / 2;
    out.poly.coeff[0] += 0.5L;
    out.poly.refresh();

    out.error_samples = std::max<long long>(
        1, static_cast<long long>(std::ceil(32.0L * std::log(40.0L) / (eps * eps))));
    used = oracle.queries() - start;
    if (used > budget - out.error_samples)
        throw resource_error("query budget exceeded: error estimate needs " +
                             std::to_string(out.error_samples) + " queries with " +
                             std::to_string(budget - used) + " left");
    const ErrorEstimate err =
        hypothesis_error(out.poly, oracle, out.error_samples, hash_mix(seed, 3));
    out.error_estimate = err.value;
    out.error_sigma = err.sigma;
    out.queries = oracle.queries() - start;
    out.params = "cal=" + std::to_string(static_cast<double>(kAgnosticCal)) +
                 " confidence=" + std::to_string(static_cast<double>(kSearchConfidence)) +
                 " theta=" + std::to_string(static_cast<double>(out.theta)) +
                 " coeffSamples=" + std::to_string(out.coeff_samples) +
                 " errorSamples=" + std::to_string(out.error_samples);
    return out;
}

}  // namespace bfa
