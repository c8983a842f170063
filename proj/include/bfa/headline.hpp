#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bfa/bits.hpp"
#include "bfa/calculus.hpp"
#include "bfa/dyadic.hpp"
#include "bfa/errors.hpp"
#include "bfa/function.hpp"
#include "bfa/measures.hpp"
#include "bfa/report.hpp"
#include "bfa/spectrum.hpp"

namespace bfa {

// Fitted-constant statements about a single Boolean function: every
// quantity is computed on the 0/1 representation, exponents use natural
// logarithms, and thresholds are parameterized so the fitted constant
// absorbs the log base.

namespace detail {

// c(S) solving |f^(S)| / sqrt(var) = (1 + itilde)^{-c |S| }, i.e. the
// constant that the near-maximal-coefficient statement would need for S.
inline long double fitted_set_constant(long double ratio, int set_size,
                                       long double itilde) {
    long double c = -std::log(ratio) / (static_cast<long double>(set_size) *
                                        std::log1p(itilde));
    return c < 0 ? 0.0L : c;  // ratio <= 1 up to rounding noise
}

}  // namespace detail

// ---- near-maximal coefficient witness ---------------------------------

struct WitnessReport {
    int n = 0;
    long double variance = 0;
    long double itilde = 0;      // I[f] / var(f)
    long double size_cap = 0;    // eligibility bound 10 * itilde on |S|
    bool found = false;
    mask_t witness = 0;          // largest |f^(S)| among eligible sets
    int witness_size = 0;
    long double witness_value = 0;  // |f^(witness)|
    long double ratio = 0;          // |f^(witness)| / sqrt(var)
    long double c_star = 0;         // fitted constant at the witness
    mask_t argmin = 0;              // eligible set with the smallest constant
    long double c_min = 0;
    std::string params;
};

// Search S != {} with |S| <= 10 I[f]/var(f) and f^(S) != 0.  The witness is
// the set of largest |f^(S)| (ties: smaller |S|, then lower mask), and
// c_star is its fitted constant; c_min/argmin record the outright smallest
// constant in the window.  The window is never empty for non-constant f:
// the spectral average of |S| over nonempty sets is exactly itilde, so some
// nonzero coefficient sits at degree <= itilde.
inline WitnessReport min_entropy_witness(const BooleanFunction& f) {
    Spectrum s = spectrum(f);
    Dyadic var = variance(RealFunction(f));
    if (var.sign() <= 0)
        throw input_error("witness search needs a non-constant function");

    Dyadic infl;
    for (mask_t S = 0; S < s.size(); ++S)
        infl = infl + s.coeff(S) * s.coeff(S) * Dyadic(popcount(S));

    WitnessReport w;
    w.n = f.n;
    w.variance = var.to_long_double();
    w.itilde = infl.to_long_double() / w.variance;
    w.size_cap = 10.0L * w.itilde;
    long double root_var = std::sqrt(w.variance);
    long double log_base = std::log1p(w.itilde);

    long double best = -1;
    long double cmin = 0;
    bool have_min = false;
    for (mask_t S = 1; S < s.size(); ++S) {
        int pc = popcount(S);
        if (static_cast<long double>(pc) > w.size_cap + 1e-12L) continue;
        if (s.is_zero(S)) continue;
        long double v = std::fabs(s.coeff_long_double(S));
        long double c = detail::fitted_set_constant(v / root_var, pc, w.itilde);
        if (v > best || (v == best && pc < w.witness_size)) {
            best = v;
            w.witness = S;
            w.witness_size = pc;
        }
        if (!have_min || c < cmin ||
            (c == cmin && pc < popcount(w.argmin))) {
            have_min = true;
            cmin = c;
            w.argmin = S;
        }
    }
    if (best >= 0) {
        w.found = true;
        w.witness_value = best;
        w.ratio = best / root_var;
        w.c_star = detail::fitted_set_constant(w.ratio, w.witness_size, w.itilde);
        w.c_min = cmin;
    }
    w.params = "n=" + std::to_string(w.n) +
               " itilde=" + std::to_string(static_cast<double>(w.itilde)) +
               " cap=" + std::to_string(static_cast<double>(w.size_cap)) +
               (w.found ? " witness=" + mask_to_string(w.witness) +
                              " argmin=" + mask_to_string(w.argmin)
                        : " witness=none") +
               " logBase=" + std::to_string(static_cast<double>(log_base));
    return w;
}

// ---- concentration of small coefficients -------------------------------

struct ConcentrationReport {
    int n = 0;
    long double itilde = 0;
    long double c = 0;
    long double eta = 0;
    long double threshold = 0;  // (1 + itilde)^{-c itilde}
    long double mass = 0;       // sum of f^(S)^2 over |f^(S)| <= threshold
    long double bound = 0;      // eta * var(f)
    long double minimal_c = 0;  // infimum of constants meeting the bound
    bool pass = false;
    std::string params;
};

// Mass of the spectrum sitting at or below (1 + itilde)^{-c itilde},
// compared against eta * var(f).  minimal_c is exact: the mass function
// only jumps at the distinct coefficient magnitudes, so the sweep finds the
// first magnitude whose cumulative mass exceeds the bound and reports the
// constant whose threshold sits at that jump (an infimum; any strictly
// larger constant satisfies the bound).
inline ConcentrationReport concentration_mass(const BooleanFunction& f,
                                              long double c, long double eta) {
    if (eta < 0) throw input_error("concentration bound needs eta >= 0");
    Spectrum s = spectrum(f);
    Dyadic var = variance(RealFunction(f));
    if (var.sign() <= 0)
        throw input_error("concentration check needs a non-constant function");

    Dyadic infl;
    for (mask_t S = 0; S < s.size(); ++S)
        infl = infl + s.coeff(S) * s.coeff(S) * Dyadic(popcount(S));

    ConcentrationReport r;
    r.n = f.n;
    r.itilde = infl.to_long_double() / var.to_long_double();
    r.c = c;
    r.eta = eta;
    long double log_base = std::log1p(r.itilde);
    r.threshold = std::exp(-c * r.itilde * log_base);
    r.bound = eta * var.to_long_double();

    std::map<long double, long double> jump;  // |coefficient| -> its mass
    for (mask_t S = 0; S < s.size(); ++S) {
        if (s.is_zero(S)) continue;
        long double v = std::fabs(s.coeff_long_double(S));
        long double m = (s.coeff(S) * s.coeff(S)).to_long_double();
        jump[v] += m;
        if (v <= r.threshold) r.mass += m;
    }
    r.pass = within_relative(r.mass, r.bound);

    long double cum = 0;
    r.minimal_c = 0;
    for (const auto& [v, m] : jump) {
        cum += m;
        if (!within_relative(cum, r.bound)) {
            long double need = -std::log(v) / (r.itilde * log_base);
            r.minimal_c = need < 0 ? 0.0L : need;
            break;
        }
    }

    r.params = "n=" + std::to_string(r.n) +
               " itilde=" + std::to_string(static_cast<double>(r.itilde)) +
               " c=" + std::to_string(static_cast<double>(c)) +
               " eta=" + std::to_string(static_cast<double>(eta)) +
               " tau=" + std::to_string(static_cast<double>(r.threshold));
    return r;
}

// ---- spectral entropy against the weighted-degree sum ------------------

struct BucketRow {
    int d = 0;      // coefficient degree
    int k = 0;      // magnitude band index
    int count = 0;  // sets in the band
    long double mass = 0;     // sum of f^(S)^2
    long double entropy = 0;  // sum of f^(S)^2 ln(1/f^(S)^2)
};

struct EntropyFitReport {
    int n = 0;
    int degree_cap = -1;
    long double variance = 0;
    long double lhs = 0;           // H[f^{<=D}], every set included
    long double weighted_sum = 0;  // sum |S| ln(|S|+1) f^(S)^2, 1 <= |S| <= D
    long double influence = 0;     // I[f], uncapped
    long double structural = 0;    // weighted_sum + influence
    long double fitted_k = 0;      // lhs / structural
    long double bucket_c = 0;
    std::vector<BucketRow> buckets;
    std::string params;
};

// Spectral entropy of f^{<=D} against the weighted-degree sum plus total
// influence; fitted_k is the constant making the entropy bound tight.  The
// bucket trace splits the nonempty sets of degree d <= D into magnitude
// bands (d+1)^{-c(k+1)d} sqrt(var) < |f^(S)| <= (d+1)^{-ckd} sqrt(var),
// the decomposition the entropy argument sums over.
inline EntropyFitReport entropy_bound_fit(const BooleanFunction& f, int degree_cap = -1,
                                          long double bucket_c = 1.0L) {
    if (bucket_c <= 0) throw input_error("bucket trace needs a positive constant");
    Spectrum s = spectrum(f);
    Dyadic var = variance(RealFunction(f));

    EntropyFitReport r;
    r.n = f.n;
    r.degree_cap = degree_cap;
    r.variance = var.to_long_double();
    r.bucket_c = bucket_c;
    int cap = degree_cap < 0 ? f.n : degree_cap;

    r.lhs = entropy_report(f, degree_cap, RangeConvention::zero_one).entropy;

    Dyadic infl;
    for (mask_t S = 0; S < s.size(); ++S)
        infl = infl + s.coeff(S) * s.coeff(S) * Dyadic(popcount(S));
    r.influence = infl.to_long_double();
    for (mask_t S = 1; S < s.size(); ++S) {
        int pc = popcount(S);
        if (pc > cap || s.is_zero(S)) continue;
        long double m = (s.coeff(S) * s.coeff(S)).to_long_double();
        r.weighted_sum += pc * std::log1p(static_cast<long double>(pc)) * m;
    }
    r.structural = r.weighted_sum + r.influence;
    // lhs > 0 forces a nonzero coefficient, hence structural > 0; the zero
    // spectrum and constants land in the 0/0 convention below.
    r.fitted_k = r.structural > 0 ? r.lhs / r.structural : 0.0L;

    if (var.sign() > 0) {
        long double root_var = std::sqrt(r.variance);
        std::map<std::pair<int, int>, BucketRow> rows;
        for (mask_t S = 1; S < s.size(); ++S) {
            int pc = popcount(S);
            if (pc > cap || s.is_zero(S)) continue;
            long double v = std::fabs(s.coeff_long_double(S));
            long double t = -std::log(v / root_var) /
                            (bucket_c * pc * std::log1p(static_cast<long double>(pc)));
            int k = static_cast<int>(std::floor(t + 1e-12L));
            if (k < 0) k = 0;
            BucketRow& row = rows[{pc, k}];
            row.d = pc;
            row.k = k;
            row.count += 1;
            long double m = (s.coeff(S) * s.coeff(S)).to_long_double();
            row.mass += m;
            row.entropy += m * std::log(1.0L / (v * v));
        }
        r.buckets.reserve(rows.size());
        for (auto& [key, row] : rows) r.buckets.push_back(row);
    }

    r.params = "n=" + std::to_string(r.n) + " cap=" + std::to_string(cap) +
               " bucketC=" + std::to_string(static_cast<double>(bucket_c)) +
               " buckets=" + std::to_string(r.buckets.size());
    return r;
}

// ---- exact identity battery ---------------------------------------------

namespace detail {

inline std::string mask_pair(const char* a, mask_t x, const char* b, mask_t y) {
    return std::string(a) + "=" + mask_to_string(x) + " " + b + "=" +
           mask_to_string(y);
}

// Deterministic restriction sets: the low half of the cube and the odd
// coordinates.  Both exercise compaction; duplicates are dropped.
inline std::vector<mask_t> restriction_masks(int n) {
    std::vector<mask_t> js;
    js.push_back((mask_t{1} << (n / 2)) - 1);
    mask_t odd = 0;
    for (int i = 0; i < n; i += 2) odd |= mask_t{1} << i;
    if (odd != js[0]) js.push_back(odd);
    return js;
}

inline InequalityReport identity_row(std::string lemma, std::string params) {
    InequalityReport r;
    r.lemma = std::move(lemma);
    r.params = std::move(params);
    r.exact = true;
    r.pass = true;
    return r;
}

inline void identity_fail(InequalityReport& r, long double lhs, long double rhs,
                          std::string witness) {
    if (!r.pass) return;  // keep the first witness
    r.pass = false;
    r.lhs = lhs;
    r.rhs = rhs;
    r.slack = rhs - lhs;
    r.witness = std::move(witness);
}

}  // namespace detail

// Exact spectral identities and the always-true inequalities that only need
// one function or a pair.  All equality rows compare dyadics and fail on
// any mismatch; the two floating rows use the standard relative tolerance.
inline std::vector<InequalityReport> identities_suite(const BooleanFunction& f,
                                                      const BooleanFunction& g) {
    if (f.n != g.n) throw input_error("identity battery on different cubes");
    int n = f.n;
    RealFunction rf(f);
    RealFunction rg(g);
    Spectrum sf = spectrum(rf);
    Spectrum sg = spectrum(rg);
    std::vector<InequalityReport> out;

    // <f, g> = sum_S f^(S) g^(S).
    {
        auto r = detail::identity_row("parseval", "n=" + std::to_string(n));
        Dyadic lhs = inner_product(rf, rg);
        Dyadic rhs;
        for (mask_t S = 0; S < sf.size(); ++S)
            rhs = rhs + sf.coeff(S) * sg.coeff(S);
        r.lhs = lhs.to_long_double();
        r.rhs = rhs.to_long_double();
        if (lhs != rhs) detail::identity_fail(r, r.lhs, r.rhs, "inner product");
        out.push_back(std::move(r));
    }

    // Table-side influence (squared derivative norms) equals the
    // spectrum-side sum |S| f^(S)^2, coordinate by coordinate.
    {
        auto r = detail::identity_row("influence-identity", "n=" + std::to_string(n));
        InfluenceProfile p = influence_profile(rf);
        Dyadic spectral;
        for (mask_t S = 0; S < sf.size(); ++S)
            spectral = spectral + sf.coeff(S) * sf.coeff(S) * Dyadic(popcount(S));
        r.lhs = p.total.to_long_double();
        r.rhs = spectral.to_long_double();
        if (p.total != spectral)
            detail::identity_fail(r, r.lhs, r.rhs, "total influence");
        for (int i = 0; i < n && r.pass; ++i) {
            Dyadic coord = generalized_influence(sf, mask_t{1} << i);
            if (p.coordinate[i] != coord)
                detail::identity_fail(r, p.coordinate[i].to_long_double(),
                                      coord.to_long_double(),
                                      "coordinate " + std::to_string(i + 1));
        }
        out.push_back(std::move(r));
    }

    // Derivative spectra shift: (d_T f)^(U) = f^(U | T) for U disjoint from
    // T and zero otherwise; checked for |T| <= 2 and the full set.
    {
        auto r = detail::identity_row("derivative-law",
                                      "n=" + std::to_string(n) + " sets=|T|<=2,full");
        std::vector<mask_t> ts;
        for (mask_t T = 0; T < sf.size(); ++T)
            if (popcount(T) <= 2) ts.push_back(T);
        if (n > 2) ts.push_back(full_mask(n));
        for (mask_t T : ts) {
            Spectrum ds = spectrum(derivative(rf, T));
            for (mask_t U = 0; U < ds.size() && r.pass; ++U) {
                Dyadic want = (U & T) ? Dyadic() : sf.coeff(U | T);
                if (ds.coeff(U) != want)
                    detail::identity_fail(r, ds.coeff(U).to_long_double(),
                                          want.to_long_double(),
                                          detail::mask_pair("T", T, "U", U));
            }
            if (!r.pass) break;
        }
        out.push_back(std::move(r));
    }

    // Restriction coefficient law: averaging g_{J->z}^(S)^2 over z recovers
    // the mass of the sets agreeing with S outside J.
    for (const BooleanFunction* h : {&f, &g}) {
        auto r = detail::identity_row("restriction-coefficients",
                                      std::string("target=") + (h == &f ? "f" : "g"));
        Spectrum sh = spectrum(*h);
        for (mask_t J : detail::restriction_masks(n)) {
            mask_t live = full_mask(n) & ~J;
            int fixed = popcount(J);
            std::vector<Dyadic> grouped(mask_t{1} << (n - fixed));
            for (mask_t T = 0; T < sh.size(); ++T) {
                mask_t key = extract_bits(T & live, live);
                grouped[key] = grouped[key] + sh.coeff(T) * sh.coeff(T);
            }
            std::vector<Dyadic> summed(grouped.size());
            for (const RealFunction& slice : restriction_slices(*h, J)) {
                Spectrum ss = spectrum(slice);
                for (mask_t S = 0; S < ss.size(); ++S)
                    summed[S] = summed[S] + ss.coeff(S) * ss.coeff(S);
            }
            Dyadic scale(static_cast<long long>(mask_t{1} << fixed));
            for (mask_t S = 0; S < grouped.size() && r.pass; ++S)
                if (summed[S] != grouped[S] * scale)
                    detail::identity_fail(
                        r, summed[S].to_long_double(),
                        (grouped[S] * scale).to_long_double(),
                        detail::mask_pair("J", J, "S", deposit_bits(S, live)));
            if (!r.pass) break;
        }
        out.push_back(std::move(r));
    }

    // E_z <f_z, g_z> = <f, g> for each restriction set.
    {
        auto r = detail::identity_row("restriction-inner-product",
                                      "n=" + std::to_string(n));
        Dyadic whole = inner_product(rf, rg);
        for (mask_t J : detail::restriction_masks(n)) {
            int fixed = popcount(J);
            auto fs = restriction_slices(rf, J);
            auto gs = restriction_slices(rg, J);
            Dyadic acc;
            for (std::size_t z = 0; z < fs.size(); ++z)
                acc = acc + inner_product(fs[z], gs[z]);
            if (acc != whole * Dyadic(static_cast<long long>(mask_t{1} << fixed)))
                detail::identity_fail(r, acc.to_long_double(),
                                      (whole * Dyadic(static_cast<long long>(mask_t{1} << fixed))).to_long_double(),
                                      "J=" + mask_to_string(J));
        }
        out.push_back(std::move(r));
    }

    // Restriction cannot raise the cross influence: the z-average of
    // I[f_z, g_z] stays below the unrestricted sum over the live
    // coordinates.  Square roots force floating arithmetic here.
    {
        auto r = detail::identity_row("cross-influence-restriction",
                                      "n=" + std::to_string(n) + " tol=rel");
        r.exact = false;
        InfluenceProfile pf = influence_profile(rf);
        InfluenceProfile pg = influence_profile(rg);
        for (mask_t J : detail::restriction_masks(n)) {
            long double rhs = 0;
            for (int i = 0; i < n; ++i)
                if (!((J >> i) & 1))
                    rhs += std::sqrt(
                        (pf.coordinate[i] * pg.coordinate[i]).to_long_double());
            auto fs = restriction_slices(rf, J);
            auto gs = restriction_slices(rg, J);
            long double lhs = 0;
            for (std::size_t z = 0; z < fs.size(); ++z)
                lhs += cross_influence(fs[z], gs[z]);
            lhs /= static_cast<long double>(fs.size());
            if (r.pass) {
                r.lhs = lhs;
                r.rhs = rhs;
                r.slack = rhs - lhs;
            }
            if (!within_relative(lhs, rhs))
                detail::identity_fail(r, lhs, rhs, "J=" + mask_to_string(J));
        }
        out.push_back(std::move(r));
    }

    // sum_{|T| <= v} I_T[f^{<=d}] <= 2 d^v ||f||_2^2, exact on both sides.
    {
        auto r = detail::identity_row("degree-influence-sum",
                                      "n=" + std::to_string(n) + " d<=4 v<=3");
        Dyadic norm = norm2_squared(rf);
        for (int d = 1; d <= std::min(n, 4); ++d) {
            for (int v = 1; v <= std::min(d, 3); ++v) {
                Dyadic sum;
                for (mask_t T = 0; T < sf.size(); ++T)
                    if (popcount(T) <= v)
                        sum = sum + generalized_influence(sf, T, d);
                long long factor = 2;
                for (int j = 0; j < v; ++j) factor *= d;
                Dyadic cap = norm * Dyadic(factor);
                if (r.pass) {
                    r.lhs = sum.to_long_double();
                    r.rhs = cap.to_long_double();
                    r.slack = r.rhs - r.lhs;
                }
                if (sum > cap)
                    detail::identity_fail(r, sum.to_long_double(), cap.to_long_double(),
                                          "d=" + std::to_string(d) +
                                              " v=" + std::to_string(v));
            }
        }
        out.push_back(std::move(r));
    }

    // Edge isoperimetry: total flip probability at least var ln(1/var).
    {
        auto r = detail::identity_row("edge-isoperimetry", "n=" + std::to_string(n));
        r.exact = false;
        InfluenceProfile p = influence_profile(rf);
        long double var = p.variance.to_long_double();
        r.lhs = var > 0 ? var * std::log(1.0L / var) : 0.0L;
        r.rhs = p.flip_total.to_long_double();
        r.slack = r.rhs - r.lhs;
        if (!within_relative(r.lhs, r.rhs)) {
            r.pass = false;
            r.witness = "flip influence";
        }
        out.push_back(std::move(r));
    }

    return out;
}

inline std::vector<InequalityReport> identities_suite(const BooleanFunction& f) {
    return identities_suite(f, f);
}

}  // namespace bfa
