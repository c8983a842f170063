#pragma once

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bfa/calculus.hpp"
#include "bfa/exchange.hpp"
#include "bfa/measures.hpp"
#include "bfa/partition.hpp"
#include "bfa/report.hpp"
#include "bfa/spectrum.hpp"

// Degree-reduction bounds: parameter schedules for the main inner-product
// inequality, the closed-form constants of its three variants, the base-case
// inequalities they recurse into, and the parameterized corollary forms.
// Constants reach magnitudes like d^(1+eps)d, so everything is evaluated in
// log space with long doubles; thresholds are carried as ln(delta) because
// the ladders shrink them double-exponentially.

namespace bfa {

inline constexpr long double kLnInf = std::numeric_limits<long double>::infinity();

enum class MainTheorem { max_term, power_sum, boosted };

inline const char* theorem_name(MainTheorem t) {
    switch (t) {
        case MainTheorem::max_term: return "max-term";
        case MainTheorem::power_sum: return "power-sum";
        default: return "boosted";
    }
}

// One ladder rung's separation requirement
//   d_{j-1} >= 3/(alpha eps^2 (1-2eps)^k) * log(4(1+eps) d_j / d_{j-1}),
// evaluated with both natural and base-2 logarithms. `ok` follows the
// natural-log reading; the base-2 variant is bookkeeping for comparison.
struct GapCondition {
    int j = 0;
    long double required_ln = 0;
    long double required_log2 = 0;
    long double actual = 0;
    bool ok = false;
    bool ok_log2 = false;
};

// Degree ladder 1 = d_0 < d_1 < ... < d_k with thresholds
// delta_1 >= ... >= delta_k > 0 (stored as ln delta_j). `ln_eta` carries the
// separate threshold ladder paired with degrees e_i = 10^i when a boosted
// base-case schedule is in play.
struct ParameterSchedule {
    int k = 1;
    long double alpha = 1.0L;
    long double eps = 0.25L;
    std::vector<long double> d;         // k + 1 entries, d[0] == 1
    std::vector<long double> ln_delta;  // k entries, nonincreasing
    std::vector<long double> ln_eta;    // optional boosted ladder, k entries

    ParameterSchedule() : d{1.0L, 2.0L}, ln_delta{logl(0.5L)} {}

    ParameterSchedule(long double alpha_, long double eps_,
                      std::vector<long double> degrees,
                      std::vector<long double> ln_deltas)
        : alpha(alpha_), eps(eps_) {
        if (!(alpha > 0.0L) || alpha > 1.0L)
            throw input_error("schedule alpha must lie in (0, 1]");
        if (!(eps > 0.0L) || eps >= 1.0L)
            throw input_error("schedule eps must lie in (0, 1)");
        if (degrees.empty() || degrees.size() != ln_deltas.size())
            throw input_error("schedule needs matching degree and threshold ladders");
        k = static_cast<int>(degrees.size());
        d.resize(static_cast<std::size_t>(k) + 1);
        d[0] = 1.0L;
        for (int j = 1; j <= k; ++j) {
            long double v = degrees[static_cast<std::size_t>(j) - 1];
            if (!std::isfinite(v) || v <= d[static_cast<std::size_t>(j) - 1])
                throw input_error("degree ladder must increase strictly from 1");
            d[static_cast<std::size_t>(j)] = v;
        }
        for (std::size_t j = 0; j < ln_deltas.size(); ++j) {
            if (!std::isfinite(ln_deltas[j]))
                throw input_error("thresholds must be positive and representable");
            if (j > 0 && ln_deltas[j] > ln_deltas[j - 1] + 1e-18L)
                throw input_error("threshold ladder must be nonincreasing");
        }
        ln_delta = std::move(ln_deltas);
    }

    // Separation requirements for j = 2..k. An eps >= 1/2 makes the shrink
    // factor vanish, so the requirement becomes unsatisfiable (+inf).
    std::vector<GapCondition> gap_conditions() const {
        std::vector<GapCondition> out;
        long double shrink = 1.0L - 2.0L * eps;
        for (int j = 2; j <= k; ++j) {
            GapCondition gc;
            gc.j = j;
            gc.actual = d[static_cast<std::size_t>(j) - 1];
            long double arg =
                4.0L * (1.0L + eps) * d[static_cast<std::size_t>(j)] / gc.actual;
            if (shrink > 0.0L) {
                long double scale = 3.0L / (alpha * eps * eps * powl(shrink, k));
                gc.required_ln = scale * logl(arg);
                gc.required_log2 = scale * log2l(arg);
            } else {
                gc.required_ln = kLnInf;
                gc.required_log2 = kLnInf;
            }
            gc.ok = gc.actual >= gc.required_ln;
            gc.ok_log2 = gc.actual >= gc.required_log2;
            out.push_back(gc);
        }
        return out;
    }
};

// Threshold ladder eta_{i+1} = eta_i^{10 (1 + 4 e_i^{-1/4})} used to collapse
// the boosted base case to a single threshold; entries are ln eta_i.
inline std::vector<long double> boosted_eta_ladder(int k, long double ln_eta1) {
    if (k < 1) throw input_error("ladder needs at least one level");
    if (!std::isfinite(ln_eta1) || ln_eta1 >= 0)
        throw input_error("ladder head must lie in (0, 1)");
    std::vector<long double> out(static_cast<std::size_t>(k));
    out[0] = ln_eta1;
    for (int i = 1; i < k; ++i)
        out[static_cast<std::size_t>(i)] =
            out[static_cast<std::size_t>(i) - 1] * 10.0L *
            (1.0L + 4.0L * powl(10.0L, -static_cast<long double>(i) / 4.0L));
    return out;
}

// Schedule whose degree ladder is e_i = 10^i with thresholds eta_1..eta_k.
inline ParameterSchedule boosted_base_schedule(std::vector<long double> ln_etas) {
    if (ln_etas.empty()) throw input_error("boosted schedule needs thresholds");
    std::vector<long double> degrees(ln_etas.size());
    for (std::size_t i = 0; i < degrees.size(); ++i)
        degrees[i] = powl(10.0L, static_cast<long double>(i) + 1.0L);
    ParameterSchedule ps(1.0L, 0.25L, std::move(degrees), ln_etas);
    ps.ln_eta = std::move(ln_etas);
    return ps;
}

namespace detail {

inline long double log_sum_exp(const std::vector<long double>& t) {
    long double m = -kLnInf;
    for (long double v : t) m = std::max(m, v);
    if (!(m > -kLnInf)) return -kLnInf;
    if (std::isinf(m)) return m;
    long double s = 0;
    for (long double v : t) s += expl(v - m);
    return m + logl(s);
}

}  // namespace detail

// Closed-form constants of one bound variant, in log space. ln_c3 == -inf
// encodes C3 = 0 (single-level schedules). The per-summand logs of C3
// (including the shared prefix) are kept for monotonicity diagnostics.
struct BoundTerms {
    MainTheorem theorem = MainTheorem::max_term;
    long double ln_c1 = 0;
    long double ln_c2 = 0;
    long double ln_c3 = -kLnInf;
    std::vector<long double> ln_c3_terms;

    long double c1() const { return expl(ln_c1); }
    long double c2() const { return expl(ln_c2); }
    long double c3() const { return expl(ln_c3); }
};

inline BoundTerms main_bound_terms(const ParameterSchedule& ps, MainTheorem which) {
    const long double ln2 = logl(2.0L), ln3 = logl(3.0L);
    const int k = ps.k;
    const long double e = ps.eps;
    auto deg = [&](int j) { return ps.d[static_cast<std::size_t>(j)]; };
    auto lndel = [&](int j) { return ps.ln_delta[static_cast<std::size_t>(j) - 1]; };
    const long double d1 = deg(1), dk = deg(k), dk1 = deg(k - 1);

    BoundTerms bt;
    bt.theorem = which;
    std::vector<long double> terms;

    switch (which) {
        case MainTheorem::max_term:
            bt.ln_c1 = k * ln2 + (1 + e) * dk * logl(dk) +
                       ((1 + e) * dk / dk1) * (ln2 - lndel(k));
            bt.ln_c2 = k * ln2 + lndel(1) / 8 + (d1 / 4) * ln3;
            for (int j = 1; j <= k - 1; ++j)
                terms.push_back((1 + e) * deg(j) * logl(deg(j)) +
                                ((1 + e) * deg(j) / deg(j - 1)) * (ln2 - lndel(j)) +
                                (deg(j + 1) / 2) * ln3 + lndel(j + 1) / 4);
            if (k > 1)
                bt.ln_c3 = k * ln2 + k * log1pl(e) + logl(dk) +
                           detail::log_sum_exp(terms);
            break;

        case MainTheorem::power_sum:
            if (k == 1) {
                bt.ln_c1 = (d1 / 4) * (logl(d1) - lndel(1));
                bt.ln_c2 = ln2 + lndel(1) / 8 + (d1 / 4) * ln3;
            } else {
                bt.ln_c1 = k * ln2 + ((1 + e) / 4) * (dk / dk1) * (ln2 - lndel(k));
                bt.ln_c2 = k * ln2 + lndel(1) / 8 + (d1 / 4) * ln3;
                terms.push_back((d1 / 4) * (logl(d1) - lndel(1)) + lndel(2) / 4);
                for (int j = 2; j <= k - 1; ++j)
                    terms.push_back(((1 + e) / 4) * (deg(j) / deg(j - 1)) *
                                        (ln2 - lndel(j)) +
                                    deg(j + 1) * ln3 + lndel(j + 1) / 4);
                bt.ln_c3 = k * ln2 + k * log1pl(e) + logl(dk) +
                           detail::log_sum_exp(terms);
            }
            break;

        case MainTheorem::boosted:
            // Here delta_1 doubles as the head threshold eta and d_1 as e'.
            if (k == 1) {
                bt.ln_c1 = logl(10.0L * d1) - 300.0L * d1 * lndel(1);
                bt.ln_c2 = logl(10.0L * d1) + lndel(1) / 16;
                bt.ln_c3 = logl(10.0L * d1) + lndel(1);
            } else {
                bt.ln_c1 = k * ln2 + ((1 + e) / 4) * (dk / dk1) * (ln2 - lndel(k));
                bt.ln_c2 = k * ln2 + logl(100.0L) + 2 * logl(d1) + lndel(1) / 16;
                terms.push_back(logl(10.0L * dk) - 300.0L * d1 * lndel(1) +
                                lndel(2) / 4);
                for (int j = 2; j <= k - 1; ++j)
                    terms.push_back(((1 + e) / 4) * (deg(j) / deg(j - 1)) *
                                        (ln2 - lndel(j)) +
                                    deg(j + 1) * ln3 + lndel(j + 1) / 4);
                bt.ln_c3 = k * ln2 + k * log1pl(e) + detail::log_sum_exp(terms);
            }
            break;
    }
    bt.ln_c3_terms = std::move(terms);
    return bt;
}

// Constants of the boosted base-case ladder (degrees e_i = 10^i, thresholds
// eta_i). The single-level case is exactly the power-sum base case at degree
// 10; deeper ladders pick up the (16 sqrt(e_i))^10 sieve factors.
inline BoundTerms boosted_base_terms(const ParameterSchedule& bs) {
    if (bs.ln_eta.empty())
        throw input_error("boosted base constants need an eta ladder");
    const long double ln2 = logl(2.0L), ln3 = logl(3.0L), ln10 = logl(10.0L);
    const long double ln16 = logl(16.0L);
    const int k = static_cast<int>(bs.ln_eta.size());
    auto lneta = [&](int j) { return bs.ln_eta[static_cast<std::size_t>(j) - 1]; };

    BoundTerms bt;
    bt.theorem = MainTheorem::boosted;
    if (k == 1) {
        bt.ln_c1 = 2.5L * (ln10 - lneta(1));
        bt.ln_c2 = ln2 + lneta(1) / 8 + 2.5L * ln3;
        return bt;
    }
    long double ln_prod = 0;  // prod_{i<k} (16 sqrt(e_i))^10
    for (int i = 1; i <= k - 1; ++i) ln_prod += 10.0L * (ln16 + (i / 2.0L) * ln10);
    bt.ln_c1 = k * ln10 + 10.0L * (ln16 + ((k - 1) / 2.0L) * ln10) +
               2.5L * (ln10 - lneta(k));
    bt.ln_c2 = ln2 + lneta(1) / 8 + 2.5L * ln3 + ln_prod;
    std::vector<long double> terms;
    for (int j = 1; j <= k - 1; ++j)
        terms.push_back(2.5L * (ln10 - lneta(j)) +
                        powl(10.0L, static_cast<long double>(j) + 1) * ln3 +
                        lneta(j + 1) / 4);
    bt.ln_c3 = k * ln10 + ln_prod + detail::log_sum_exp(terms);
    bt.ln_c3_terms = std::move(terms);
    return bt;
}

// ---- spectral aggregates shared by the checks ------------------------------

namespace detail {

// Checks evaluate the sign-aligned pair: flipping the signs of g's
// coefficients to match f's leaves the right hand sides unchanged, cannot
// decrease the left, and the aligned pair is itself a valid input, so the
// aligned check is the binding one. The f side is the +/-1 value view.
struct PairData {
    Spectrum sf, sg;
    long double abs_inner = 0;  // sum_S |f^(S) g^(S)|
    long double cross = 0;      // sum_i sqrt(I_i[f] I_i[g])
    long double norm_f = 0;
    long double norm_g = 0;
};

inline PairData pair_data(const BooleanFunction& f, const RealFunction& g) {
    if (f.n != g.n) throw input_error("checked pair must share the variable count");
    PairData p;
    RealFunction fp = f.to_pm();
    p.sf = spectrum(fp);
    p.sg = spectrum(g);
    for (mask_t S = 0; S < p.sf.size(); ++S)
        p.abs_inner +=
            fabsl(p.sf.coeff_long_double(S) * p.sg.coeff_long_double(S));
    p.cross = cross_influence(fp, g);
    p.norm_f = sqrtl(p.sf.mass().to_long_double());
    p.norm_g = sqrtl(p.sg.mass().to_long_double());
    return p;
}

inline bool in_window(int w, long double lo, long double hi) {
    return static_cast<long double>(w) >= lo - 1e-9L &&
           static_cast<long double>(w) <= hi + 1e-9L;
}

struct WindowMax {
    long double value = 0;
    mask_t arg = 0;
};

// Largest |f^(S) g^(S)| over the size window; ties prefer smaller |S|, then
// the lexicographically smaller mask.
inline WindowMax window_max(const PairData& p, long double lo, long double hi) {
    WindowMax wm;
    int best_pc = -1;
    for (mask_t S = 0; S < p.sf.size(); ++S) {
        int pc = popcount(S);
        if (!in_window(pc, lo, hi)) continue;
        long double v = fabsl(p.sf.coeff_long_double(S) * p.sg.coeff_long_double(S));
        if (v > wm.value || (v == wm.value && (best_pc < 0 || pc < best_pc))) {
            wm.value = v;
            wm.arg = S;
            best_pc = pc;
        }
    }
    return wm;
}

// (sum over the window of |f^(S) g^(S)|^{4/3})^{3/4}.
inline long double window_power_sum(const PairData& p, long double lo, long double hi) {
    long double acc = 0;
    for (mask_t S = 0; S < p.sf.size(); ++S) {
        if (!in_window(popcount(S), lo, hi)) continue;
        long double ab = fabsl(p.sf.coeff_long_double(S) * p.sg.coeff_long_double(S));
        if (ab > 0) acc += powl(ab, 4.0L / 3.0L);
    }
    return acc > 0 ? powl(acc, 0.75L) : 0.0L;
}

// coefficient * mass with the coefficient held in log space; a zero mass
// wins over an infinite coefficient (the term is absent, not indeterminate).
inline long double scaled_term(long double ln_coef, long double mass) {
    if (!(mass > 0)) return 0.0L;
    return expl(ln_coef + logl(mass));
}

inline void require_window_support(const Spectrum& sg, long double lo,
                                   long double hi, const char* who) {
    for (mask_t S = 0; S < sg.size(); ++S)
        if (!sg.is_zero(S) && !in_window(popcount(S), lo, hi))
            throw input_error(std::string(who) +
                              ": support outside the homogeneity window at " +
                              mask_to_string(S));
}

inline std::string render(long double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace detail

// ---- base case -------------------------------------------------------------

// Both single-level bounds for a degree-<=d sieve threshold delta:
//   max-term:  <f,g> <= (d/delta)^d max|f^ g^| + 2 delta^{1/8} 3^{d/4} I[f,g]
//   power-sum: <f,g> <= (d/delta)^{d/4} (sum |f^ g^|^{4/3})^{3/4} + same tail
struct BaseCaseReport {
    InequalityReport max_term;
    InequalityReport power_sum;
};

inline BaseCaseReport base_case_check(const BooleanFunction& f,
                                      const RealFunction& g, int d,
                                      long double delta) {
    if (!(delta > 0)) throw input_error("base case threshold must be positive");
    if (d < 0) throw input_error("base case degree must be nonnegative");
    detail::require_degree(g, d, "base case check");
    detail::PairData p = detail::pair_data(f, g);

    long double ln_d_over = d == 0 ? 0.0L
                                   : d * (logl(static_cast<long double>(d)) -
                                          logl(delta));
    long double tail_coef = 2.0L * expl(logl(delta) / 8 + (d / 4.0L) * logl(3.0L));
    long double tail = tail_coef * p.cross;
    long double all = static_cast<long double>(f.n);

    std::ostringstream ps;
    ps << "n=" << f.n << " d=" << d << " delta=" << detail::render(delta);

    detail::WindowMax wm = detail::window_max(p, 0.0L, all);
    BaseCaseReport out;
    out.max_term.lemma = "base-max-term";
    out.max_term.params = ps.str();
    out.max_term.lhs = p.abs_inner;
    out.max_term.term1 = detail::scaled_term(ln_d_over, wm.value);
    out.max_term.term2 = tail;
    out.max_term.rhs = out.max_term.term1 + out.max_term.term2;
    out.max_term.slack = out.max_term.rhs - out.max_term.lhs;
    out.max_term.pass = within_relative(out.max_term.lhs, out.max_term.rhs);
    out.max_term.witness = mask_to_string(wm.arg);

    out.power_sum.lemma = "base-power-sum";
    out.power_sum.params = ps.str();
    out.power_sum.lhs = p.abs_inner;
    out.power_sum.term1 = detail::scaled_term(
        ln_d_over / 4, detail::window_power_sum(p, 0.0L, all));
    out.power_sum.term2 = tail;
    out.power_sum.rhs = out.power_sum.term1 + out.power_sum.term2;
    out.power_sum.slack = out.power_sum.rhs - out.power_sum.lhs;
    out.power_sum.pass = within_relative(out.power_sum.lhs, out.power_sum.rhs);
    out.power_sum.witness = mask_to_string(wm.arg);
    return out;
}

// ---- boosted base case ------------------------------------------------------

// The ladder inequality for homogeneous g of degree 10^k, plus the collapsed
// single-threshold form (valid once eta <= 10^{-320 sqrt(e_k)}).
struct BoostedBaseReport {
    InequalityReport ladder;
    InequalityReport collapsed;
    bool collapsed_applicable = false;
};

inline BoostedBaseReport boosted_base_check(const BooleanFunction& f,
                                            const RealFunction& g,
                                            const ParameterSchedule& bs) {
    if (bs.ln_eta.empty())
        throw input_error("boosted base check needs an eta ladder");
    const int k = static_cast<int>(bs.ln_eta.size());
    const long double ek = powl(10.0L, static_cast<long double>(k));
    Spectrum sg = spectrum(g);
    for (mask_t S = 0; S < sg.size(); ++S)
        if (!sg.is_zero(S) && popcount(S) != static_cast<int>(ek))
            throw input_error(
                "boosted base check needs g homogenous of degree 10^k; stray "
                "coefficient at " +
                mask_to_string(S));

    detail::PairData p = detail::pair_data(f, g);
    long double psum = detail::window_power_sum(p, ek, ek);
    BoundTerms bt = boosted_base_terms(bs);

    std::ostringstream ps;
    ps << "n=" << f.n << " k=" << k << " lnEta1=" << detail::render(bs.ln_eta[0]);

    BoostedBaseReport out;
    out.ladder.lemma = "boosted-base";
    out.ladder.params = ps.str();
    out.ladder.lhs = p.abs_inner;
    out.ladder.term1 = detail::scaled_term(bt.ln_c1, psum);
    out.ladder.term2 = detail::scaled_term(bt.ln_c2, p.cross);
    out.ladder.term3 = detail::scaled_term(bt.ln_c3, p.norm_f * p.norm_g);
    out.ladder.rhs = out.ladder.term1 + out.ladder.term2 + out.ladder.term3;
    out.ladder.slack = out.ladder.rhs - out.ladder.lhs;
    out.ladder.pass = within_relative(out.ladder.lhs, out.ladder.rhs);

    long double ln_eta = bs.ln_eta[0];
    out.collapsed_applicable = ln_eta <= -320.0L * sqrtl(ek) * logl(10.0L);
    if (out.collapsed_applicable) {
        out.collapsed.lemma = "boosted-base-collapsed";
        out.collapsed.params = ps.str();
        out.collapsed.lhs = p.abs_inner;
        out.collapsed.term1 = detail::scaled_term(-30.0L * ek * ln_eta, psum);
        out.collapsed.term2 = detail::scaled_term(ln_eta / 16, p.cross);
        out.collapsed.term3 = detail::scaled_term(ln_eta, p.norm_f * p.norm_g);
        out.collapsed.rhs =
            out.collapsed.term1 + out.collapsed.term2 + out.collapsed.term3;
        out.collapsed.slack = out.collapsed.rhs - out.collapsed.lhs;
        out.collapsed.pass = within_relative(out.collapsed.lhs, out.collapsed.rhs);
    }
    return out;
}

// ---- main inequality --------------------------------------------------------

// <f,g> against the selected variant's three-term right hand side, for g
// supported on the almost-homogeneity window alpha d_k <= |S| <= d_k.
inline InequalityReport main_inequality_check(const BooleanFunction& f,
                                              const AlmostHomogeneous& g,
                                              const ParameterSchedule& ps,
                                              MainTheorem which) {
    detail::PairData p = detail::pair_data(f, g.g);
    long double dk = ps.d[static_cast<std::size_t>(ps.k)];
    long double lo = ps.alpha * dk, hi = dk;
    detail::require_window_support(p.sg, lo, hi, "main inequality check");

    BoundTerms bt = main_bound_terms(ps, which);
    InequalityReport r;
    r.lemma = std::string("main-") + theorem_name(which);
    if (which == MainTheorem::max_term) {
        detail::WindowMax wm = detail::window_max(p, lo, hi);
        r.term1 = detail::scaled_term(bt.ln_c1, wm.value);
        r.witness = mask_to_string(wm.arg);
    } else {
        r.term1 = detail::scaled_term(bt.ln_c1, detail::window_power_sum(p, lo, hi));
    }
    r.term2 = detail::scaled_term(bt.ln_c2, p.cross);
    r.term3 = detail::scaled_term(bt.ln_c3, p.norm_f * p.norm_g);
    r.lhs = p.abs_inner;
    r.rhs = r.term1 + r.term2 + r.term3;
    r.slack = r.rhs - r.lhs;
    r.pass = within_relative(r.lhs, r.rhs);

    // Both hypothesis readings: one variant requires the separation from
    // j = 2 up, the other only from j = 3 up, so tally each range.
    int ok2 = 0, n2 = 0, ok3 = 0, n3 = 0;
    for (const GapCondition& gc : ps.gap_conditions()) {
        ++n2;
        ok2 += gc.ok ? 1 : 0;
        if (gc.j >= 3) {
            ++n3;
            ok3 += gc.ok ? 1 : 0;
        }
    }
    std::ostringstream os;
    os << "n=" << f.n << " k=" << ps.k << " alpha=" << detail::render(ps.alpha)
       << " eps=" << detail::render(ps.eps) << " dk=" << detail::render(dk)
       << " lnC1=" << detail::render(bt.ln_c1)
       << " lnC2=" << detail::render(bt.ln_c2)
       << " lnC3=" << detail::render(bt.ln_c3) << " gapsFrom2=" << ok2 << "/"
       << n2 << " gapsFrom3=" << ok3 << "/" << n3;
    if (which == MainTheorem::boosted) {
        bool eta_pre = ps.ln_delta[0] <=
                       -320.0L * sqrtl(10.0L * ps.d[1]) * logl(10.0L);
        os << " etaPre=" << (eta_pre ? 1 : 0);
    }
    r.params = os.str();
    return r;
}

// ---- corollary parameterizations ---------------------------------------------

// A corollary instantiation: the derived schedule plus its stated
// preconditions (violations are flagged, never fatal — desk-scale inputs
// rarely satisfy the asymptotic regime, and the inequality is checked anyway).
struct CorollarySetup {
    MainTheorem form = MainTheorem::max_term;
    ParameterSchedule schedule;
    long double d = 0;
    long double delta = 0;
    long double alpha = 1;
    long double eps = 0;
    long double eps_used = 0;
    bool pre_degree = false;
    bool pre_threshold = false;
    std::string notes;
};

inline CorollarySetup corollary_schedule(MainTheorem form, int d,
                                         long double delta, long double alpha,
                                         long double eps) {
    if (d < 2) throw input_error("corollary schedules need degree >= 2");
    if (!(delta > 0) || delta >= 1)
        throw input_error("corollary threshold must lie in (0, 1)");
    if (!(alpha > 0) || alpha > 1)
        throw input_error("corollary alpha must lie in (0, 1]");

    CorollarySetup cs;
    cs.form = form;
    cs.d = static_cast<long double>(d);
    cs.delta = delta;
    cs.alpha = alpha;
    cs.eps = eps;
    const long double ln2 = logl(2.0L);
    long double ln_delta = logl(delta);

    if (form == MainTheorem::boosted) {
        // eps is derived, not supplied: the ladder doubles from
        // (1000/alpha) log^2 d, and at desk scale that start already
        // overshoots d, collapsing the ladder to a single level.
        long double l2d = log2l(cs.d);
        long double start = (1000.0L / alpha) * l2d * l2d;
        std::vector<long double> degrees;
        if (2.0L * start > cs.d) {
            degrees.push_back(cs.d);
            cs.notes += "ladder collapsed to k=1;";
        } else {
            degrees.push_back(start);
            while (2.0L * degrees.back() <= cs.d)
                degrees.push_back(2.0L * degrees.back());
            if (degrees.back() < cs.d) degrees.push_back(cs.d);
        }
        int k = static_cast<int>(degrees.size());
        cs.eps_used = k == 1 ? std::min(1.0L / l2d, 0.49L) : 1.0L / l2d;
        std::vector<long double> lnd(static_cast<std::size_t>(k));
        lnd[0] = ln_delta;
        if (k > 1) {
            lnd[1] = 1600.0L * degrees[0] * ln_delta;
            for (int i = 2; i < k; ++i)
                lnd[static_cast<std::size_t>(i)] =
                    2.0L * (1.0L + cs.eps_used) * (1.0L + cs.eps_used) *
                    lnd[static_cast<std::size_t>(i) - 1];
        }
        cs.schedule = ParameterSchedule(alpha, cs.eps_used, degrees, lnd);
        cs.pre_degree = true;
        cs.pre_threshold = ln_delta <= -(96000.0L / sqrtl(alpha)) * logl(cs.d) + 1e-12L;
        bool eta_pre = ln_delta <= -320.0L * sqrtl(10.0L * degrees[0]) * logl(10.0L);
        if (!eta_pre) cs.notes += "head threshold above the boosted requirement;";
        return cs;
    }

    if (!(eps > 0)) throw input_error("corollary eps must be positive");
    long double e = eps;
    if (e > 0.5L) {
        e = 0.5L;
        cs.notes += "eps clamped to 1/2;";
    }
    int k = std::max(1, static_cast<int>(floorl(1.0L / e + 1e-12L)));
    cs.eps_used = 1.0L / k;
    std::vector<long double> degrees(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j)
        degrees[static_cast<std::size_t>(j) - 1] =
            powl(cs.d, static_cast<long double>(j) / k);
    long double mult = form == MainTheorem::max_term
                           ? 80.0L * powl(cs.d, cs.eps_used)
                           : (1.0L + cs.eps_used) * (1.0L + cs.eps_used) *
                                 powl(cs.d, cs.eps_used);
    std::vector<long double> lnd(static_cast<std::size_t>(k));
    lnd[0] = ln_delta;
    for (int j = 1; j < k; ++j)
        lnd[static_cast<std::size_t>(j)] = mult * lnd[static_cast<std::size_t>(j) - 1];
    cs.schedule = ParameterSchedule(alpha, cs.eps_used, degrees, lnd);
    cs.pre_degree =
        powl(cs.d, eps) >= (100.0L / (alpha * eps)) * log2l(cs.d) - 1e-9L;
    cs.pre_threshold =
        form == MainTheorem::max_term
            ? ln_delta <= -4.0L * powl(cs.d, eps) * ln2 + 1e-12L
            : ln_delta <= -(16.0L / eps) * powl(cs.d, eps) * ln2 + 1e-12L;
    return cs;
}

// The corollary-form right hand sides. The max-term variant's big-O slots are
// filled with the explicit factors its derivation produces — the schedule's
// exact leading constant (its per-degree exponent is recorded), 2^k on the
// influence term, and 2^k (1+eps)^k k on the norm term.
inline InequalityReport corollary_param_check(const BooleanFunction& f,
                                              const RealFunction& g, int d,
                                              long double delta,
                                              long double alpha,
                                              long double eps,
                                              MainTheorem which) {
    CorollarySetup cs = corollary_schedule(which, d, delta, alpha, eps);
    detail::PairData p = detail::pair_data(f, g);
    long double lo = alpha * d, hi = static_cast<long double>(d);
    detail::require_window_support(p.sg, lo, hi, "corollary check");
    detail::WindowMax wm = detail::window_max(p, lo, hi);
    long double ln_delta = logl(delta);
    long double norms = p.norm_f * p.norm_g;

    InequalityReport r;
    r.lemma = std::string("param-") + theorem_name(which);
    r.lhs = p.abs_inner;
    r.witness = mask_to_string(wm.arg);
    std::ostringstream os;
    os << "n=" << f.n << " d=" << d << " delta=" << detail::render(delta)
       << " alpha=" << detail::render(alpha) << " eps=" << detail::render(eps)
       << " k=" << cs.schedule.k << " preDeg=" << (cs.pre_degree ? 1 : 0)
       << " preDelta=" << (cs.pre_threshold ? 1 : 0);

    if (which == MainTheorem::max_term) {
        BoundTerms bt = main_bound_terms(cs.schedule, which);
        int k = cs.schedule.k;
        r.term1 = detail::scaled_term(bt.ln_c1, wm.value);
        r.term2 = detail::scaled_term(k * logl(2.0L) + ln_delta / 40, p.cross);
        r.term3 = detail::scaled_term(k * logl(2.0L) + k * log1pl(cs.eps_used) +
                                          logl(static_cast<long double>(k)) +
                                          powl(cs.d, eps) * ln_delta,
                                      norms);
        long double exponent_used = bt.ln_c1 / (cs.d * -ln_delta);
        os << " leadExp=" << detail::render(exponent_used)
           << " tailDominated="
           << (bt.ln_c2 <= k * logl(2.0L) + ln_delta / 40 + 1e-9L ? 1 : 0);
    } else {
        long double lead = which == MainTheorem::power_sum ? 6.0L : 100000.0L;
        long double mass = norms > 0 ? powl(norms, 0.75L) * powl(wm.value, 0.25L)
                                     : 0.0L;
        r.term1 = detail::scaled_term(-lead * cs.d * ln_delta, mass);
        r.term2 = detail::scaled_term(ln_delta / 16, p.cross);
        r.term3 = detail::scaled_term(ln_delta, norms);
    }
    if (!cs.notes.empty()) os << " notes=" << cs.notes;
    r.params = os.str();
    r.rhs = r.term1 + r.term2 + r.term3;
    r.slack = r.rhs - r.lhs;
    r.pass = within_relative(r.lhs, r.rhs);
    return r;
}

// ---- low-degree influence cascade -------------------------------------------

// The classical chain for g = f^{<=d} - f^(0): each stage dominates the one
// before, ending in the closed form 2 sqrt(3)^d I[f] max_i I_i[f^{<=d}]^{1/4}.
struct ChainReport {
    long double inner = 0;           // <f, g>
    long double derivative_sum = 0;  // sum_i <d_i f, d_i f^{<=d}>
    long double holder_sum = 0;      // sum_i ||d_i f||_{4/3} ||d_i f^{<=d}||_4
    long double hyper_sum = 0;       // sqrt(3)^d sum_i ||d_i f||_{4/3} ||d_i f^{<=d}||_2
    long double closed_form = 0;     // 2 sqrt(3)^d I[f] max_i I_i[f^{<=d}]^{1/4}
    bool monotone = false;
    InequalityReport overall;
};

inline ChainReport kkl_chain_check(const BooleanFunction& f, int d) {
    if (d < 0) throw input_error("chain check degree must be nonnegative");
    RealFunction fp = f.to_pm();
    Spectrum sf = spectrum(fp);
    RealFunction ft = truncate_degree(sf, d);

    ChainReport cr;
    for (mask_t S = 1; S < sf.size(); ++S)
        if (popcount(S) <= d) {
            long double c = sf.coeff_long_double(S);
            cr.inner += c * c;
        }

    InfluenceProfile prof_f = influence_profile(fp);
    InfluenceProfile prof_t = influence_profile(ft);
    long double hyper = powl(3.0L, d / 2.0L);
    long double max_trunc = 0;
    for (int i = 0; i < f.n; ++i) {
        RealFunction df = derivative(fp, mask_t{1} << i);
        RealFunction dt = derivative(ft, mask_t{1} << i);
        long double lo = lq_norm(df, 4.0L / 3.0L);
        cr.derivative_sum += inner_product(df, dt).to_long_double();
        cr.holder_sum += lo * lq_norm(dt, 4.0L);
        cr.hyper_sum += lo * sqrtl(norm2_squared(dt).to_long_double());
        max_trunc = std::max(
            max_trunc, prof_t.coordinate[static_cast<std::size_t>(i)].to_long_double());
    }
    cr.hyper_sum *= hyper;
    cr.closed_form = 2.0L * hyper * prof_f.total.to_long_double() *
                     powl(max_trunc, 0.25L);
    cr.monotone = within_relative(cr.inner, cr.derivative_sum) &&
                  within_relative(cr.derivative_sum, cr.holder_sum) &&
                  within_relative(cr.holder_sum, cr.hyper_sum) &&
                  within_relative(cr.hyper_sum, cr.closed_form);

    std::ostringstream os;
    os << "n=" << f.n << " d=" << d
       << " stages=" << detail::render(cr.inner) << "/"
       << detail::render(cr.derivative_sum) << "/"
       << detail::render(cr.holder_sum) << "/" << detail::render(cr.hyper_sum)
       << "/" << detail::render(cr.closed_form);
    cr.overall.lemma = "kkl-chain";
    cr.overall.params = os.str();
    cr.overall.lhs = cr.inner;
    cr.overall.rhs = cr.closed_form;
    cr.overall.slack = cr.overall.rhs - cr.overall.lhs;
    cr.overall.pass = cr.monotone;
    return cr;
}

}  // namespace bfa
