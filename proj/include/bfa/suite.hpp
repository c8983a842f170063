#pragma once

// Batch runner: evaluates a named battery of checks over a family/parameter
// grid, with one deterministic seed per grid cell, an optional corruption
// self-test, and rendering to JSON, CSV, or Markdown.  JSON output carries a
// versioned schema and no timestamps, so a rerun with the same config and
// seed is byte-identical regardless of thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bfa/bounds.hpp"
#include "bfa/calculus.hpp"
#include "bfa/errors.hpp"
#include "bfa/exchange.hpp"
#include "bfa/headline.hpp"
#include "bfa/learner.hpp"
#include "bfa/partition.hpp"
#include "bfa/report.hpp"
#include "bfa/rng.hpp"
#include "bfa/zoo.hpp"

namespace bfa {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kReportSchema = "bfa-report/1";

// A battery to run: which suite, over which function families, with which
// parameter grid.  `options` holds suite-specific knobs as key=value strings;
// unknown keys are rejected.  `threads`, `out_path`, and `format` steer
// execution and rendering only — they are not part of the experiment and are
// excluded from the serialized config echo.
struct SuiteConfig {
    std::string suite;
    std::vector<std::string> families;
    std::map<std::string, std::string> options;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out_path;
    std::string format = "json";
    bool self_test = false;
};

struct SuiteAggregate {
    long long rows_total = 0;
    long long rows_passed = 0;
    long long violations = 0;
    // Largest lhs/rhs ratio seen per lemma: 1 means tight, < 1 means slack.
    std::map<std::string, long double> max_constant;
    // Wall-clock of run_suite.  Reported in Markdown only; never serialized
    // to JSON or CSV, which must be reproducible byte for byte.
    long long runtime_ms = 0;
};

struct RunReport {
    std::string version = kToolVersion;
    SuiteConfig config;
    std::vector<InequalityReport> rows;
    std::vector<LearnResult> learn_rows;
    SuiteAggregate aggregate;
};

// Curated family menu: every generator with a closed-form spec, at sizes up
// to max_n.  (File-backed functions are excluded; pass those explicitly.)
inline std::vector<std::string> standard_families(int max_n) {
    if (max_n < 1) throw input_error("family menu needs max_n >= 1");
    static const std::vector<std::pair<int, const char*>> menu = {
        {1, "dictator:n=1"},
        {3, "dictator:n=3"},
        {5, "dictator:n=5"},
        {2, "parity:n=2"},
        {4, "parity:n=4"},
        {6, "parity:n=6"},
        {10, "parity:n=10"},
        {14, "parity:n=14"},
        {3, "majority:n=3"},
        {5, "majority:n=5"},
        {7, "majority:n=7"},
        {9, "majority:n=9"},
        {11, "majority:n=11"},
        {13, "majority:n=13"},
        {4, "tribes:w=2,s=2"},
        {6, "tribes:w=2,s=3"},
        {8, "tribes:w=2,s=4"},
        {9, "tribes:w=3,s=3"},
        {12, "tribes:w=3,s=4"},
        {14, "tribes:w=2,s=7"},
        {6, "address:a=2"},
        {11, "address:a=3"},
        {4, "inner-product:k=2"},
        {6, "inner-product:k=3"},
        {8, "inner-product:k=4"},
        {12, "inner-product:k=6"},
        {14, "inner-product:k=7"},
        {8, "random-dnf:n=8,terms=6,width=3,seed=5"},
        {12, "random-dnf:n=12,terms=10,width=4,seed=9"},
        {6, "graph-property:vertices=4"},
        {10, "graph-property:vertices=5"},
    };
    std::vector<std::string> out;
    for (const auto& [n, spec] : menu)
        if (n <= max_n) out.emplace_back(spec);
    return out;
}

namespace detail {

// ---- option parsing ---------------------------------------------------------

inline const std::string* find_option(const SuiteConfig& c, const std::string& key) {
    auto it = c.options.find(key);
    return it == c.options.end() ? nullptr : &it->second;
}

inline long long parse_int(const std::string& text, const std::string& key) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != text.size() || text.empty())
        throw input_error("option " + key + " wants an integer, got '" + text + "'");
    return v;
}

inline long long opt_int(const SuiteConfig& c, const std::string& key,
                         long long def, long long lo, long long hi) {
    const std::string* s = find_option(c, key);
    long long v = s ? parse_int(*s, key) : def;
    if (v < lo || v > hi)
        throw input_error("option " + key + " must lie in [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    return v;
}

inline long double opt_real(const SuiteConfig& c, const std::string& key,
                            long double def) {
    const std::string* s = find_option(c, key);
    if (!s) return def;
    std::size_t pos = 0;
    long double v = 0;
    try {
        v = std::stold(*s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s->size() || s->empty() || !std::isfinite(v))
        throw input_error("option " + key + " wants a real number, got '" + *s + "'");
    return v;
}

inline Frac parse_frac(const std::string& text, const std::string& key) {
    auto slash = text.find('/');
    if (slash == std::string::npos) return Frac(parse_int(text, key));
    return Frac(parse_int(text.substr(0, slash), key),
                parse_int(text.substr(slash + 1), key));
}

inline Frac opt_frac(const SuiteConfig& c, const std::string& key, Frac def) {
    const std::string* s = find_option(c, key);
    return s ? parse_frac(*s, key) : def;
}

// Comma-separated integers; each token is a value or an inclusive a..b range.
inline std::vector<int> parse_int_list(const std::string& text, const std::string& key,
                                       long long lo, long long hi) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string token;
    while (std::getline(in, token, ',')) {
        long long a = 0, b = 0;
        auto dots = token.find("..");
        if (dots == std::string::npos) {
            a = b = parse_int(token, key);
        } else {
            a = parse_int(token.substr(0, dots), key);
            b = parse_int(token.substr(dots + 2), key);
        }
        if (a > b) throw input_error("option " + key + " has an empty range " + token);
        if (a < lo || b > hi)
            throw input_error("option " + key + " must stay in [" + std::to_string(lo) +
                              ", " + std::to_string(hi) + "]");
        for (long long v = a; v <= b; ++v) out.push_back(static_cast<int>(v));
        if (out.size() > 10000) throw input_error("option " + key + " lists too many values");
    }
    if (out.empty()) throw input_error("option " + key + " is empty");
    return out;
}

inline std::vector<int> opt_int_list(const SuiteConfig& c, const std::string& key,
                                     const std::string& def, long long lo, long long hi) {
    const std::string* s = find_option(c, key);
    return parse_int_list(s ? *s : def, key, lo, hi);
}

inline void require_known_options(const SuiteConfig& c, std::set<std::string> allowed) {
    for (const auto& [key, value] : c.options)
        if (!allowed.count(key))
            throw input_error("suite '" + c.suite + "' does not take option '" + key + "'");
}

// ---- cell builders ----------------------------------------------------------

struct CellOutput {
    std::vector<InequalityReport> rows;
    std::vector<LearnResult> learns;
};

using CellFn = std::function<CellOutput(std::uint64_t)>;

inline RealFunction random_degree_poly(int n, int d, Rng rng) {
    std::vector<long long> coeff(std::size_t{1} << n, 0);
    for (mask_t S = 0; S < (mask_t{1} << n); ++S)
        if (popcount(S) <= d) coeff[S] = static_cast<long long>(rng.below(17)) - 8;
    return synthesize(spectrum_from_coeffs(n, std::move(coeff), 4));
}

inline RealFunction band_of(const BooleanFunction& f, int lo, int hi) {
    return degree_band(spectrum(f.to_pm()), lo, hi);
}

inline std::vector<CellFn> identities_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"pairs", "pair-n"});
    long long pairs = opt_int(cfg, "pairs", 0, 0, 100000);
    int pair_n = static_cast<int>(opt_int(cfg, "pair-n", 10, 2, kDefaultMaxN));
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        jobs.push_back([spec](std::uint64_t) {
            CellOutput out;
            out.rows = identities_suite(make_function(spec));
            return out;
        });
    for (long long p = 0; p < pairs; ++p)
        jobs.push_back([pair_n](std::uint64_t cell_seed) {
            Rng rng(cell_seed);
            int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(pair_n - 1)));
            BooleanFunction f = BooleanFunction::random(n, rng.derive(1));
            BooleanFunction g = BooleanFunction::random(n, rng.derive(2));
            CellOutput out;
            out.rows = identities_suite(f, g);
            return out;
        });
    return jobs;
}

// One cell per seeded instance; each emits the five always-true rows: the two
// spectral identities plus the exchange, paired-exchange, and
// hypercontractivity inequalities on random inputs of the same size.
inline std::vector<CellFn> inequalities_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"instances", "n-max", "d", "tuple", "q"});
    long long instances = opt_int(cfg, "instances", 100, 0, 1000000);
    int n_max = static_cast<int>(opt_int(cfg, "n-max", 8, 2, 12));
    int d = static_cast<int>(opt_int(cfg, "d", 2, 1, 6));
    int tuple = static_cast<int>(opt_int(cfg, "tuple", 3, 1, 8));
    long double q = opt_real(cfg, "q", 4.0L);
    std::vector<CellFn> jobs;
    for (long long i = 0; i < instances; ++i)
        jobs.push_back([n_max, d, tuple, q](std::uint64_t cell_seed) {
            Rng rng(cell_seed);
            int n = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - 1)));
            BooleanFunction f = BooleanFunction::random(n, rng.derive(1));
            BooleanFunction g = BooleanFunction::random(n, rng.derive(2));
            CellOutput out;
            for (auto& row : identities_suite(f, g))
                if (row.lemma == "degree-influence-sum" ||
                    row.lemma == "cross-influence-restriction")
                    out.rows.push_back(std::move(row));
            int dn = std::min(d, n);
            std::vector<RealFunction> h, hp;
            for (int j = 0; j < tuple; ++j) {
                h.push_back(random_degree_poly(n, dn, rng.derive(10 + j)));
                hp.push_back(random_degree_poly(n, n, rng.derive(40 + j)));
            }
            out.rows.push_back(exchange_check(h, dn));
            out.rows.push_back(exchange_check_paired(h, hp, dn));
            out.rows.push_back(
                hypercontractivity_check(random_degree_poly(n, std::min(3, n), rng.derive(70)), q));
            return out;
        });
    return jobs;
}

inline std::vector<CellFn> base_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"d-list", "delta-exp-list"});
    auto ds = opt_int_list(cfg, "d-list", "1..8", 0, 16);
    auto exps = opt_int_list(cfg, "delta-exp-list", "1..20", 1, 64);
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        for (int d : ds)
            for (int e : exps)
                jobs.push_back([spec, d, e](std::uint64_t) {
                    BooleanFunction f = make_function(spec);
                    RealFunction g = band_of(f, 0, std::min(d, f.n));
                    BaseCaseReport rep =
                        base_case_check(f, g, d, powl(2.0L, -static_cast<long double>(e)));
                    CellOutput out;
                    out.rows = {rep.max_term, rep.power_sum};
                    return out;
                });
    return jobs;
}

// Degree-10 homogeneous slice of each family against the ladder inequality;
// exponents deep enough for the collapsed single-threshold form add its row.
inline std::vector<CellFn> boosted_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"eta-exp-list"});
    auto exps = opt_int_list(cfg, "eta-exp-list", "1,2,1100", 1, 100000);
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        for (int e : exps)
            jobs.push_back([spec, e](std::uint64_t) {
                BooleanFunction f = make_function(spec);
                // Families too small for a degree-10 slice contribute an
                // all-zero g: the ladder holds trivially and the row records it.
                RealFunction g = f.n < 10 ? RealFunction(f.n, 0) : band_of(f, 10, 10);
                ParameterSchedule bs =
                    boosted_base_schedule({-static_cast<long double>(e) * logl(10.0L)});
                BoostedBaseReport rep = boosted_base_check(f, g, bs);
                CellOutput out;
                out.rows.push_back(rep.ladder);
                if (rep.collapsed_applicable) out.rows.push_back(rep.collapsed);
                return out;
            });
    return jobs;
}

inline std::vector<CellFn> main_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"alpha", "eps", "d-list", "delta-exp-list", "levels"});
    Frac alpha = opt_frac(cfg, "alpha", Frac(1, 2));
    long double eps = opt_real(cfg, "eps", 0.25L);
    auto ds = opt_int_list(cfg, "d-list", "4", 2, 24);
    auto exps = opt_int_list(cfg, "delta-exp-list", "2", 1, 64);
    int levels = static_cast<int>(opt_int(cfg, "levels", 1, 1, 2));
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        for (int d : ds)
            for (int e : exps)
                jobs.push_back([spec, alpha, eps, d, e, levels](std::uint64_t) {
                    if (levels == 2 && d < 4)
                        throw input_error("two-level schedule needs d >= 4");
                    long double lnd = -static_cast<long double>(e) * logl(2.0L);
                    std::vector<long double> degrees, deltas;
                    if (levels == 2) {
                        degrees = {static_cast<long double>(d) / 2, static_cast<long double>(d)};
                        deltas = {lnd, 2 * lnd};
                    } else {
                        degrees = {static_cast<long double>(d)};
                        deltas = {lnd};
                    }
                    ParameterSchedule ps(alpha.to_long_double(), eps, degrees, deltas);
                    BooleanFunction f = make_function(spec);
                    int lo = static_cast<int>((alpha.num * d + alpha.den - 1) / alpha.den);
                    int hi = std::min(d, f.n);
                    RealFunction band =
                        lo > hi ? RealFunction(f.n, 0) : band_of(f, lo, hi);
                    AlmostHomogeneous g(std::move(band), alpha, d);
                    CellOutput out;
                    for (auto form : {MainTheorem::max_term, MainTheorem::power_sum,
                                      MainTheorem::boosted})
                        out.rows.push_back(main_inequality_check(f, g, ps, form));
                    return out;
                });
    return jobs;
}

inline std::vector<CellFn> corollaries_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"alpha", "eps", "d-list", "delta-exp-list"});
    long double alpha = opt_real(cfg, "alpha", 0.5L);
    long double eps = opt_real(cfg, "eps", 0.5L);
    auto ds = opt_int_list(cfg, "d-list", "4", 2, 24);
    auto exps = opt_int_list(cfg, "delta-exp-list", "10", 1, 64);
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        for (int d : ds)
            for (int e : exps)
                jobs.push_back([spec, alpha, eps, d, e](std::uint64_t) {
                    BooleanFunction f = make_function(spec);
                    int lo = static_cast<int>(ceill(alpha * d - 1e-12L));
                    int hi = std::min(d, f.n);
                    RealFunction g = lo > hi ? RealFunction(f.n, 0) : band_of(f, lo, hi);
                    long double delta = powl(2.0L, -static_cast<long double>(e));
                    CellOutput out;
                    for (auto form : {MainTheorem::max_term, MainTheorem::power_sum,
                                      MainTheorem::boosted})
                        out.rows.push_back(
                            corollary_param_check(f, g, d, delta, alpha, eps, form));
                    return out;
                });
    return jobs;
}

// Per family: the fitted witness constant, the entropy/weighted-degree fit,
// and the small-coefficient concentration mass, each against a configurable
// ceiling.  These rows report fitted constants rather than proven bounds, so
// the ceilings are generous by default.
inline std::vector<CellFn> headline_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"c-max", "k-max", "conc-c-max", "conc-eta"});
    long double c_max = opt_real(cfg, "c-max", 3.0L);
    long double k_max = opt_real(cfg, "k-max", 3.0L);
    long double conc_c_max = opt_real(cfg, "conc-c-max", 3.0L);
    long double conc_eta = opt_real(cfg, "conc-eta", 0.5L);
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        jobs.push_back([spec, c_max, k_max, conc_c_max, conc_eta](std::uint64_t) {
            BooleanFunction f = make_function(spec);
            CellOutput out;

            WitnessReport w = min_entropy_witness(f);
            InequalityReport rw;
            rw.lemma = "witness-constant";
            rw.params = w.params;
            rw.lhs = w.c_star;
            rw.rhs = c_max;
            rw.slack = rw.rhs - rw.lhs;
            rw.term1 = w.ratio;
            rw.term2 = w.itilde;
            rw.term3 = w.c_min;
            rw.witness = mask_to_string(w.witness);
            rw.pass = w.found && within_relative(rw.lhs, rw.rhs);
            out.rows.push_back(rw);

            EntropyFitReport ef = entropy_bound_fit(f);
            InequalityReport re;
            re.lemma = "entropy-fit";
            re.params = ef.params;
            re.lhs = ef.lhs;
            re.rhs = k_max * ef.structural;
            re.slack = re.rhs - re.lhs;
            re.term1 = ef.weighted_sum;
            re.term2 = ef.influence;
            re.term3 = ef.fitted_k;
            re.pass = within_relative(re.lhs, re.rhs);
            out.rows.push_back(re);

            // The smallest constant whose threshold meets the eta * var mass
            // bound (an infimum), against the calibrated ceiling.
            ConcentrationReport cr = concentration_mass(f, conc_c_max, conc_eta);
            InequalityReport rc;
            rc.lemma = "concentration";
            rc.params = cr.params;
            rc.lhs = cr.minimal_c;
            rc.rhs = conc_c_max;
            rc.slack = rc.rhs - rc.lhs;
            rc.term1 = cr.mass;
            rc.term2 = cr.bound;
            rc.term3 = cr.itilde;
            rc.pass = within_relative(rc.lhs, rc.rhs);
            out.rows.push_back(rc);
            return out;
        });
    return jobs;
}

// Monte Carlo split tables: how often a uniform partition keeps a size-d set
// inside the sieve window, against the analytic lower bounds (per part, with
// the union factor, and the exact-even-split floor when d/m is integral).
inline std::vector<CellFn> mc_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"d-list", "m-list", "alpha", "eps", "trials"});
    auto ds = opt_int_list(cfg, "d-list", "16,32,64", 1, 4096);
    auto ms = opt_int_list(cfg, "m-list", "2,4", 1, 64);
    Frac alpha = opt_frac(cfg, "alpha", Frac(1, 2));
    Frac eps = opt_frac(cfg, "eps", Frac(1, 2));
    long long trials = opt_int(cfg, "trials", 20000, 1, 100000000);
    std::vector<CellFn> jobs;
    for (int d : ds)
        for (int m : ms)
            jobs.push_back([d, m, alpha, eps, trials](std::uint64_t cell_seed) {
                SplitProbabilityReport r =
                    split_probability_check(d, m, alpha, eps, trials, cell_seed);
                std::ostringstream ps;
                ps << "d=" << d << " m=" << m << " alpha=" << alpha.num << "/"
                   << alpha.den << " eps=" << eps.num << "/" << eps.den
                   << " trials=" << trials;
                long double sw = monte_carlo_sigma(r.window_rate, trials);
                CellOutput out;

                InequalityReport ru;
                ru.lemma = "split-window";
                ru.params = ps.str();
                ru.lhs = r.union_window_bound;
                ru.rhs = r.window_rate + 5 * sw;
                ru.slack = ru.rhs - ru.lhs;
                ru.term1 = r.window_rate;
                ru.term2 = sw;
                ru.witness = "hits=" + std::to_string(r.window_hits) + "/" +
                             std::to_string(trials);
                ru.pass = r.window_pass;
                out.rows.push_back(ru);

                InequalityReport rs = ru;
                rs.lemma = "split-window-stated";
                rs.lhs = r.stated_window_bound;
                rs.slack = rs.rhs - rs.lhs;
                rs.pass = r.window_pass_stated;
                out.rows.push_back(rs);

                if (r.split_defined) {
                    long double ss = monte_carlo_sigma(r.split_rate, trials);
                    InequalityReport rv;
                    rv.lemma = "split-even";
                    rv.params = ps.str();
                    rv.lhs = r.split_bound;
                    rv.rhs = r.split_rate + 5 * ss;
                    rv.slack = rv.rhs - rv.lhs;
                    rv.term1 = r.split_rate;
                    rv.term2 = ss;
                    rv.term3 = static_cast<long double>(r.v);
                    rv.witness = "hits=" + std::to_string(r.split_hits) + "/" +
                                 std::to_string(trials);
                    rv.pass = r.split_pass;
                    out.rows.push_back(rv);
                }
                return out;
            });
    return jobs;
}

// Runs the query-access learner on each family and scores the returned
// hypothesis: disagreement with the oracle's labels must stay within the
// noise rate plus the accuracy target.
inline std::vector<CellFn> learner_cells(const SuiteConfig& cfg) {
    require_known_options(cfg, {"k", "eps", "noise", "budget"});
    long double k_budget = opt_real(cfg, "k", 2.0L);
    long double eps = opt_real(cfg, "eps", 0.25L);
    long double noise = opt_real(cfg, "noise", 0.0L);
    long long budget = opt_int(cfg, "budget", 2000000000LL, 1, 1LL << 62);
    if (!(noise >= 0 && noise < 0.5L))
        throw input_error("option noise must lie in [0, 0.5)");
    std::vector<CellFn> jobs;
    for (const std::string& spec : cfg.families)
        jobs.push_back([spec, k_budget, eps, noise, budget](std::uint64_t cell_seed) {
            BooleanFunction f = make_function(spec);
            MembershipOracle oracle =
                noise > 0 ? MembershipOracle::noisy(f, noise, hash_mix(cell_seed, 0xf11b))
                          : MembershipOracle::exact(f);
            LearnResult res = agnostic_learn(oracle, k_budget, eps, cell_seed, budget);
            InequalityReport row;
            row.lemma = "learner-error";
            row.params = res.params;
            row.lhs = res.error_estimate;
            row.rhs = noise + eps;
            row.slack = row.rhs - row.lhs;
            row.term1 = res.theta;
            row.term2 = res.tau;
            row.term3 = res.error_sigma;
            row.witness = std::to_string(res.masks.size()) + " characters";
            row.pass = within_relative(row.lhs, row.rhs);
            CellOutput out;
            out.rows.push_back(row);
            out.learns.push_back(std::move(res));
            return out;
        });
    return jobs;
}

inline std::vector<CellFn> build_cells(const SuiteConfig& cfg) {
    if (cfg.suite == "identities") return identities_cells(cfg);
    if (cfg.suite == "inequalities") return inequalities_cells(cfg);
    if (cfg.suite == "base") return base_cells(cfg);
    if (cfg.suite == "boosted") return boosted_cells(cfg);
    if (cfg.suite == "main") return main_cells(cfg);
    if (cfg.suite == "corollaries") return corollaries_cells(cfg);
    if (cfg.suite == "headline") return headline_cells(cfg);
    if (cfg.suite == "mc") return mc_cells(cfg);
    if (cfg.suite == "learner") return learner_cells(cfg);
    throw input_error(
        "unknown suite '" + cfg.suite +
        "' (expected identities, inequalities, base, boosted, main, corollaries, "
        "headline, mc, or learner)");
}

// Self-test corruption: pull the right-hand side just below the left so every
// comparator must report a violation; proves the failure path end to end.
inline void corrupt_row(InequalityReport& r) {
    r.rhs = r.lhs - std::max(1.0L, fabsl(r.lhs)) * 1e-6L;
    r.slack = r.rhs - r.lhs;
    r.params += " selfTest=1";
    r.pass = r.exact ? r.lhs == r.rhs : within_relative(r.lhs, r.rhs);
}

inline long double fitted_ratio(const InequalityReport& r) {
    if (r.rhs == 0) return r.lhs == 0 ? 0.0L : 9.9e99L;
    long double ratio = r.lhs / r.rhs;
    return std::isfinite(ratio) ? ratio : 9.9e99L;
}

}  // namespace detail

inline RunReport run_suite(const SuiteConfig& cfg) {
    auto t0 = std::chrono::steady_clock::now();
    if (cfg.threads < 1 || cfg.threads > 256)
        throw input_error("threads must lie in [1, 256]");
    std::vector<detail::CellFn> jobs = detail::build_cells(cfg);
    if (jobs.size() > 200000) throw resource_error("suite grid has too many cells");

    std::vector<detail::CellOutput> results(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) break;
            try {
                results[i] = jobs[i](hash_mix(cfg.seed, i));
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    std::size_t workers = std::min<std::size_t>(cfg.threads, jobs.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    RunReport rep;
    rep.config = cfg;
    for (auto& cell : results) {
        for (auto& row : cell.rows) rep.rows.push_back(std::move(row));
        for (auto& lr : cell.learns) rep.learn_rows.push_back(std::move(lr));
    }
    if (cfg.self_test)
        for (auto& row : rep.rows) detail::corrupt_row(row);

    rep.aggregate.rows_total = static_cast<long long>(rep.rows.size());
    for (const auto& row : rep.rows) {
        if (row.pass)
            ++rep.aggregate.rows_passed;
        else
            ++rep.aggregate.violations;
        long double ratio = detail::fitted_ratio(row);
        auto [it, fresh] = rep.aggregate.max_constant.try_emplace(row.lemma, ratio);
        if (!fresh && ratio > it->second) it->second = ratio;
    }
    rep.aggregate.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count();
    return rep;
}

inline int suite_exit_code(const RunReport& rep) {
    return rep.aggregate.violations > 0 ? 2 : 0;
}

namespace detail {

inline nlohmann::ordered_json row_json(const InequalityReport& r) {
    nlohmann::ordered_json j;
    j["lemma"] = r.lemma;
    j["params"] = r.params;
    j["lhs"] = static_cast<double>(r.lhs);
    j["rhs"] = static_cast<double>(r.rhs);
    j["slack"] = static_cast<double>(r.slack);
    j["pass"] = r.pass;
    j["exact"] = r.exact;
    j["term1"] = static_cast<double>(r.term1);
    j["term2"] = static_cast<double>(r.term2);
    j["term3"] = static_cast<double>(r.term3);
    j["witness"] = r.witness;
    return j;
}

inline nlohmann::ordered_json learn_json(const LearnResult& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["k"] = static_cast<double>(r.k_budget);
    j["eps"] = static_cast<double>(r.eps);
    j["theta"] = static_cast<double>(r.theta);
    j["masks"] = r.masks;
    nlohmann::ordered_json coeffs = nlohmann::ordered_json::array();
    for (const auto& [mask, value] : r.poly.coeff)
        coeffs.push_back({mask, static_cast<double>(value)});
    j["coefficients"] = std::move(coeffs);
    j["tau"] = static_cast<double>(r.tau);
    j["error"] = static_cast<double>(r.error_estimate);
    j["error_sigma"] = static_cast<double>(r.error_sigma);
    j["queries"] = r.queries;
    j["coeff_samples"] = r.coeff_samples;
    j["error_samples"] = r.error_samples;
    j["seed"] = r.seed;
    j["regression"] = r.regression;
    j["params"] = r.params;
    return j;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

inline std::string num_str(long double v) {
    return nlohmann::json(static_cast<double>(v)).dump();
}

inline std::string emit_json(const RunReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["version"] = rep.version;
    nlohmann::ordered_json cfg;
    cfg["suite"] = rep.config.suite;
    cfg["families"] = rep.config.families;
    cfg["options"] = rep.config.options;
    cfg["seed"] = rep.config.seed;
    cfg["self_test"] = rep.config.self_test;
    j["config"] = std::move(cfg);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) rows.push_back(row_json(r));
    j["rows"] = std::move(rows);
    nlohmann::ordered_json learns = nlohmann::ordered_json::array();
    for (const auto& r : rep.learn_rows) learns.push_back(learn_json(r));
    j["learn"] = std::move(learns);
    nlohmann::ordered_json agg;
    agg["rows_total"] = rep.aggregate.rows_total;
    agg["rows_passed"] = rep.aggregate.rows_passed;
    agg["violations"] = rep.aggregate.violations;
    nlohmann::ordered_json mc;
    for (const auto& [lemma, value] : rep.aggregate.max_constant)
        mc[lemma] = static_cast<double>(value);
    agg["max_constant"] = std::move(mc);
    j["aggregate"] = std::move(agg);
    return j.dump(2) + "\n";
}

inline std::string emit_csv(const RunReport& rep) {
    std::string out = "lemma,params,lhs,rhs,slack,pass,exact,term1,term2,term3,witness\n";
    for (const auto& r : rep.rows) {
        out += csv_field(r.lemma) + "," + csv_field(r.params) + "," + num_str(r.lhs) +
               "," + num_str(r.rhs) + "," + num_str(r.slack) + "," +
               (r.pass ? "1" : "0") + "," + (r.exact ? "1" : "0") + "," +
               num_str(r.term1) + "," + num_str(r.term2) + "," + num_str(r.term3) +
               "," + csv_field(r.witness) + "\n";
    }
    return out;
}

inline std::string emit_markdown(const RunReport& rep) {
    std::ostringstream md;
    md << "# Suite report: " << rep.config.suite << "\n\n";
    md << "| field | value |\n|---|---|\n";
    md << "| version | " << rep.version << " |\n";
    md << "| seed | " << rep.config.seed << " |\n";
    md << "| families | " << rep.config.families.size() << " |\n";
    std::string opts;
    for (const auto& [key, value] : rep.config.options)
        opts += (opts.empty() ? "" : " ") + key + "=" + value;
    md << "| options | " << (opts.empty() ? "(defaults)" : opts) << " |\n";
    md << "| self-test | " << (rep.config.self_test ? "on" : "off") << " |\n";
    md << "| rows | " << rep.aggregate.rows_total << " |\n";
    md << "| passed | " << rep.aggregate.rows_passed << " |\n";
    md << "| violations | " << rep.aggregate.violations << " |\n";
    md << "| runtime | " << rep.aggregate.runtime_ms << " ms |\n";

    md << "\n## Lemmas\n\n| lemma | rows | passed | max constant |\n|---|---:|---:|---:|\n";
    std::map<std::string, std::pair<long long, long long>> tally;
    for (const auto& r : rep.rows) {
        auto& t = tally[r.lemma];
        ++t.first;
        t.second += r.pass;
    }
    for (const auto& [lemma, t] : tally)
        md << "| " << lemma << " | " << t.first << " | " << t.second << " | "
           << num_str(rep.aggregate.max_constant.at(lemma)) << " |\n";

    if (rep.aggregate.violations > 0) {
        md << "\n## Violations\n\n| lemma | params | lhs | rhs | witness |\n"
           << "|---|---|---:|---:|---|\n";
        long long shown = 0;
        for (const auto& r : rep.rows) {
            if (r.pass) continue;
            md << "| " << r.lemma << " | " << r.params << " | " << num_str(r.lhs)
               << " | " << num_str(r.rhs) << " | " << r.witness << " |\n";
            if (++shown == 50) {
                md << "| ... | " << (rep.aggregate.violations - shown)
                   << " more | | | |\n";
                break;
            }
        }
    }

    if (!rep.learn_rows.empty()) {
        md << "\n## Learned hypotheses\n\n"
           << "| n | budget | eps | theta | characters | error | queries |\n"
           << "|---:|---:|---:|---:|---:|---:|---:|\n";
        for (const auto& r : rep.learn_rows)
            md << "| " << r.n << " | " << num_str(r.k_budget) << " | "
               << num_str(r.eps) << " | " << num_str(r.theta) << " | "
               << r.masks.size() << " | " << num_str(r.error_estimate) << " | "
               << r.queries << " |\n";
    }
    return md.str();
}

}  // namespace detail

inline std::string emit_report(const RunReport& rep, const std::string& format) {
    if (format == "json") return detail::emit_json(rep);
    if (format == "csv") return detail::emit_csv(rep);
    if (format == "markdown") return detail::emit_markdown(rep);
    throw input_error("unknown report format '" + format +
                      "' (expected json, csv, or markdown)");
}

}  // namespace bfa
