// bfa: exact Fourier analysis of Boolean functions on the hypercube.
//
// Subcommands:
//   analyze  spectral summary of one function (JSON; optional spectrum CSV)
//   verify   run a named check suite over a family/parameter grid
//   learn    query-access sparse learner against a target function
//   zoo      list generator families / emit truth-table files
//   report   re-render a saved JSON report as json, csv, or markdown
//
// Exit codes: 0 success, 2 at least one check violated, 3 bad configuration,
// malformed input, or resource limits.  When BFA_CACHE_DIR is set, bare
// output filenames (no directory part) resolve into that directory.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "bfa/learner.hpp"
#include "bfa/orbits.hpp"
#include "bfa/suite.hpp"

namespace {

using namespace bfa;

std::string resolve_out(const std::string& path) {
    if (path.empty()) return path;
    std::filesystem::path p(path);
    if (p.is_absolute() || p.has_parent_path()) return path;
    const char* cache = std::getenv("BFA_CACHE_DIR");
    if (!cache || !*cache) return path;
    std::error_code ec;
    std::filesystem::create_directories(cache, ec);
    if (ec) throw resource_error("cannot create cache dir " + std::string(cache));
    return (std::filesystem::path(cache) / p).string();
}

// Empty path: stdout.  Otherwise write to the resolved path and confirm on
// stderr so stdout stays clean for piping.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::string full = resolve_out(path);
    std::ofstream os(full, std::ios::binary);
    if (!os) throw resource_error("cannot open " + full + " for writing");
    os << text;
    os.flush();
    if (!os) throw resource_error("failed while writing " + full);
    std::cerr << "wrote " << full << "\n";
}

std::map<std::string, std::string> parse_options(const std::vector<std::string>& kvs) {
    std::map<std::string, std::string> out;
    for (const auto& kv : kvs) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw input_error("--opt wants key=value, got '" + kv + "'");
        out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return out;
}

nlohmann::ordered_json analyze_json(const BooleanFunction& f, const std::string& spec) {
    Spectrum s = spectrum(f);
    InfluenceProfile prof = influence_profile(f);
    EntropyReport ent01 = entropy_report(f);
    EntropyReport entpm = entropy_report(f, -1, RangeConvention::plus_minus_one);

    int degree = 0;
    long long support = 0;
    std::vector<mask_t> order;
    for (mask_t S = 0; S < s.size(); ++S) {
        if (s.is_zero(S)) continue;
        ++support;
        degree = std::max(degree, popcount(S));
        order.push_back(S);
    }
    std::sort(order.begin(), order.end(), [&](mask_t a, mask_t b) {
        long double va = std::fabs(s.coeff_long_double(a));
        long double vb = std::fabs(s.coeff_long_double(b));
        if (va != vb) return va > vb;
        return a < b;
    });
    if (order.size() > 16) order.resize(16);

    nlohmann::ordered_json j;
    j["schema"] = "bfa-analyze/1";
    j["family"] = spec;
    j["n"] = f.n;
    j["points"] = static_cast<std::uint64_t>(f.size());
    j["mean"] = expectation(f).to_double();
    j["variance"] = prof.variance.to_double();
    j["influence"] = prof.total.to_double();
    j["flip_influence"] = prof.flip_total.to_double();
    j["itilde"] = prof.normalized_defined ? static_cast<double>(prof.normalized) : 0.0;
    j["degree"] = degree;
    j["support"] = support;
    j["entropy"] = static_cast<double>(ent01.entropy);
    j["min_entropy"] = static_cast<double>(ent01.min_entropy);
    j["entropy_pm"] = static_cast<double>(entpm.entropy);
    j["min_entropy_pm"] = static_cast<double>(entpm.min_entropy);
    nlohmann::ordered_json infl = nlohmann::ordered_json::array();
    for (const auto& c : prof.coordinate) infl.push_back(c.to_double());
    j["influences"] = std::move(infl);
    nlohmann::ordered_json top = nlohmann::ordered_json::array();
    for (mask_t S : order) {
        Dyadic c = s.coeff(S);
        top.push_back({S, c.num, c.den()});
    }
    j["top_coefficients"] = std::move(top);

    if (prof.variance.sign() > 0) {
        WitnessReport w = min_entropy_witness(f);
        nlohmann::ordered_json wj;
        wj["set"] = mask_to_string(w.witness);
        wj["size"] = w.witness_size;
        wj["value"] = static_cast<double>(w.witness_value);
        wj["ratio"] = static_cast<double>(w.ratio);
        wj["c_star"] = static_cast<double>(w.c_star);
        wj["size_cap"] = static_cast<double>(w.size_cap);
        j["witness"] = std::move(wj);

        EntropyFitReport ef = entropy_bound_fit(f);
        nlohmann::ordered_json fj;
        fj["entropy"] = static_cast<double>(ef.lhs);
        fj["weighted_sum"] = static_cast<double>(ef.weighted_sum);
        fj["influence"] = static_cast<double>(ef.influence);
        fj["structural"] = static_cast<double>(ef.structural);
        fj["fitted_k"] = static_cast<double>(ef.fitted_k);
        j["entropy_fit"] = std::move(fj);
    }
    return j;
}

int run_analyze(const std::string& spec, int max_n, const std::string& out,
                const std::string& spectrum_out) {
    BooleanFunction f = make_function(spec, max_n);
    write_text(out, analyze_json(f, spec).dump(2) + "\n");
    if (!spectrum_out.empty()) {
        std::string full = resolve_out(spectrum_out);
        std::ofstream os(full, std::ios::binary);
        if (!os) throw resource_error("cannot open " + full + " for writing");
        write_spectrum_csv(spectrum(f), os);
        if (!os) throw resource_error("failed while writing " + full);
        std::cerr << "wrote " << full << "\n";
    }
    return 0;
}

int run_verify(SuiteConfig cfg, const std::vector<std::string>& families, int max_n) {
    for (const auto& fam : families) {
        if (fam == "zoo") {
            for (auto& spec : standard_families(max_n)) cfg.families.push_back(spec);
        } else {
            cfg.families.push_back(fam);
        }
    }
    if (cfg.families.empty()) cfg.families = standard_families(max_n);
    RunReport rep = run_suite(cfg);
    std::cerr << "suite " << cfg.suite << ": " << rep.aggregate.rows_passed << "/"
              << rep.aggregate.rows_total << " rows passed, "
              << rep.aggregate.violations << " violations, "
              << rep.aggregate.runtime_ms << " ms\n";
    write_text(cfg.out_path, emit_report(rep, cfg.format));
    return suite_exit_code(rep);
}

int run_learn(const std::string& target, long double noise, long double k_budget,
              long double eps, long long budget, std::uint64_t seed,
              const std::string& out) {
    if (!(noise >= 0 && noise < 0.5L))
        throw input_error("label noise must lie in [0, 0.5)");
    BooleanFunction f = make_function(target);
    MembershipOracle oracle =
        noise > 0 ? MembershipOracle::noisy(f, noise, hash_mix(seed, 0x6e6f6973ULL))
                  : MembershipOracle::exact(f);
    LearnResult res = agnostic_learn(oracle, k_budget, eps, seed, budget);
    ErrorEstimate clean = hypothesis_error(res.poly, f);

    nlohmann::ordered_json j;
    j["schema"] = "bfa-learn/1";
    j["target"] = target;
    j["noise"] = static_cast<double>(noise);
    nlohmann::ordered_json body = detail::learn_json(res);
    for (auto& [key, value] : body.items()) j[key] = std::move(value);
    j["clean_error"] = static_cast<double>(clean.value);
    write_text(out, j.dump(2) + "\n");
    std::cerr << "learned " << res.masks.size() << " characters, error estimate "
              << static_cast<double>(res.error_estimate) << ", clean error "
              << static_cast<double>(clean.value) << ", " << res.queries
              << " queries\n";
    return 0;
}

int run_zoo(bool list, const std::string& emit_spec, const std::string& out, int max_n) {
    const bool emitting = !emit_spec.empty();
    if (list == emitting)
        throw input_error("zoo wants exactly one of --list or --emit <spec>");
    if (list) {
        std::cout << "families (spec syntax id:key=value,...):\n";
        static const std::map<std::string, std::string> usage = {
            {"dictator", "dictator:n=3"},
            {"parity", "parity:n=4"},
            {"majority", "majority:n=5 (odd n)"},
            {"tribes", "tribes:w=2,s=3 (s tribes of width w)"},
            {"address", "address:a=2 (n = a + 2^a)"},
            {"random-dnf", "random-dnf:n=8,terms=6,width=3,seed=5"},
            {"graph-property", "graph-property:vertices=5,property=triangle"},
            {"inner-product", "inner-product:k=3 (n = 2k)"},
            {"from-file", "from-file:path=<truth-table file>"},
        };
        for (const auto& id : family_ids()) {
            auto it = usage.find(id);
            std::cout << "  " << id << "\t"
                      << (it == usage.end() ? std::string("(no example)") : it->second)
                      << "\n";
        }
        std::cout << "standard menu (n <= " << max_n << "):\n";
        for (const auto& spec : standard_families(max_n))
            std::cout << "  " << spec << "\n";
        return 0;
    }
    BooleanFunction f = make_function(emit_spec, max_n);
    std::string name = out;
    if (name.empty()) {
        name = emit_spec;
        for (char& c : name)
            if (c == ':' || c == ',' || c == '=' || c == '/') c = '_';
        name += ".tt";
    }
    std::string full = resolve_out(name);
    f.save(full);
    std::cerr << "wrote " << full << " (n=" << f.n << ")\n";
    return 0;
}

// Reconstruct enough of a RunReport from its serialized form to re-render it.
RunReport parse_report(const nlohmann::ordered_json& j) {
    if (!j.contains("schema") || j["schema"] != std::string(kReportSchema))
        throw input_error("not a suite report (expected schema " +
                          std::string(kReportSchema) + ")");
    RunReport rep;
    rep.version = j.at("version").get<std::string>();
    const auto& cfg = j.at("config");
    rep.config.suite = cfg.at("suite").get<std::string>();
    rep.config.families = cfg.at("families").get<std::vector<std::string>>();
    rep.config.options = cfg.at("options").get<std::map<std::string, std::string>>();
    rep.config.seed = cfg.at("seed").get<std::uint64_t>();
    rep.config.self_test = cfg.at("self_test").get<bool>();
    for (const auto& rj : j.at("rows")) {
        InequalityReport r;
        r.lemma = rj.at("lemma").get<std::string>();
        r.params = rj.at("params").get<std::string>();
        r.lhs = rj.at("lhs").is_number() ? rj.at("lhs").get<double>() : 0.0L;
        r.rhs = rj.at("rhs").is_number() ? rj.at("rhs").get<double>() : 0.0L;
        r.slack = rj.at("slack").is_number() ? rj.at("slack").get<double>() : 0.0L;
        r.pass = rj.at("pass").get<bool>();
        r.exact = rj.at("exact").get<bool>();
        r.term1 = rj.at("term1").is_number() ? rj.at("term1").get<double>() : 0.0L;
        r.term2 = rj.at("term2").is_number() ? rj.at("term2").get<double>() : 0.0L;
        r.term3 = rj.at("term3").is_number() ? rj.at("term3").get<double>() : 0.0L;
        r.witness = rj.at("witness").get<std::string>();
        rep.rows.push_back(std::move(r));
    }
    for (const auto& lj : j.at("learn")) {
        LearnResult r;
        r.n = lj.at("n").get<int>();
        r.k_budget = lj.at("k").get<double>();
        r.eps = lj.at("eps").get<double>();
        r.theta = lj.at("theta").get<double>();
        r.masks = lj.at("masks").get<std::vector<mask_t>>();
        r.poly.n = r.n;
        for (const auto& pair : lj.at("coefficients"))
            r.poly.coeff[pair.at(0).get<mask_t>()] = pair.at(1).get<double>();
        r.poly.refresh();
        r.tau = lj.at("tau").get<double>();
        r.error_estimate = lj.at("error").get<double>();
        r.error_sigma = lj.at("error_sigma").get<double>();
        r.queries = lj.at("queries").get<long long>();
        r.coeff_samples = lj.at("coeff_samples").get<long long>();
        r.error_samples = lj.at("error_samples").get<long long>();
        r.seed = lj.at("seed").get<std::uint64_t>();
        r.regression = lj.at("regression").get<std::string>();
        r.params = lj.at("params").get<std::string>();
        rep.learn_rows.push_back(std::move(r));
    }
    rep.aggregate.rows_total = static_cast<long long>(rep.rows.size());
    for (const auto& r : rep.rows) {
        if (r.pass)
            ++rep.aggregate.rows_passed;
        else
            ++rep.aggregate.violations;
        long double ratio = detail::fitted_ratio(r);
        auto [it, fresh] = rep.aggregate.max_constant.try_emplace(r.lemma, ratio);
        if (!fresh && ratio > it->second) it->second = ratio;
    }
    return rep;
}

int run_report(const std::string& in, const std::string& format, const std::string& out) {
    std::ifstream is(in, std::ios::binary);
    if (!is) throw resource_error("cannot open " + in + " for reading");
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(is);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error("malformed report JSON in " + in + ": " + e.what());
    }
    if (format == "json") {
        // Byte-stable re-render straight from the parsed document.
        parse_report(j);  // validate shape
        write_text(out, j.dump(2) + "\n");
        return 0;
    }
    write_text(out, emit_report(parse_report(j), format));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Fourier analysis of Boolean functions"};
    app.require_subcommand(1);

    auto* analyze = app.add_subcommand("analyze", "spectral summary of one function");
    std::string an_family;
    int an_max_n = kDefaultMaxN;
    std::string an_out, an_spectrum;
    analyze->add_option("--family", an_family, "zoo spec or from-file:path=...")
        ->required();
    analyze->add_option("--max-n", an_max_n, "coordinate cap");
    analyze->add_option("--out", an_out, "write the JSON summary here (default stdout)");
    analyze->add_option("--spectrum", an_spectrum, "also write the full spectrum CSV");

    auto* verify = app.add_subcommand("verify", "run a named check suite");
    SuiteConfig cfg;
    std::vector<std::string> ver_families;
    int ver_max_n = 10;
    verify
        ->add_option("--suite", cfg.suite,
                     "identities, inequalities, base, boosted, main, corollaries, "
                     "headline, mc, or learner")
        ->required();
    verify->add_option("--family", ver_families,
                       "zoo spec ('zoo' expands the standard menu); repeatable");
    verify->add_option("--max-n", ver_max_n,
                       "menu cap when no --family is given (default 10)");
    verify->add_option("--seed", cfg.seed, "suite seed (default 1)");
    verify->add_option("--threads", cfg.threads, "worker threads (default 1)");
    std::vector<std::string> ver_opts;
    verify->add_option("--opt", ver_opts, "suite option key=value; repeatable");
    verify->add_option("--out", cfg.out_path, "write the report here (default stdout)");
    verify->add_option("--format", cfg.format, "json, csv, or markdown (default json)");
    verify->add_flag("--self-test", cfg.self_test,
                     "corrupt every row to prove the violation exit path");

    auto* learn = app.add_subcommand("learn", "query-access sparse learner");
    std::string ln_target, ln_out;
    double ln_noise = 0.0, ln_k = 2.0, ln_eps = 0.1;
    long long ln_budget = 2000000000LL;
    std::uint64_t ln_seed = 1;
    learn->add_option("--target", ln_target, "zoo spec or from-file:path=...")
        ->required();
    learn->add_option("--noise", ln_noise, "label flip rate in [0, 0.5)");
    learn->add_option("--k", ln_k, "influence budget K >= 1 (sets the threshold)");
    learn->add_option("--eps", ln_eps, "accuracy target in (0, 1)");
    learn->add_option("--budget", ln_budget, "query budget");
    learn->add_option("--seed", ln_seed, "learner seed");
    learn->add_option("--out", ln_out, "write the JSON result here (default stdout)");

    auto* zoo = app.add_subcommand("zoo", "list families / emit truth tables");
    bool zoo_list = false;
    std::string zoo_emit, zoo_out;
    int zoo_max_n = 14;
    zoo->add_flag("--list", zoo_list, "list family ids and the standard menu");
    zoo->add_option("--emit", zoo_emit, "write this spec's truth table to a file");
    zoo->add_option("--out", zoo_out, "output path for --emit");
    zoo->add_option("--max-n", zoo_max_n, "coordinate cap / menu cap");

    auto* report = app.add_subcommand("report", "re-render a saved JSON report");
    std::string rp_in, rp_format = "markdown", rp_out;
    report->add_option("--in", rp_in, "saved JSON report")->required();
    report->add_option("--format", rp_format, "json, csv, or markdown (default markdown)");
    report->add_option("--out", rp_out, "write here (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (*analyze) return run_analyze(an_family, an_max_n, an_out, an_spectrum);
        if (*verify) {
            cfg.options = parse_options(ver_opts);
            return run_verify(std::move(cfg), ver_families, ver_max_n);
        }
        if (*learn)
            return run_learn(ln_target, ln_noise, ln_k, ln_eps, ln_budget, ln_seed,
                             ln_out);
        if (*zoo) return run_zoo(zoo_list, zoo_emit, zoo_out, zoo_max_n);
        if (*report) return run_report(rp_in, rp_format, rp_out);
    } catch (const input_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const resource_error& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
