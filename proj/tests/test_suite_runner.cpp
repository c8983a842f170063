#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "json.hpp"

#include "bfa/suite.hpp"

using namespace bfa;
using Catch::Approx;

namespace {

SuiteConfig small_identities() {
    SuiteConfig cfg;
    cfg.suite = "identities";
    cfg.families = {"majority:n=3", "parity:n=4"};
    cfg.options = {{"pairs", "3"}, {"pair-n", "5"}};
    cfg.seed = 9;
    cfg.threads = 1;
    return cfg;
}

bool all_pass(const RunReport& rep) {
    return std::all_of(rep.rows.begin(), rep.rows.end(),
                       [](const InequalityReport& r) { return r.pass; });
}

}  // namespace

TEST_CASE("identity battery covers families and seeded pairs", "[suite]") {
    RunReport rep = run_suite(small_identities());
    std::size_t per_cell = identities_suite(make_function("majority:n=3")).size();
    CHECK(rep.rows.size() == per_cell * 5);  // two families + three pairs
    CHECK(all_pass(rep));
    CHECK(rep.aggregate.rows_total == static_cast<long long>(rep.rows.size()));
    CHECK(rep.aggregate.rows_passed == rep.aggregate.rows_total);
    CHECK(rep.aggregate.violations == 0);
    CHECK(rep.learn_rows.empty());
    CHECK(suite_exit_code(rep) == 0);
    // Exact identities are tight: the fitted ratio for parseval never exceeds 1.
    REQUIRE(rep.aggregate.max_constant.count("parseval"));
    CHECK(rep.aggregate.max_constant.at("parseval") <= 1.0L + 1e-15L);
}

TEST_CASE("reruns and thread counts leave the bytes unchanged", "[suite]") {
    SuiteConfig cfg = small_identities();
    RunReport first = run_suite(cfg);
    cfg.threads = 4;
    RunReport threaded = run_suite(cfg);
    std::string one = emit_report(first, "json");
    CHECK(emit_report(threaded, "json") == one);
    RunReport again = run_suite(cfg);  // same config, fresh run
    CHECK(emit_report(again, "json") == one);
    // Execution details must never leak into the serialized report.
    CHECK(one.find("runtime") == std::string::npos);
    CHECK(one.find("threads") == std::string::npos);

    cfg.threads = 0;
    CHECK_THROWS_AS(run_suite(cfg), input_error);
}

TEST_CASE("json reports round-trip and carry the schema tag", "[suite]") {
    RunReport rep = run_suite(small_identities());
    std::string text = emit_report(rep, "json");
    auto parsed = nlohmann::ordered_json::parse(text);
    CHECK(parsed["schema"] == "bfa-report/1");
    CHECK(parsed["version"] == std::string(kToolVersion));
    CHECK(parsed["config"]["suite"] == "identities");
    CHECK(parsed["config"]["seed"] == 9);
    CHECK(parsed["config"]["families"].size() == 2);
    CHECK(parsed["config"]["options"]["pairs"] == "3");
    CHECK(parsed["rows"].size() == rep.rows.size());
    CHECK(parsed["learn"].is_array());
    CHECK(parsed["aggregate"]["violations"] == 0);
    CHECK(parsed.dump(2) + "\n" == text);  // stable field order round-trips
}

TEST_CASE("csv reports are a header plus one line per row", "[suite]") {
    RunReport rep = run_suite(small_identities());
    std::string text = emit_report(rep, "csv");
    CHECK(std::count(text.begin(), text.end(), '\n') ==
          static_cast<long long>(rep.rows.size()) + 1);
    CHECK(text.rfind("lemma,params,lhs,rhs,slack,pass,exact,term1,term2,term3,witness\n",
                     0) == 0);
}

TEST_CASE("markdown reports summarize every lemma", "[suite]") {
    RunReport rep = run_suite(small_identities());
    std::string md = emit_report(rep, "markdown");
    CHECK(md.find("# Suite report: identities") != std::string::npos);
    CHECK(md.find("| runtime | ") != std::string::npos);
    std::set<std::string> lemmas;
    for (const auto& r : rep.rows) lemmas.insert(r.lemma);
    for (const auto& lemma : lemmas)
        CHECK(md.find("| " + lemma + " | ") != std::string::npos);
    CHECK(md.find("## Violations") == std::string::npos);

    CHECK_THROWS_AS(emit_report(rep, "yaml"), input_error);
}

TEST_CASE("self-test corruption trips every comparator", "[suite]") {
    SuiteConfig cfg = small_identities();
    cfg.self_test = true;
    RunReport rep = run_suite(cfg);
    CHECK(rep.aggregate.rows_total > 0);
    CHECK(rep.aggregate.violations == rep.aggregate.rows_total);
    CHECK(rep.aggregate.rows_passed == 0);
    CHECK(suite_exit_code(rep) == 2);
    for (const auto& r : rep.rows) {
        CHECK_FALSE(r.pass);
        CHECK(r.params.find("selfTest=1") != std::string::npos);
    }
    CHECK(emit_report(rep, "markdown").find("## Violations") != std::string::npos);
}

TEST_CASE("empty grids produce empty passing reports", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "identities";
    cfg.seed = 1;
    RunReport rep = run_suite(cfg);
    CHECK(rep.rows.empty());
    CHECK(rep.aggregate.rows_total == 0);
    CHECK(suite_exit_code(rep) == 0);
    auto parsed = nlohmann::ordered_json::parse(emit_report(rep, "json"));
    CHECK(parsed["rows"].is_array());
    CHECK(parsed["rows"].empty());
    CHECK(emit_report(rep, "csv") ==
          "lemma,params,lhs,rhs,slack,pass,exact,term1,term2,term3,witness\n");
}

TEST_CASE("configs are validated before any cell runs", "[suite]") {
    SuiteConfig cfg = small_identities();
    cfg.suite = "nope";
    CHECK_THROWS_AS(run_suite(cfg), input_error);

    cfg = small_identities();
    cfg.options["bogus"] = "1";
    CHECK_THROWS_AS(run_suite(cfg), input_error);

    cfg = small_identities();
    cfg.options["pairs"] = "many";
    CHECK_THROWS_AS(run_suite(cfg), input_error);

    cfg = small_identities();
    cfg.options["pair-n"] = "40";
    CHECK_THROWS_AS(run_suite(cfg), input_error);

    // Family errors surface from worker threads as the usual input_error.
    cfg = small_identities();
    cfg.families = {"nosuch:n=3"};
    cfg.threads = 2;
    CHECK_THROWS_AS(run_suite(cfg), input_error);
}

TEST_CASE("always-true battery labels five rows per instance", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "inequalities";
    cfg.options = {{"instances", "4"}, {"n-max", "6"}};
    cfg.seed = 33;
    RunReport rep = run_suite(cfg);
    REQUIRE(rep.rows.size() == 20);
    CHECK(all_pass(rep));
    std::map<std::string, int> counts;
    for (const auto& r : rep.rows) ++counts[r.lemma];
    for (const char* lemma :
         {"degree-influence-sum", "cross-influence-restriction",
          "max-expectation-exchange", "paired-max-expectation-exchange",
          "hypercontractivity"})
        CHECK(counts[lemma] == 4);
}

TEST_CASE("threshold batteries sweep their parameter grids", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "base";
    cfg.families = {"majority:n=5"};
    cfg.options = {{"d-list", "1,2"}, {"delta-exp-list", "1,4"}};
    cfg.seed = 2;
    RunReport rep = run_suite(cfg);
    CHECK(rep.rows.size() == 8);  // 1 family x 2 degrees x 2 thresholds x 2 rows
    CHECK(all_pass(rep));

    cfg = SuiteConfig{};
    cfg.suite = "main";
    // The dictator has no mass in the [2, 4] window; its rows hold trivially.
    cfg.families = {"tribes:w=2,s=3", "dictator:n=3"};
    cfg.seed = 2;
    RunReport main_rep = run_suite(cfg);
    CHECK(main_rep.rows.size() == 6);  // 2 families x 3 theorem forms
    CHECK(all_pass(main_rep));

    cfg = SuiteConfig{};
    cfg.suite = "corollaries";
    cfg.families = {"majority:n=5"};
    cfg.seed = 2;
    RunReport cor_rep = run_suite(cfg);
    CHECK(cor_rep.rows.size() == 3);
    CHECK(all_pass(cor_rep));

    cfg = SuiteConfig{};
    cfg.suite = "boosted";
    cfg.families = {"parity:n=10", "majority:n=3"};
    cfg.options = {{"eta-exp-list", "1,1100"}};
    cfg.seed = 2;
    RunReport boost_rep = run_suite(cfg);
    // Exponent 1100 is past the collapse point, adding one row per family.
    CHECK(boost_rep.rows.size() == 6);
    CHECK(all_pass(boost_rep));
    int collapsed = 0;
    for (const auto& r : boost_rep.rows)
        collapsed += r.lemma == "boosted-base-collapsed";
    CHECK(collapsed == 2);
}

TEST_CASE("headline battery fits constants under its ceilings", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "headline";
    cfg.families = standard_families(8);
    cfg.seed = 3;
    RunReport rep = run_suite(cfg);
    REQUIRE(rep.rows.size() == cfg.families.size() * 3);
    CHECK(all_pass(rep));

    auto maj3 = std::find(cfg.families.begin(), cfg.families.end(),
                          std::string("majority:n=3"));
    REQUIRE(maj3 != cfg.families.end());
    std::size_t cell = static_cast<std::size_t>(maj3 - cfg.families.begin());
    const InequalityReport& witness = rep.rows[cell * 3];
    CHECK(witness.lemma == "witness-constant");
    CHECK(static_cast<double>(witness.lhs) == Approx(0.756470797366).margin(1e-9));
    CHECK(witness.witness == "{1}");
    const InequalityReport& entropy = rep.rows[cell * 3 + 1];
    CHECK(entropy.lemma == "entropy-fit");
    CHECK(static_cast<double>(entropy.term3) == Approx(1.3592983).margin(1e-6));
}

TEST_CASE("split tables meet their analytic floors", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "mc";
    cfg.options = {{"d-list", "8"}, {"m-list", "2,3"}, {"trials", "4000"}};
    cfg.seed = 5;
    RunReport rep = run_suite(cfg);
    // m = 2 divides d = 8 so the even-split row joins the two window rows.
    REQUIRE(rep.rows.size() == 5);
    CHECK(all_pass(rep));
    CHECK(rep.rows[0].lemma == "split-window");
    CHECK(rep.rows[1].lemma == "split-window-stated");
    CHECK(rep.rows[2].lemma == "split-even");
    CHECK(rep.rows[2].witness.rfind("hits=", 0) == 0);
    CHECK(rep.rows[3].lemma == "split-window");
    CHECK(rep.rows[4].lemma == "split-window-stated");
}

TEST_CASE("learner battery reports hypotheses and query counts", "[suite]") {
    SuiteConfig cfg;
    cfg.suite = "learner";
    cfg.families = {"parity:n=4"};
    cfg.options = {{"k", "1"}, {"eps", "0.25"}};
    cfg.seed = 12;
    RunReport rep = run_suite(cfg);
    REQUIRE(rep.rows.size() == 1);
    REQUIRE(rep.learn_rows.size() == 1);
    CHECK(rep.rows[0].lemma == "learner-error");
    CHECK(rep.rows[0].pass);
    const LearnResult& res = rep.learn_rows[0];
    CHECK(res.error_estimate == 0.0L);  // the hypothesis reproduces the parity
    CHECK(std::find(res.masks.begin(), res.masks.end(), full_mask(4)) !=
          res.masks.end());
    CHECK(res.queries > 0);

    auto parsed = nlohmann::ordered_json::parse(emit_report(rep, "json"));
    REQUIRE(parsed["learn"].size() == 1);
    CHECK(parsed["learn"][0]["queries"] == res.queries);
    CHECK(parsed["learn"][0]["regression"] == "coefficient-rounding");
    CHECK(emit_report(rep, "markdown").find("## Learned hypotheses") !=
          std::string::npos);

    cfg.options["noise"] = "0.6";
    CHECK_THROWS_AS(run_suite(cfg), input_error);
}
