#include <catch_amalgamated.hpp>

#include <cmath>
#include <gmokw/report.hpp>

using namespace gmokw;
using Catch::Matchers::ContainsSubstring;

namespace {

FitReport sample_report() {
    FitReport r;
    r.model = "mo";
    r.baseline = "weibull";
    r.dataset_label = "chemotherapy";
    r.dataset_n = 45;
    r.names = {"alpha", "lambda", "beta"};
    r.estimate = {0.25, 0.5, 1.1};
    r.se = {0.1, NAN, 0.3};
    r.ci = {{0.05, 0.45}, {NAN, NAN}, {0.5, 1.7}};
    r.loglik = -57.8;
    r.aic = 121.6;
    r.k = 3;
    r.converged = true;
    r.condition = 1234.5;
    r.lr_tests = {{"mo", "gmokw", 9.88, 3, 0.0196}};
    r.config = {7, 40, 0.05, 1e-10, 1e-3, 1e3};
    return r;
}

}  // namespace

TEST_CASE("report round trip", "[report]") {
    auto r = sample_report();
    const std::string text = emit_report(r);
    CHECK(parse_report(text) == r);
    r.timestamp = "2026-01-01T00:00:00Z";
    CHECK(parse_report(emit_report(r)) == r);
    // emitting is deterministic
    CHECK(emit_report(r) == emit_report(parse_report(emit_report(r))));
}

TEST_CASE("report key order and null for non-finite values", "[report]") {
    const auto j = to_json(sample_report());
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"schema_version", "tool", "version", "model", "baseline", "dataset",
                                           "estimate", "se", "ci", "loglik", "aic", "k", "flags", "lr_tests",
                                           "config"});
    CHECK(j["se"]["lambda"].is_null());
    CHECK(j["ci"]["lambda"][0].is_null());
    CHECK(j["estimate"].begin().key() == "alpha");
    CHECK(j["tool"] == kToolName);
}

TEST_CASE("report parse errors", "[report]") {
    CHECK_THROWS_AS(parse_report("{"), DataError);
    auto j = to_json(sample_report());
    j["schema_version"] = 99;
    CHECK_THROWS_WITH(parse_report(j.dump()), ContainsSubstring("schema_version 99"));
    j = to_json(sample_report());
    j.erase("flags");
    CHECK_THROWS_WITH(parse_report(j.dump()), ContainsSubstring("'flags'"));
}

TEST_CASE("report spec reconstruction", "[report]") {
    const auto s = sample_report().spec();
    CHECK(s.variant == Variant::MO);
    CHECK(s.family.alpha == 0.25);
    CHECK(s.baseline.params == std::vector<double>{0.5, 1.1});
}

TEST_CASE("dataset parsing", "[data]") {
    const auto d = load_dataset(std::string(GMOKW_DATA_DIR) + "/chemotherapy.txt");
    CHECK(d.size() == 45);
    CHECK(d.values.front() == 0.047);
    CHECK(d.values.back() == 4.033);
    CHECK(d.values == bundled_dataset().values);
    CHECK(d.label == "chemotherapy.txt");
    CHECK(parse_dataset_string("1, 2 3 # four\n\n5").values == std::vector<double>{1, 2, 3, 5});
    CHECK_THROWS_WITH(parse_dataset_string("1\n2\nabc\n"), ContainsSubstring("line 3: cannot parse 'abc'"));
    CHECK_THROWS_WITH(parse_dataset_string("# only a comment\n"), ContainsSubstring("no observations"));
    CHECK_THROWS_WITH(parse_dataset_string("1 -2"), ContainsSubstring("not a positive number"));
    CHECK_THROWS_AS(load_dataset("/nonexistent/file.txt"), DataError);
}
