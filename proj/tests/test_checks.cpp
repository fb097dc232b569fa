#include <catch_amalgamated.hpp>

#include <cmath>
#include <gmokw/checks.hpp>

using namespace gmokw;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("suite registry", "[checks]") {
    const auto& names = suite_names();
    CHECK(names.size() == 12);
    CHECK_THROWS_WITH(run_named_suite("bogus"), ContainsSubstring("valid: normalization"));
    const auto r = run_named_suite("series");
    CHECK(r.name == "series");
    CHECK(r.passed());
}

TEST_CASE("suite result bookkeeping", "[checks]") {
    SuiteResult r;
    r.tol = 1.0;
    CHECK_FALSE(r.passed());  // nothing recorded
    r.record(0.5);
    CHECK(r.passed());
    r.record(NAN);
    CHECK(r.failures == 1);
    CHECK(std::isinf(r.worst));
}

TEST_CASE("densities integrate to one", "[checks]") {
    const auto r = check_normalization();
    INFO(r.note << " worst " << r.worst);
    CHECK(r.count == 100);
    CHECK(r.passed());
}

TEST_CASE("quantile inverts the cdf on (0, inf) supports", "[checks]") {
    // doubles resolve t near 0 and far out; a positive finite endpoint is where they cannot
    Rng rng(71, 60);
    for (auto k : kShippedBaselines) {
        const Baseline b{k, Baseline::default_params(k)};
        if (b.lower() != 0.0 || std::isfinite(b.upper())) continue;
        for (int i = 0; i < 10; ++i) {
            const auto s = random_spec(rng, k);
            for (double p : roundtrip_probabilities()) CHECK(std::abs(cdf(s, quantile(s, p)) - p) <= 1e-10);
        }
    }
}

TEST_CASE("roundtrip failures are limited by the resolution of t", "[checks]") {
    // every miss must be one where no neighbouring double of t does better
    const auto r = check_roundtrip();
    INFO(r.note);
    if (r.failures > 0) {
        const std::string all = std::to_string(r.failures) + " of " + std::to_string(r.failures);
        CHECK_THAT(r.note, ContainsSubstring(all + " failures have no double t"));
    }
    CHECK(r.count == 50 * 13);
}
