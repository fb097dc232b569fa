#include <catch_amalgamated.hpp>

#include <cmath>
#include <gmokw/checks.hpp>

#include "oracle_values.hpp"

using namespace gmokw;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct PointCase {
    ModelSpec spec;
    std::array<double, 3> t;
    const double* pdf;
    const double* cdf;
    const double* sf;
    const double* hrf;
    const double* q;
};

std::vector<PointCase> point_cases() {
    using namespace oracle;
    return {
        {gmokw_spec(1.5, 0.6, 1.2, 0.8, Baseline::exponential(1.3)), {0.2, 1.0, 3.0},
         kPoint0_pdf, kPoint0_cdf, kPoint0_sf, kPoint0_hrf, kPoint0_q},
        {gmokw_spec(0.7, 2.5, 0.9, 1.4, Baseline::lomax(2.0, 1.5)), {0.1, 0.8, 4.0},
         kPoint1_pdf, kPoint1_cdf, kPoint1_sf, kPoint1_hrf, kPoint1_q},
        {gmokw_spec(2.0, 0.3, 0.6, 1.1, Baseline::weibull(0.8, 1.7)), {0.3, 1.2, 2.5},
         kPoint2_pdf, kPoint2_cdf, kPoint2_sf, kPoint2_hrf, kPoint2_q},
        {gmokw_spec(1.2, 1.8, 1.3, 0.7, Baseline::frechet(1.5, 0.9)), {0.4, 1.0, 5.0},
         kPoint3_pdf, kPoint3_cdf, kPoint3_sf, kPoint3_hrf, kPoint3_q},
        {gmokw_spec(0.8, 0.5, 2.0, 0.6, Baseline::gompertz(0.5, 0.7)), {0.2, 1.0, 2.0},
         kPoint4_pdf, kPoint4_cdf, kPoint4_sf, kPoint4_hrf, kPoint4_q},
        {gmokw_spec(1.1, 3.0, 0.7, 1.6, Baseline::modified_weibull(0.3, 0.6, 1.8)), {0.25, 1.0, 2.2},
         kPoint5_pdf, kPoint5_cdf, kPoint5_sf, kPoint5_hrf, kPoint5_q},
        {gmokw_spec(0.9, 0.7, 1.4, 0.9, Baseline::exp_pareto(1.6, 1.2, 0.7)), {0.9, 1.5, 4.0},
         kPoint6_pdf, kPoint6_cdf, kPoint6_sf, kPoint6_hrf, kPoint6_q},
        {gmokw_spec(1.3, 1.6, 0.8, 1.2, Baseline::power(1.4, 0.8)), {0.1, 0.6, 1.1},
         kPoint7_pdf, kPoint7_cdf, kPoint7_sf, kPoint7_hrf, kPoint7_q},
    };
}

}  // namespace

TEST_CASE("pointwise values against high-precision references", "[family]") {
    for (const auto& c : point_cases()) {
        INFO(c.spec.baseline.name());
        for (int i = 0; i < 3; ++i) {
            const double t = c.t[i];
            CHECK_THAT(pdf(c.spec, t), WithinRel(c.pdf[i], 1e-12));
            CHECK_THAT(cdf(c.spec, t), WithinRel(c.cdf[i], 1e-12));
            CHECK_THAT(sf(c.spec, t), WithinRel(c.sf[i], 1e-12));
            CHECK_THAT(hrf(c.spec, t), WithinRel(c.hrf[i], 1e-12));
        }
        const double ps[] = {0.05, 0.5, 0.95};
        for (int i = 0; i < 3; ++i) CHECK_THAT(quantile(c.spec, ps[i]), WithinRel(c.q[i], 1e-11));
    }
}

TEST_CASE("density limit at the lower endpoint", "[family]") {
    const auto s = gmokw_spec(2.0, 0.5, 1.0, 1.0, Baseline::exponential(1.0));
    CHECK_THAT(pdf(s, 0.0), WithinAbs(4.0, 1e-15));
    CHECK(cdf(s, 0.0) == 0.0);
    CHECK(sf(s, 0.0) == 1.0);
}

TEST_CASE("outside the support", "[family]") {
    const auto s = gmokw_spec(1.5, 0.5, 2.0, 1.5, Baseline::power(2.0, 1.0));
    CHECK(pdf(s, 1.5) == 0.0);
    CHECK(cdf(s, 1.5) == 1.0);
    CHECK(pdf(s, -1.0) == 0.0);
    CHECK(cdf(s, -1.0) == 0.0);
}

TEST_CASE("cdf and sf are complementary and quantile inverts cdf", "[family]") {
    Rng rng(51, 40);
    for (int i = 0; i < 40; ++i) {
        auto s = random_spec(rng, kShippedBaselines[i % 8]);
        for (double p : {0.01, 0.3, 0.7, 0.99}) {
            const double t = quantile(s, p);
            CHECK_THAT(cdf(s, t) + sf(s, t), WithinAbs(1.0, 1e-15));
            CHECK_THAT(cdf(s, t), WithinAbs(p, 1e-10));
        }
    }
}

TEST_CASE("quantile of the full reduction with Exponential(1) at 1/2 is ln 2", "[family]") {
    const auto s = make_spec(Variant::Baseline, {}, Baseline::exponential(1.0));
    CHECK_THAT(quantile(s, 0.5), WithinRel(std::log(2.0), 1e-15));
}

TEST_CASE("parameter validation", "[family]") {
    CHECK_THROWS_AS(gmokw_spec(0.0, 1.0, 1.0, 1.0, Baseline::exponential(1.0)), ParameterError);
    CHECK_THROWS_AS(make_spec(Variant::KwG, {2.0, 1.0, 1.0, 1.0}, Baseline::exponential(1.0)), ParameterError);
    CHECK_THROWS_AS(quantile(gmokw_spec(1, 1, 1, 1, Baseline::exponential(1.0)), 1.0), ArgumentError);
    CHECK_THROWS_AS(variant_from_name("bkw"), ArgumentError);
}

TEST_CASE("sub-model reduction labels", "[family]") {
    const auto b = Baseline::weibull(1.0, 2.0);
    CHECK(reduce(gmokw_spec(1, 1, 1, 1, b)).variant == Variant::Baseline);
    CHECK(reduce(gmokw_spec(1, 0.5, 1, 1, b)).variant == Variant::MO);
    CHECK(reduce(gmokw_spec(2, 0.5, 1, 1, b)).variant == Variant::GMO);
    CHECK(reduce(gmokw_spec(1, 1, 2, 3, b)).variant == Variant::KwG);
    CHECK(reduce(gmokw_spec(1, 0.5, 2, 3, b)).variant == Variant::MOKwG);
    CHECK(reduce(gmokw_spec(2, 0.5, 2, 3, b)).variant == Variant::GMOKwG);
}

TEST_CASE("sampling is deterministic per seed", "[family]") {
    const auto s = gmokw_spec(1.5, 0.6, 1.2, 0.8, Baseline::weibull(1.0, 1.5));
    const auto a = sample(s, 1000, 9).values, b = sample(s, 1000, 9).values, c = sample(s, 1000, 10).values;
    CHECK(a == b);
    CHECK(a != c);
    CHECK(sample(s, 0, 9).values.empty());
}

TEST_CASE("inversion sample matches the cdf", "[family]") {
    const auto s = gmokw_spec(1.5, 0.6, 1.2, 0.8, Baseline::weibull(1.0, 1.5));
    const auto x = sample(s, 50000, 3).values;
    CHECK(ks_statistic(x, [&](double t) { return cdf(s, t); }) <= 0.0122);
}

TEST_CASE("genesis construction matches the cdf", "[family]") {
    const auto r = check_genesis();
    INFO(r.note);
    CHECK(r.passed());
}

TEST_CASE("reduction identities", "[family]") {
    const auto r = check_reduction();
    INFO("worst " << r.worst);
    CHECK(r.count == 20 * 200 * 8);
    CHECK(r.passed());
}

TEST_CASE("log-space evaluation deep in the upper tail", "[family]") {
    // Gbar = e^-800 underflows; the density must stay finite and match the asymptote
    const auto s = gmokw_spec(1.5, 0.6, 0.7, 0.8, Baseline::exponential(1.0));
    const double lp = log_pdf(s, 800.0);
    CHECK(std::isfinite(lp));
    // 1 - G^a ~ a Gbar, so log f ~ const + (b theta) log(a Gbar) - ... with slope -b theta
    CHECK_THAT(log_pdf(s, 801.0) - lp, WithinAbs(-0.8 * 1.5, 1e-9));
}
