#include <catch_amalgamated.hpp>

#include <cmath>
#include <gmokw/checks.hpp>

#include "oracle_values.hpp"

using namespace gmokw;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ModelSpec kLt = gmokw_spec(1.5, 0.6, 1.2, 0.8, Baseline::weibull(1.0, 1.5));
const ModelSpec kGt = gmokw_spec(0.8, 2.5, 0.9, 1.3, Baseline::weibull(1.0, 1.5));

}  // namespace

TEST_CASE("moments by quadrature", "[moments]") {
    for (int s = 1; s <= 2; ++s) {
        const auto a = moment_quadrature(kLt, s);
        CHECK(a.converged);
        CHECK_THAT(a.value, WithinRel(oracle::kMoment0[s - 1], 1e-10));
        CHECK_THAT(moment_quadrature(kGt, s).value, WithinRel(oracle::kMoment1[s - 1], 1e-10));
    }
    CHECK(moment_quadrature(kLt, 0.0).value == 1.0);
}

TEST_CASE("moments by series, every route", "[moments]") {
    for (int s = 1; s <= 2; ++s) {
        CHECK_THAT(moment_series(kLt, s, MomentRoute::A), WithinRel(oracle::kMoment0[s - 1], 1e-8));
        CHECK_THAT(moment_series(kLt, s, MomentRoute::B), WithinRel(oracle::kMoment0[s - 1], 1e-6));
        CHECK_THAT(moment_series(kGt, s, MomentRoute::C), WithinRel(oracle::kMoment1[s - 1], 1e-8));
    }
    CHECK(moment_series(kLt, 0, MomentRoute::A) == 1.0);
    CHECK_THROWS_AS(moment_series(kLt, 1, MomentRoute::C), RegimeError);
    CHECK_THROWS_AS(moment_series(kGt, 1, MomentRoute::A), RegimeError);
}

TEST_CASE("Renyi entropy", "[moments]") {
    const double deltas[] = {0.5, 2.0};
    for (int i = 0; i < 2; ++i) {
        const EntropyQuery q0{deltas[i], kLt}, q1{deltas[i], kGt};
        CHECK_THAT(renyi(q0, EntropyMethod::quadrature), WithinRel(oracle::kRenyi0[i], 1e-8));
        CHECK_THAT(renyi(q1, EntropyMethod::quadrature), WithinRel(oracle::kRenyi1[i], 1e-8));
        CHECK_THAT(renyi(q0, EntropyMethod::series), WithinRel(oracle::kRenyi0[i], 1e-6));
        CHECK_THAT(renyi(q1, EntropyMethod::series), WithinRel(oracle::kRenyi1[i], 1e-6));
    }
    CHECK_THROWS_AS(renyi({1.0, kLt}, EntropyMethod::quadrature), ArgumentError);
}

TEST_CASE("method-of-moments expectation", "[moments]") {
    for (int nu = 1; nu <= 3; ++nu) {
        CHECK_THAT(mom_expectation(1.5, 0.4, nu), WithinRel(oracle::kMomExpect[nu - 1], 1e-10));
        CHECK_THAT(mom_expectation_quadrature(1.5, 0.4, nu), WithinRel(oracle::kMomExpect[nu - 1], 1e-10));
    }
    CHECK_THAT(mom_expectation(1.0, 0.5, 1), WithinAbs(std::log(2.0), 1e-8));
    CHECK_THAT(mom_expectation(1.0, 0.5, 2), WithinAbs(0.5, 1e-8));
    CHECK_THAT(mom_expectation(2.0, 3.0, 1), WithinRel(mom_expectation_quadrature(2.0, 3.0, 1), 1e-10));
    CHECK(mom_expectation(2.0, 1.0, 3) == 1.0);
    CHECK_THROWS_AS(mom_expectation(2.0, 20.0, 1), BranchError);
    CHECK_THROWS_AS(mom_expectation(2.0, 1.5, 2), BranchError);
    CHECK_THROWS_AS(mom_expectation(3.0, 0.5, 2), BranchError);
    CHECK_THAT(mom_expectation_auto(3.0, 0.5, 2), WithinRel(mom_expectation_quadrature(3.0, 0.5, 2), 1e-12));
    CHECK_THROWS_AS(mom_expectation(1.0, 0.5, 0), ArgumentError);
}

TEST_CASE("moment and entropy suites", "[moments]") {
    const auto a = check_moments();
    INFO(a.note << " worst " << a.worst);
    CHECK(a.passed());
    const auto b = check_entropy();
    INFO(b.note << " worst " << b.worst);
    CHECK(b.passed());
}
