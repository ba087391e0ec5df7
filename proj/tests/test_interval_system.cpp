#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "chebmark/detail/splitmix64.hpp"
#include "chebmark/interval_system.hpp"
#include "doctest.h"

using namespace chebmark;

TEST_CASE("construction and validation") {
    const IntervalSystem one = make_interval_system({-1.0, 1.0});
    CHECK(one.band_count() == 1);
    CHECK(one.hull() == std::pair{-1.0, 1.0});

    const IntervalSystem two = make_interval_system({-1.0, -0.5, 0.5, 1.0});
    CHECK(two.band_count() == 2);

    CHECK_THROWS_AS(make_interval_system({-1.0, 0.2, 0.2, 1.0}), Error);
    CHECK_THROWS_WITH_AS(make_interval_system({-1.0, 0.2, 0.2, 1.0}),
                         doctest::Contains("NonMonotoneEndpoints"), Error);
    CHECK_THROWS_WITH_AS(make_interval_system({-1.0, 0.0, 1.0}),
                         doctest::Contains("OddEndpointCount"), Error);
    CHECK_THROWS_AS(make_interval_system({}), Error);
}

TEST_CASE("h_eval matches direct products") {
    const IntervalSystem one = make_interval_system({-1.0, 1.0});
    CHECK(h_eval(one, 0.0) == -1.0);

    const IntervalSystem two = make_interval_system({-1.0, -0.5, 0.5, 1.0});
    CHECK(h_eval(two, 0.0) == 0.25);
    CHECK(h_eval(two, 0.75) == doctest::Approx(-0.13671875).epsilon(1e-15));
}

TEST_CASE("contains, gap, hull") {
    const IntervalSystem two = make_interval_system({-1.0, -0.5, 0.5, 1.0});
    CHECK(contains(two, -0.5));
    CHECK(!contains(two, 0.0));
    CHECK(contains(two, 1.0));
    CHECK(!contains(two, 1.0000001));
    CHECK(gap(two, 0) == std::pair{-0.5, 0.5});
    CHECK_THROWS_WITH_AS(gap(two, 1), doctest::Contains("GapIndexOutOfRange"), Error);
    CHECK(hull(two) == std::pair{-1.0, 1.0});
}

TEST_CASE("quadratic inverse image") {
    const IntervalSystem e = quadratic_inverse_image(0.5, 1.0);
    CHECK(e.endpoints() == std::vector<double>{-1.0, -0.5, 0.5, 1.0});

    // u(b) = 1 and u(a) = -1 by substitution.
    const auto u = [](double x, double a, double b) {
        return (2.0 * x * x - b * b - a * a) / (b * b - a * a);
    };
    CHECK(u(1.0, 0.5, 1.0) == doctest::Approx(1.0));
    CHECK(u(0.5, 0.5, 1.0) == doctest::Approx(-1.0));

    CHECK_THROWS_WITH_AS(quadratic_inverse_image(1.0, 0.5),
                         doctest::Contains("InvalidParameters"), Error);
    CHECK_THROWS_AS(quadratic_inverse_image(-0.5, 1.0), Error);

    // |u| <= 1 on E and > 1 on the gap interior.
    const IntervalSystem e2 = quadratic_inverse_image(0.3, 0.9);
    for (int i = 1; i < 64; ++i) {
        const double x = -0.3 + 0.6 * i / 64.0;
        CHECK(std::fabs(u(x, 0.3, 0.9)) > 1.0);
    }
    for (int k = 0; k < 2; ++k) {
        auto [lo, hi] = e2.band(k);
        for (int i = 0; i <= 32; ++i)
            CHECK(std::fabs(u(lo + (hi - lo) * i / 32.0, 0.3, 0.9)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("H sign pattern on random systems") {
    detail::SplitMix64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const int l = 1 + static_cast<int>(rng.uniform() * 4);
        std::vector<double> endpoints;
        double x = -1.0;
        for (int i = 0; i < 2 * l; ++i) {
            endpoints.push_back(x);
            x += 0.05 + rng.uniform() * 0.3;
        }
        const IntervalSystem e = make_interval_system(endpoints);
        for (int k = 0; k < e.band_count(); ++k) {
            auto [lo, hi] = e.band(k);
            for (int i = 1; i < 8; ++i)
                CHECK(e.h_eval(lo + (hi - lo) * i / 8.0) < 0.0);
        }
        for (int k = 0; k + 1 < e.band_count(); ++k) {
            auto [lo, hi] = e.gap(k);
            for (int i = 1; i < 8; ++i)
                CHECK(e.h_eval(lo + (hi - lo) * i / 8.0) > 0.0);
        }
    }
}

TEST_CASE("unit hull normalization") {
    const IntervalSystem e = make_interval_system({-3.0, -2.0, 2.0, 3.0});
    const UnitHullMap mapped = e.normalize_to_unit_hull();
    CHECK(mapped.system.hull() == std::pair{-1.0, 1.0});
    CHECK(mapped.system.endpoints()[1] == doctest::Approx(-2.0 / 3.0));
    CHECK(mapped.scale * -3.0 + mapped.shift == doctest::Approx(-1.0));
    CHECK(mapped.scale * 3.0 + mapped.shift == doctest::Approx(1.0));
}

TEST_CASE("endpoint list parsing") {
    CHECK(parse_endpoint_list("-1,-0.5,0.5,1") == std::vector<double>{-1.0, -0.5, 0.5, 1.0});
    CHECK(parse_endpoint_list(" -1 , 1 ") == std::vector<double>{-1.0, 1.0});
    CHECK_THROWS_AS(parse_endpoint_list("-1,,1"), Error);
    CHECK_THROWS_AS(parse_endpoint_list("-1,abc"), Error);
}
