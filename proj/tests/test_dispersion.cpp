#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include "cdc/dispersion.hpp"

namespace {

cdc::FiberParams default_link_fiber(double z_m) {
    cdc::FiberParams p;
    p.length = z_m;
    return p;
}

}  // namespace

TEST_CASE("dispersion constant for the default 250 km link") {
    const auto k = cdc::dispersion_constant(default_link_fiber(250.0e3));
    // Hand-computed: 17e-6 * (1550e-9)^2 * 250e3 / (4 pi c (14.5833ps)^2)
    CHECK(k.value == Catch::Approx(12.7438).margin(5e-4));
    CHECK(cdc::estimate_length(k) == 161);
}

TEST_CASE("filter length estimate at 200 km") {
    const auto k = cdc::dispersion_constant(default_link_fiber(200.0e3));
    CHECK(cdc::estimate_length(k) == 129);
}

TEST_CASE("implied maximum fiber length for 129 taps is about 200 km") {
    const double zmax = cdc::max_fiber_length(129, cdc::FiberParams{});
    CHECK(zmax == Catch::Approx(200.0e3).margin(500.0));
}

TEST_CASE("dispersion constant scales linearly with fiber length") {
    const double k1 = cdc::dispersion_constant(default_link_fiber(80.0e3)).value;
    const double k2 = cdc::dispersion_constant(default_link_fiber(160.0e3)).value;
    CHECK(k2 == Catch::Approx(2.0 * k1).epsilon(1e-12));
}

TEST_CASE("length estimate is odd and non-decreasing in fiber length") {
    int prev = 0;
    for (double z = 0.0; z <= 400.0e3; z += 10.0e3) {
        const int len = cdc::estimate_length(
            cdc::dispersion_constant(default_link_fiber(z)));
        CHECK(len % 2 == 1);
        CHECK(len >= prev);
        prev = len;
    }
    CHECK(cdc::estimate_length(cdc::DispersionK{0.0}) == 1);
}

TEST_CASE("fiber parameter validation rejects nonsense") {
    cdc::FiberParams p;
    p.length = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(cdc::dispersion_constant(p), std::invalid_argument);
    p.length = -1.0;
    CHECK_THROWS_AS(cdc::dispersion_constant(p), std::invalid_argument);
    p.length = 1.0e3;
    p.sample_period = 0.0;
    CHECK_THROWS_AS(cdc::dispersion_constant(p), std::invalid_argument);
    CHECK_THROWS_AS(cdc::estimate_length(cdc::DispersionK{-1.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(cdc::max_fiber_length(128, cdc::FiberParams{}),
                    std::invalid_argument);
}
