#include <doctest.h>

#include "btb/dc_link.hpp"

using namespace btb;

TEST_CASE("dv_dc_dt sign convention and values") {
    // Balanced exchange: GSC charges what the MSC drains.
    CHECK(dv_dc_dt(DcLinkState{600.0, 5000e-6, -75.0, 75.0}) == doctest::Approx(0.0));
    // MSC draws 75 A alone from the 5000 uF capacitor.
    CHECK(dv_dc_dt(DcLinkState{600.0, 5000e-6, 0.0, 75.0}) == doctest::Approx(-15000.0));
    CHECK(dv_dc_dt(DcLinkState{600.0, 5000e-6, 0.0, 0.0}) == 0.0);
}

TEST_CASE("capacitor energy") {
    CHECK(energy(DcLinkState{600.0, 5000e-6, 0.0, 0.0}) == doctest::Approx(900.0));
    CHECK(energy(DcLinkState{0.0, 5000e-6, 0.0, 0.0}) == 0.0);
    // Quadratic form: doubling the voltage quadruples the energy.
    const double e1 = energy(DcLinkState{313.7, 3.3e-3, 0.0, 0.0});
    const double e2 = energy(DcLinkState{627.4, 3.3e-3, 0.0, 0.0});
    CHECK(e2 == doctest::Approx(4.0 * e1).epsilon(1e-12));
}
