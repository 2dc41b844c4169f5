#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "vp1d/profiles.hpp"

using namespace vp1d;

namespace {

PhaseSpaceState make_state(const SpatialGrid& xg, const VelocityGrid& vg,
                           const std::function<double(double, double)>& f) {
    PhaseSpaceState st;
    st.xgrid = xg;
    st.vgrid = vg;
    st.f.resize(xg.nodes * vg.nodes);
    for (std::size_t j = 0; j < vg.nodes; ++j)
        for (std::size_t i = 0; i < xg.nodes; ++i)
            st.f[j * xg.nodes + i] = f(xg.node(i), vg.node(j));
    return st;
}

} // namespace

TEST_CASE("plasma frequency") {
    const VelocityGrid vg(1.4, 513);

    SUBCASE("zero background") {
        BackgroundProfile zero;
        zero.value = [](double) { return 0.0; };
        zero.slope = [](double) { return 0.0; };
        zero.support = 0.0;
        CHECK(plasma_frequency(zero, vg) == 0.0);
    }

    SUBCASE("unit-mass quartic bump gives omega = 1") {
        const auto sc = build_standard_case(0.0, 1.0);
        CHECK(plasma_frequency(sc.background, vg) == doctest::Approx(1.0).epsilon(1e-15));
        // quadrature path (no closed-form moment)
        auto bg = sc.background;
        bg.moment.reset();
        CHECK(plasma_frequency(bg, vg) == doctest::Approx(1.0).epsilon(3e-5));
    }

    SUBCASE("doubled background gives sqrt(2)") {
        const auto sc = build_standard_case(0.0, 1.0, 2.0);
        CHECK(plasma_frequency(sc.background, vg) ==
              doctest::Approx(1.4142135623730951).epsilon(1e-15));
    }

    SUBCASE("scaling and monotonicity (quadrature path)") {
        auto bg = build_standard_case(0.0, 1.0).background;
        bg.moment.reset();
        auto bg3 = build_standard_case(0.0, 1.0, 3.0).background;
        bg3.moment.reset();
        const double w1 = plasma_frequency(bg, vg);
        const double w3 = plasma_frequency(bg3, vg);
        CHECK(w3 > w1);
        CHECK(w3 == doctest::Approx(std::sqrt(3.0) * w1).epsilon(1e-13));
    }

    SUBCASE("grid must cover the support") {
        const auto sc = build_standard_case(0.0, 1.0);
        CHECK_THROWS_AS(plasma_frequency(sc.background, VelocityGrid(0.8, 65)),
                        domain_coverage_error);
    }
}

TEST_CASE("initial field amplitude") {
    const SpatialGrid xg(4.0, 1025);
    const VelocityGrid vg(1.4, 513);

    SUBCASE("steady state is exactly zero") {
        const auto sc = build_standard_case(0.0, 1.0);
        CHECK(initial_field_amplitude(sc.initial, xg, vg) == 0.0);
    }

    SUBCASE("standard case: E0 = 4/75") {
        const auto sc = build_standard_case(-0.1, 1.0);
        CHECK(initial_field_amplitude(sc.initial, xg, vg) ==
              doctest::Approx(4.0 / 75.0).epsilon(2e-5));
    }

    SUBCASE("sign flips with epsilon") {
        const auto sc = build_standard_case(0.1, 1.0);
        CHECK(initial_field_amplitude(sc.initial, xg, vg) ==
              doctest::Approx(-4.0 / 75.0).epsilon(2e-5));
    }

    SUBCASE("grid coverage") {
        const auto sc = build_standard_case(-0.1, 1.0);
        CHECK_THROWS_AS(initial_field_amplitude(sc.initial, SpatialGrid(0.5, 65), vg),
                        domain_coverage_error);
    }
}

TEST_CASE("standard case fixture") {
    SUBCASE("epsilon = 0 reproduces the background") {
        const auto sc = build_standard_case(0.0, 1.0);
        for (double x : {-2.0, -0.3, 0.0, 0.7, 5.0})
            for (double v : {-1.2, -0.5, 0.0, 0.9})
                CHECK(sc.initial(x, v) == sc.background(v));
    }

    SUBCASE("pointwise values") {
        const auto sc = build_standard_case(-0.1, 1.0);
        CHECK(sc.initial(0.0, 0.0) == doctest::Approx(0.84375).epsilon(1e-15));
        for (double v : {-0.8, 0.0, 0.4})
            CHECK(sc.initial(2.0, v) == sc.background(v)); // f0 = F outside R
    }

    SUBCASE("invariants") {
        const auto sc = build_standard_case(-0.5, 2.0);
        for (double v = -1.5; v <= 1.5; v += 0.05) {
            CHECK(sc.background(v) >= 0.0);
            CHECK(sc.background(-v) == sc.background(v)); // even
            for (double x = -3.0; x <= 3.0; x += 0.2) CHECK(sc.initial(x, v) >= 0.0);
        }
        CHECK(sc.background(1.0) == 0.0);
        CHECK(sc.background.slope(1.0) == 0.0); // C^1 at the support edge
        CHECK(sc.background.slope(-1.0) == 0.0);
        CHECK(sc.background(1.31) == 0.0);
    }

    SUBCASE("nonnegativity precondition") {
        CHECK_THROWS_AS(build_standard_case(-1.0, 1.0), negativity_error);
        CHECK_THROWS_AS(build_standard_case(-2.0, 1.0), negativity_error);
    }
}

TEST_CASE("odd moment of the background vanishes to round-off") {
    const auto sc = build_standard_case(0.0, 1.0);
    const VelocityGrid vg(1.3, 257);
    double sum = 0.0;
    for (std::size_t j = 0; j < vg.nodes; ++j) {
        const double v = vg.node(j);
        const double w = (j == 0 || j + 1 == vg.nodes) ? 0.5 : 1.0;
        sum += w * v * sc.background(v);
    }
    CHECK(std::abs(sum * vg.spacing()) < 1e-14);
}

TEST_CASE("deviation support") {
    const SpatialGrid xg(3.0, 65);
    const VelocityGrid vg(1.4, 141);
    const auto sc = build_standard_case(-0.1, 1.0);

    SUBCASE("f = F exactly gives zero") {
        auto st = make_state(xg, vg, [&](double, double v) { return sc.background(v); });
        CHECK(deviation_support_qg(st, sc.background, 1e-12) == 0.0);
    }

    SUBCASE("constructed support at |v| <= 1.05") {
        auto st = make_state(xg, vg, [&](double x, double v) {
            const double dev = (std::abs(v) <= 1.05 && std::abs(x) <= 1.0) ? 0.01 : 0.0;
            return sc.background(v) + dev;
        });
        const double qg = deviation_support_qg(st, sc.background, 1e-6);
        CHECK(std::abs(qg - 1.05) <= vg.spacing());
    }

    SUBCASE("sup over history") {
        auto st = make_state(xg, vg, [&](double x, double v) {
            const double dev = (std::abs(v) <= 1.0 && std::abs(x) <= 1.0) ? 0.01 : 0.0;
            return sc.background(v) + dev;
        });
        CHECK(deviation_support_qg(st, sc.background, 1e-6, 1.2) == 1.2);
    }
}
