#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vp1d/fields.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/quadrature.hpp"

using namespace vp1d;

namespace {

PhaseSpaceState make_state(const SpatialGrid& xg, const VelocityGrid& vg,
                           const std::function<double(double, double)>& f, double t = 0.0) {
    PhaseSpaceState st;
    st.time = t;
    st.xgrid = xg;
    st.vgrid = vg;
    st.f.resize(xg.nodes * vg.nodes);
    for (std::size_t j = 0; j < vg.nodes; ++j)
        for (std::size_t i = 0; i < xg.nodes; ++i)
            st.f[j * xg.nodes + i] = f(xg.node(i), vg.node(j));
    return st;
}

std::vector<double> compact_random_density(const SpatialGrid& grid, std::mt19937& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> rho(grid.nodes, 0.0);
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const double x = grid.node(i);
        if (std::abs(x) < 0.6 * grid.extent) rho[i] = gauss(rng) * quartic_bump(x / (0.6 * grid.extent));
    }
    return rho;
}

} // namespace

TEST_CASE("charge density") {
    const auto sc = build_standard_case(-0.1, 1.0);
    const SpatialGrid xg(4.0, 257);
    const VelocityGrid vg(1.4, 257);

    SUBCASE("steady background gives exactly zero") {
        auto st = make_state(xg, vg, [&](double, double v) { return sc.background(v); });
        for (double r : charge_density(st, sc.background)) CHECK(r == 0.0);
    }

    SUBCASE("standard case at t = 0") {
        auto st = make_state(xg, vg, [&](double x, double v) { return sc.initial(x, v); });
        const auto rho = charge_density(st, sc.background);
        const auto i0 = static_cast<std::size_t>(std::llround(xg.coord(0.0)));
        CHECK(rho[i0] == doctest::Approx(0.1).epsilon(2e-5));
        const auto i2 = static_cast<std::size_t>(std::llround(xg.coord(2.0)));
        CHECK(rho[i2] == 0.0); // f0 = F exactly beyond R
    }
}

TEST_CASE("current density") {
    const auto sc = build_standard_case(-0.1, 1.0);
    const SpatialGrid xg(4.0, 129);
    const VelocityGrid vg(1.6, 513);

    SUBCASE("steady gives zero") {
        auto st = make_state(xg, vg, [&](double, double v) { return sc.background(v); });
        for (double v : current_density(st, sc.background)) CHECK(v == 0.0);
    }

    SUBCASE("shifted background carries current s * M0") {
        const double s = 0.05;
        auto st = make_state(xg, vg, [&](double, double v) { return sc.background(v + s); });
        for (double jv : current_density(st, sc.background))
            CHECK(jv == doctest::Approx(s).epsilon(2e-4));
    }

    SUBCASE("exterior state of the oscillation theorem") {
        // f = F(v + gamma sign(x)) with gamma = (E0/omega) sin(omega t)
        const double E0 = 4.0 / 75.0, omega = 1.0, t = 0.7;
        const double gamma = E0 / omega * std::sin(omega * t);
        auto st = make_state(xg, vg, [&](double x, double v) {
            return sc.background(v + gamma * (x >= 0.0 ? 1.0 : -1.0));
        });
        const auto j = current_density(st, sc.background);
        const auto ir = static_cast<std::size_t>(std::llround(xg.coord(3.0)));
        const auto il = static_cast<std::size_t>(std::llround(xg.coord(-3.0)));
        CHECK(j[ir] == doctest::Approx(omega * E0 * std::sin(omega * t)).epsilon(2e-4));
        CHECK(j[il] == doctest::Approx(-omega * E0 * std::sin(omega * t)).epsilon(2e-4));
    }
}

TEST_CASE("field from density") {
    SUBCASE("zero density") {
        const SpatialGrid grid(2.0, 65);
        const auto fs = field_from_density(std::vector<double>(65, 0.0), grid, 1e-12);
        for (double e : fs.E) CHECK(e == 0.0);
        CHECK(fs.l_sup == 0.0);
    }

    SUBCASE("unit step density on [-1, 1]") {
        const SpatialGrid grid(4.0, 257); // nodes at +-1 exactly
        std::vector<double> rho(grid.nodes, 0.0);
        for (std::size_t i = 0; i < grid.nodes; ++i)
            if (std::abs(grid.node(i)) <= 1.0) rho[i] = 1.0;
        const auto fs = field_from_density(rho, grid, 1e-12);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const double x = grid.node(i);
            if (std::abs(x) <= 1.0) {
                CHECK(fs.E[i] == doctest::Approx(x).epsilon(1e-13)); // exact antiderivative
            } else {
                // trapezoid of the node-sampled step: half-cell overshoot
                const double expect = (x > 0 ? 1.0 : -1.0) * (1.0 + 0.5 * grid.spacing());
                CHECK(fs.E[i] == doctest::Approx(expect).epsilon(1e-12));
                CHECK(std::abs(std::abs(fs.E[i]) - 1.0) <= grid.spacing());
            }
        }
        CHECK(fs.l_sup == doctest::Approx(1.0));
    }

    SUBCASE("odd density gives an even field vanishing outside the support") {
        const SpatialGrid grid(4.0, 257);
        std::vector<double> rho(grid.nodes, 0.0);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const double x = grid.node(i);
            rho[i] = quartic_bump_slope(x / 1.5); // odd, compact
        }
        const auto fs = field_from_density(rho, grid, 1e-12);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const std::size_t m = grid.nodes - 1 - i;
            CHECK(fs.E[i] == doctest::Approx(fs.E[m]).epsilon(1e-10)); // even
        }
        CHECK(std::abs(fs.E.front()) < 1e-13);
        CHECK(std::abs(fs.E.back()) < 1e-13);
    }

    SUBCASE("support overflow at the boundary") {
        const SpatialGrid grid(2.0, 65);
        std::vector<double> rho(grid.nodes, 0.5);
        CHECK_THROWS_AS(field_from_density(rho, grid, 1e-8), support_overflow_error);
    }

    SUBCASE("linearity") {
        const SpatialGrid grid(4.0, 129);
        std::mt19937 rng(42);
        for (int rep = 0; rep < 8; ++rep) {
            const auto r1 = compact_random_density(grid, rng);
            const auto r2 = compact_random_density(grid, rng);
            const double a = 0.3 + rep, b = -1.7 + 0.2 * rep;
            std::vector<double> mix(grid.nodes);
            for (std::size_t i = 0; i < grid.nodes; ++i) mix[i] = a * r1[i] + b * r2[i];
            const auto E1 = field_from_density(r1, grid, 1e300).E;
            const auto E2 = field_from_density(r2, grid, 1e300).E;
            const auto Em = field_from_density(mix, grid, 1e300).E;
            for (std::size_t i = 0; i < grid.nodes; ++i)
                CHECK(Em[i] == doctest::Approx(a * E1[i] + b * E2[i]).epsilon(1e-11));
        }
    }

    SUBCASE("endpoint antisymmetry is exact and E is flat outside the support") {
        const SpatialGrid grid(4.0, 257);
        std::mt19937 rng(3);
        const auto rho = compact_random_density(grid, rng);
        const auto fs = field_from_density(rho, grid, 1e-10);
        CHECK(fs.E.front() + fs.E.back() == 0.0);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const double x = grid.node(i);
            if (x > fs.l_sup) CHECK(fs.E[i] == doctest::Approx(fs.E.back()).epsilon(1e-12));
            if (x < -fs.l_sup) CHECK(fs.E[i] == doctest::Approx(fs.E.front()).epsilon(1e-12));
        }
    }
}

namespace {

// manufactured continuity-consistent pair: rho = a'(t) phi(x), j = -a(t) Phi(x)
// with Phi' = phi and Phi compactly supported (phi has zero mean)
FieldState manufactured(const SpatialGrid& grid, double t, double support_thr) {
    FieldState f;
    f.time = t;
    f.grid = grid;
    f.rho.resize(grid.nodes);
    f.j.resize(grid.nodes);
    const double a = std::sin(1.3 * t), ap = 1.3 * std::cos(1.3 * t);
    for (std::size_t i = 0; i < grid.nodes; ++i) {
        const double x = grid.node(i);
        f.rho[i] = ap * quartic_bump_slope(x / 2.0) / 2.0; // d/dx of the bump
        f.j[i] = -a * quartic_bump(x / 2.0);
    }
    const auto fs = field_from_density(f.rho, grid, support_thr);
    f.E = fs.E;
    f.l_sup = fs.l_sup;
    return f;
}

} // namespace

TEST_CASE("continuity residual") {
    SUBCASE("steady is identically zero") {
        const SpatialGrid grid(4.0, 65);
        FieldState a, b;
        a.time = 0.0;
        b.time = 0.1;
        a.grid = b.grid = grid;
        a.rho.assign(65, 0.0);
        b.rho = a.rho;
        a.j.assign(65, 0.0);
        b.j = a.j;
        a.E = b.E = a.rho;
        for (double r : continuity_residual(a, b)) CHECK(r == 0.0);
    }

    SUBCASE("static rho with sloped current leaves the slope") {
        const SpatialGrid grid(4.0, 65);
        FieldState a, b;
        a.time = 0.0;
        b.time = 0.5;
        a.grid = b.grid = grid;
        a.rho.assign(65, 0.3);
        b.rho = a.rho;
        a.j.resize(65);
        for (std::size_t i = 0; i < 65; ++i) a.j[i] = 2.5 * grid.node(i);
        b.j = a.j;
        a.E = b.E = a.rho;
        for (double r : continuity_residual(a, b))
            CHECK(r == doctest::Approx(2.5).epsilon(1e-12));
    }

    SUBCASE("smooth exact solution: second order in dt and dx") {
        auto rms_res = [&](std::size_t n, double dt) {
            const SpatialGrid grid(4.0, n);
            const auto a = manufactured(grid, 0.4, 1e300);
            const auto b = manufactured(grid, 0.4 + dt, 1e300);
            const auto res = continuity_residual(a, b);
            double ss = 0.0;
            for (double r : res) ss += r * r;
            return std::sqrt(ss / res.size());
        };
        const double coarse = rms_res(129, 0.1);
        const double fine = rms_res(257, 0.05);
        CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.4));
    }

    SUBCASE("mismatched grids throw") {
        FieldState a, b;
        a.grid = SpatialGrid(4.0, 65);
        b.grid = SpatialGrid(4.0, 129);
        a.time = 0;
        b.time = 1;
        a.rho.assign(65, 0.0);
        b.rho.assign(129, 0.0);
        a.j = a.rho;
        b.j = b.rho;
        CHECK_THROWS_AS(continuity_residual(a, b), shape_error);
    }
}

TEST_CASE("field time-derivative identity on smooth states") {
    // (E+ - E-)/dt + j_mid - (j_mid(-L) + j_mid(L))/2 -> 0 at O(dt^2)
    auto identity_err = [&](double dt) {
        const SpatialGrid grid(4.0, 513);
        const auto lo = manufactured(grid, 0.4 - 0.5 * dt, 1e300);
        const auto hi = manufactured(grid, 0.4 + 0.5 * dt, 1e300);
        const auto mid = manufactured(grid, 0.4, 1e300);
        double worst = 0.0;
        const double ends = 0.5 * (mid.j.front() + mid.j.back());
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            const double lhs = (hi.E[i] - lo.E[i]) / dt + mid.j[i] - ends;
            worst = std::max(worst, std::abs(lhs));
        }
        return worst;
    };
    const double e1 = identity_err(0.2);
    const double e2 = identity_err(0.1);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.25));
}

TEST_CASE("total charge") {
    const auto sc = build_standard_case(-0.1, 1.0);
    const SpatialGrid xg(4.0, 513);
    const VelocityGrid vg(1.4, 257);

    SUBCASE("standard case at t = 0 equals 2 E0") {
        auto st = make_state(xg, vg, [&](double x, double v) { return sc.initial(x, v); });
        FieldState f;
        f.grid = xg;
        f.rho = charge_density(st, sc.background);
        const auto fs = field_from_density(f.rho, xg, 1e-9);
        f.E = fs.E;
        f.j = current_density(st, sc.background);
        CHECK(total_charge(f) == doctest::Approx(2.0 * 4.0 / 75.0).epsilon(2e-5));
        CHECK(total_charge(f) == 2.0 * f.E.back()); // bit-exact contract
    }

    SUBCASE("steady is zero") {
        auto st = make_state(xg, vg, [&](double, double v) { return sc.background(v); });
        FieldState f;
        f.grid = xg;
        f.rho = charge_density(st, sc.background);
        CHECK(total_charge(f) == 0.0);
    }
}

TEST_CASE("field CSV round trip") {
    const SpatialGrid grid(2.0, 33);
    FieldState f;
    f.time = 1.5;
    f.grid = grid;
    f.rho.resize(33);
    f.E.resize(33);
    f.j.resize(33);
    for (std::size_t i = 0; i < 33; ++i) {
        f.rho[i] = std::sin(0.1 * i);
        f.E[i] = std::cos(0.2 * i);
        f.j[i] = 0.01 * i;
    }
    std::stringstream ss;
    write_field_csv(ss, f);
    const auto g = read_field_csv(ss, 1.5);
    CHECK(g.grid.nodes == 33);
    for (std::size_t i = 0; i < 33; ++i) {
        CHECK(g.rho[i] == f.rho[i]);
        CHECK(g.E[i] == f.E[i]);
        CHECK(g.j[i] == f.j[i]);
    }
}
