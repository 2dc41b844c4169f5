#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "vp1d/grid.hpp"
#include "vp1d/interpolation.hpp"
#include "vp1d/quadrature.hpp"

using namespace vp1d;

TEST_CASE("uniform grid basics") {
    UniformGrid g(2.0, 9);
    CHECK(g.spacing() == doctest::Approx(0.5));
    CHECK(g.node(0) == -2.0);
    CHECK(g.node(8) == 2.0);
    CHECK(g.coord(-2.0) == doctest::Approx(0.0));
    CHECK(g.coord(0.0) == doctest::Approx(4.0));
    CHECK_THROWS_AS(UniformGrid(2.0, 4), config_error);
    CHECK_THROWS_AS(UniformGrid(-1.0, 9), config_error);
}

TEST_CASE("aligned velocity grid puts a node just below the support edge") {
    const double edge = 1.0;
    const auto vg = velocity_grid_aligned(edge, 1.65, 513);
    CHECK(vg.extent >= 1.65);
    CHECK(vg.nodes % 2 == 1);
    // closest node below the edge sits 0.05 cells under it
    double below = -1e300;
    for (std::size_t j = 0; j < vg.nodes; ++j) {
        const double v = vg.node(j);
        if (v < edge) below = std::max(below, v);
    }
    CHECK(edge - below == doctest::Approx(0.05 * vg.spacing()).epsilon(1e-6));
}

TEST_CASE("trapezoid and simpson") {
    // int_0^1 x^2 = 1/3; trapezoid second order
    auto sample = [](std::size_t n) {
        std::vector<double> y(n);
        const double h = 1.0 / double(n - 1);
        for (std::size_t i = 0; i < n; ++i) y[i] = (i * h) * (i * h);
        return y;
    };
    const double h9 = 1.0 / 8.0, h17 = 1.0 / 16.0;
    const double e9 = std::abs(trapezoid(sample(9), h9) - 1.0 / 3.0);
    const double e17 = std::abs(trapezoid(sample(17), h17) - 1.0 / 3.0);
    CHECK(e9 / e17 == doctest::Approx(4.0).epsilon(0.05));
    // simpson exact for cubics
    std::vector<double> cub(9);
    for (std::size_t i = 0; i < 9; ++i) {
        const double x = i * h9;
        cub[i] = x * x * x;
    }
    CHECK(simpson(cub, h9) == doctest::Approx(0.25).epsilon(1e-14));

    std::vector<double> cum;
    cumulative_trapezoid(sample(17), h17, cum);
    CHECK(cum.front() == 0.0);
    CHECK(cum.back() == doctest::Approx(trapezoid(sample(17), h17)));
}

TEST_CASE("cubic Lagrange weights") {
    // partition of unity is exact by construction
    for (double th : {0.0, 0.1, 0.37, 0.5, 0.99}) {
        const auto w = cubic_lagrange_weights(th);
        CHECK(w.wm1 + w.w0 + w.w1 + w.w2 == 1.0);
    }
    // theta = 0 reproduces the node bit-exactly
    const auto w0 = cubic_lagrange_weights(0.0);
    CHECK(w0.wm1 == 0.0);
    CHECK(w0.w0 == 1.0);
    CHECK(w0.w1 == 0.0);
    CHECK(w0.w2 == 0.0);
    // cubics are reproduced exactly
    auto cubic = [](double x) { return ((x - 1.5) * x + 0.25) * x - 2.0; };
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int rep = 0; rep < 32; ++rep) {
        const double th = u(rng);
        const auto w = cubic_lagrange_weights(th);
        const double got =
            w.wm1 * cubic(-1.0) + w.w0 * cubic(0.0) + w.w1 * cubic(1.0) + w.w2 * cubic(2.0);
        CHECK(got == doctest::Approx(cubic(th)).epsilon(1e-13));
    }
}

TEST_CASE("row interpolation: constants and exterior") {
    std::vector<double> row(32, 3.25);
    for (const auto kind : {InterpKind::lagrange, InterpKind::spline}) {
        RowInterpolator it(kind, row.size());
        it.prepare(row);
        CHECK(it.at(10.37) == doctest::Approx(3.25).epsilon(1e-15));
        CHECK(it.at(-5.0) == 0.0);
        CHECK(it.at(40.0) == 0.0);
    }
}

TEST_CASE("row interpolation accuracy on a smooth profile") {
    const std::size_t n = 64;
    auto f = [](double xi) { return std::sin(0.37 * xi) * std::exp(-0.002 * xi * xi); };
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) row[i] = f(double(i));
    for (const auto kind : {InterpKind::lagrange, InterpKind::spline}) {
        RowInterpolator it(kind, n);
        it.prepare(row);
        double worst = 0.0;
        for (double xi = 8.0; xi < 56.0; xi += 0.173)
            worst = std::max(worst, std::abs(it.at(xi) - f(xi)));
        CHECK(worst < 5e-3);
    }
}

TEST_CASE("cubic point evaluation clamps at the ends") {
    std::vector<double> y = {1.0, 2.0, 3.0, 4.0, 5.0};
    CHECK(cubic_point(y, 0.0) == doctest::Approx(1.0));
    CHECK(cubic_point(y, 4.0) == doctest::Approx(5.0));
    CHECK(cubic_point(y, 2.5) == doctest::Approx(3.5).epsilon(1e-13)); // linear data
}
