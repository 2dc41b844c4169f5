#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "vp1d/characteristics.hpp"
#include "vp1d/profiles.hpp"

using namespace vp1d;

namespace {

struct ZeroField {
    double E(double, double) const { return 0.0; }
    double rho(double, double) const { return 0.0; }
};

struct ConstField {
    double value;
    double E(double, double) const { return value; }
    double rho(double, double) const { return 0.0; }
};

// E = A sin(x) cos(t); consistent rho = dE/dx
struct WaveField {
    double A = 0.05;
    double E(double t, double x) const { return A * std::sin(x) * std::cos(t); }
    double rho(double t, double x) const { return A * std::cos(x) * std::cos(t); }
};

// exterior oscillation: E = E0 sign(x) cos(w t), rho = 0 away from x = 0
struct ExteriorField {
    double E0 = 4.0 / 75.0, omega = 1.0;
    double E(double t, double x) const {
        return E0 * (x >= 0 ? 1.0 : -1.0) * std::cos(omega * t);
    }
    double rho(double, double) const { return 0.0; }
};

} // namespace

TEST_CASE("free streaming") {
    ZeroField field;
    CharacteristicPoint p;
    p.x = 1.3;
    p.v = -0.7;
    p.s = 2.5;
    TraceOptions opt;
    opt.dt = 0.05;
    const auto q = trace(p, field, 0.0, opt);
    CHECK(q.x == doctest::Approx(p.x - 2.5 * p.v).epsilon(1e-14));
    CHECK(q.v == doctest::Approx(p.v).epsilon(1e-15));
    CHECK(q.s == 0.0);
}

TEST_CASE("constant field kinematics are exact for the Verlet stepper") {
    ConstField field{0.08};
    CharacteristicPoint p;
    p.x = -0.4;
    p.v = 0.9;
    p.s = 3.0;
    TraceOptions opt;
    opt.dt = 0.1;
    const auto q = trace(p, field, 0.0, opt);
    const double t = 3.0;
    CHECK(q.v == doctest::Approx(p.v + t * field.value).epsilon(1e-13));
    CHECK(q.x == doctest::Approx(p.x - t * p.v - 0.5 * t * t * field.value).epsilon(1e-12));
}

TEST_CASE("exterior oscillating field reproduces the sinusoidal velocity shift") {
    ExteriorField field;
    CharacteristicPoint p;
    p.x = 100.0; // far from the sign flip
    p.v = 0.3;
    p.s = 2.0 * M_PI;
    TraceOptions opt;
    opt.dt = 1e-3;
    const auto q = trace(p, field, 0.0, opt);
    const double expect = p.v + field.E0 / field.omega * std::sin(field.omega * p.s);
    CHECK(q.v == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("time reversal returns the anchor at second order") {
    WaveField field;
    CharacteristicPoint p;
    p.x = 0.7;
    p.v = 0.5;
    p.s = 3.0;
    auto round_trip_err = [&](double dt) {
        TraceOptions opt;
        opt.dt = dt;
        const auto back = trace(p, field, 0.0, opt);
        const auto again = trace(back, field, 3.0, opt);
        return std::hypot(again.x - p.x, again.v - p.v);
    };
    const double e1 = round_trip_err(0.05);
    const double e2 = round_trip_err(0.025);
    CHECK(e2 < e1);
    CHECK(e1 / e2 > 3.0); // ~second order
    CHECK(e2 < 1e-6);
}

TEST_CASE("tangent under zero charge density") {
    ConstField field{0.05}; // nonzero E, zero rho
    CharacteristicPoint p;
    p.x = 0.2;
    p.v = -0.1;
    p.s = 4.0;
    TraceOptions opt;
    opt.dt = 0.05;
    const auto q = trace_with_tangent(p, field, 1.0, opt);
    CHECK(q.dvdv == 1.0);
    CHECK(q.dxdv == doctest::Approx(-(4.0 - 1.0)).epsilon(1e-13)); // -(t - s)
}

TEST_CASE("tangent matches central finite differences of the trace") {
    WaveField field;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> ux(-2.0, 2.0), uv(-1.0, 1.0);
    TraceOptions opt;
    opt.dt = 2e-3;
    const double h = 1e-4;
    for (int rep = 0; rep < 10; ++rep) {
        CharacteristicPoint p;
        p.x = ux(rng);
        p.v = uv(rng);
        p.s = 2.0;
        const auto base = trace_with_tangent(p, field, 0.0, opt);
        auto pp = p, pm = p;
        pp.v += h;
        pm.v -= h;
        const auto qp = trace(pp, field, 0.0, opt);
        const auto qm = trace(pm, field, 0.0, opt);
        const double fd = (qp.v - qm.v) / (2.0 * h);
        CHECK(base.dvdv == doctest::Approx(fd).epsilon(5e-5));
    }
}

TEST_CASE("delta-f weight evolution") {
    const auto sc = build_standard_case(-0.1, 1.0);

    SUBCASE("zero field keeps the weight constant") {
        ZeroField field;
        CharacteristicPoint p;
        p.x = 0.5;
        p.v = 0.2;
        p.w = 0.123;
        p.s = 1.0;
        TraceOptions opt;
        opt.dt = 0.1;
        CHECK(evolve_weight(p, field, 0.0, opt, sc.background).w == 0.123);
    }

    SUBCASE("constant field: weight tracks F(V) - const") {
        ConstField field{0.07};
        CharacteristicPoint p;
        p.x = 0.0;
        p.v = 0.3;
        p.w = 0.0;
        p.s = 0.0;
        TraceOptions opt;
        opt.dt = 1e-3;
        const double t = 2.0;
        const auto q = evolve_weight(p, field, t, opt, sc.background);
        // forward trace: V(t) = v - t E0
        const double expect = sc.background(p.v - t * field.value) - sc.background(p.v);
        CHECK(q.w == doctest::Approx(expect).epsilon(1e-7));
    }
}

TEST_CASE("lemma 2 monitor") {
    std::vector<PathSample> path;
    for (int k = 0; k <= 10; ++k) {
        const double s = 0.1 * k;
        path.push_back({s, 2.0 + s, 0.0});
    }

    SUBCASE("satisfied trajectory") {
        const auto rep = lemma2_monitor(path, [](double) { return 1.5; }, 1e-12);
        CHECK(rep.ok);
        CHECK(rep.min_margin == doctest::Approx(0.5));
    }

    SUBCASE("synthetic violation reported at the first offending sample") {
        const auto rep = lemma2_monitor(
            path, [](double s) { return s < 0.45 ? 1.5 : 10.0; }, 1e-12);
        CHECK_FALSE(rep.ok);
        CHECK(rep.first_violation.s == doctest::Approx(0.5));
    }
}

TEST_CASE("field sampler") {
    const SpatialGrid grid(4.0, 65);
    WaveField wave;
    std::vector<FieldState> snaps;
    for (double t : {0.0, 0.5, 1.0}) {
        FieldState f;
        f.time = t;
        f.grid = grid;
        f.rho.resize(grid.nodes);
        f.E.resize(grid.nodes);
        f.j.assign(grid.nodes, 0.0);
        for (std::size_t i = 0; i < grid.nodes; ++i) {
            f.E[i] = wave.E(t, grid.node(i));
            f.rho[i] = wave.rho(t, grid.node(i));
        }
        snaps.push_back(std::move(f));
    }

    SUBCASE("interpolates the stored fields") {
        const auto sampler = FieldSampler::from_states(snaps);
        CHECK(sampler.E(0.5, 1.0) == doctest::Approx(wave.E(0.5, 1.0)).epsilon(1e-6));
        // linear blend between snapshots
        const double mid = 0.5 * (wave.E(0.0, 1.3) + wave.E(0.5, 1.3));
        CHECK(sampler.E(0.25, 1.3) == doctest::Approx(mid).epsilon(1e-6));
        CHECK(sampler.rho(1.0, -0.7) == doctest::Approx(wave.rho(1.0, -0.7)).epsilon(1e-6));
    }

    SUBCASE("exterior extension vs strict mode") {
        const auto loose = FieldSampler::from_states(snaps, false);
        CHECK(loose.E(0.0, 10.0) == doctest::Approx(wave.E(0.0, 4.0)).epsilon(1e-12));
        CHECK(loose.rho(0.0, 10.0) == 0.0);
        const auto strict = FieldSampler::from_states(snaps, true);
        CHECK_THROWS_AS(strict.E(0.0, 10.0), out_of_domain_error);
    }

    SUBCASE("time range is enforced") {
        const auto sampler = FieldSampler::from_states(snaps);
        CHECK_THROWS_AS(sampler.E(2.0, 0.0), insufficient_history_error);
    }
}

TEST_CASE("trajectory CSV") {
    std::vector<CharacteristicPoint> pts(3);
    pts[1].x = 1.0;
    pts[2].w = -0.5;
    std::stringstream ss;
    write_trajectory_csv(ss, pts);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "s,X,V,dXdv,dVdv,w");
    int rows = 0;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}
