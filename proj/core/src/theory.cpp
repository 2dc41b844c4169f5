#include "vp1d/theory.hpp"

#include <algorithm>
#include <cmath>

#include "vp1d/errors.hpp"

namespace vp1d {

namespace {

double lerp_series(const std::vector<double>& ts, const std::vector<double>& ys, double t) {
    if (ts.empty()) throw insufficient_history_error("empty history");
    if (t <= ts.front()) return ys.front();
    if (t >= ts.back()) return ys.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t k1 = static_cast<std::size_t>(it - ts.begin());
    const std::size_t k0 = k1 - 1;
    const double u = (t - ts[k0]) / (ts[k1] - ts[k0]);
    return (1.0 - u) * ys[k0] + u * ys[k1];
}

int sign_of(double x) { return x >= 0.0 ? 1 : -1; } // sign(0) = +1 per the convention

} // namespace

double TheoryParams::radius_at(double time) const {
    if (t.empty()) {
        if (time == 0.0) return R;
        throw insufficient_history_error("no R(t) history recorded");
    }
    if (time > t.back() + 1e-9 * (t.back() - t.front() + 1.0))
        throw insufficient_history_error("R(t) queried beyond the recorded history");
    return lerp_series(t, r_t, time);
}

TheoryParams make_theory_params(const BackgroundProfile& bg, const InitialData& init,
                                const SpatialGrid& xgrid, const VelocityGrid& vgrid,
                                QuadratureRule rule) {
    TheoryParams p;
    p.omega = plasma_frequency(bg, vgrid, rule);
    p.E0 = initial_field_amplitude(init, xgrid, vgrid, rule);
    p.R = init.radius;
    return p;
}

double exterior_field(double t, double x, const TheoryParams& params) {
    if (std::abs(x) <= params.radius_at(t))
        throw interior_point_error("exterior field queried at |x| <= R(t)");
    return params.E0 * sign_of(x) * std::cos(params.omega * t);
}

double exterior_distribution(double t, double x, double v, const TheoryParams& params,
                             const BackgroundProfile& bg) {
    if (std::abs(x) <= params.radius_at(t))
        throw interior_point_error("exterior distribution queried at |x| <= R(t)");
    if (params.omega <= 0.0) {
        if (params.E0 != 0.0)
            throw config_error("degenerate frequency: omega = 0 with nonzero E0");
        return bg(v);
    }
    const double shift = params.E0 * sign_of(x) / params.omega * std::sin(params.omega * t);
    return bg(v + shift);
}

SupportRadius::SupportRadius(double R, std::vector<double> times, std::vector<double> e_inf,
                             std::vector<double> qg)
    : R_(R), t_(std::move(times)), qg_(std::move(qg)) {
    if (t_.size() != e_inf.size() || t_.size() != qg_.size() || t_.empty())
        throw shape_error("support radius needs matching t, ||E||, Qg histories");
    c1_.resize(t_.size());
    int_c1_.resize(t_.size());
    c1_[0] = 0.0;
    int_c1_[0] = 0.0;
    for (std::size_t k = 1; k < t_.size(); ++k) {
        const double dt = t_[k] - t_[k - 1];
        if (!(dt > 0.0)) throw config_error("history times must increase");
        c1_[k] = c1_[k - 1] + 0.5 * dt * (e_inf[k - 1] + e_inf[k]);
        int_c1_[k] = int_c1_[k - 1] + 0.5 * dt * (c1_[k - 1] + c1_[k]);
    }
}

double SupportRadius::operator()(double t) const {
    if (t < t_.front() - 1e-12 || t > t_.back() + 1e-9 * (t_.back() - t_.front() + 1.0))
        throw insufficient_history_error("support radius queried outside the history");
    const double qg = lerp_series(t_, qg_, t);
    const double c1 = lerp_series(t_, c1_, t);
    const double ic1 = lerp_series(t_, int_c1_, t);
    // int_0^t int_tau^t ||E|| ds dtau = t C1(t) - int_0^t C1
    return R_ + t * qg + (t * c1 - ic1);
}

double support_radius(double t, double R, const RunSeries& series) {
    SupportRadius sr(R, series.t, series.e_inf, series.qg);
    return sr(t);
}

Lemma1Report lemma1_check(const RunSeries& series, double dv) {
    if (series.size() == 0) throw insufficient_history_error("empty series");
    Lemma1Report rep;
    const double qg0 = series.qg.front();
    bool first = true;
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double margin = qg0 + series.c1[k] + dv - series.qg[k];
        if (first || margin < rep.min_margin) {
            rep.min_margin = margin;
            rep.worst_time = series.t[k];
            first = false;
        }
    }
    rep.ok = rep.min_margin >= 0.0;
    return rep;
}

namespace {

bool solve3(double A[3][3], double b[3], double out[3]) {
    int idx[3] = {0, 1, 2};
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(A[idx[r]][c]) > std::abs(A[idx[piv]][c])) piv = r;
        std::swap(idx[c], idx[piv]);
        const double d = A[idx[c]][c];
        if (d == 0.0) return false;
        for (int r = c + 1; r < 3; ++r) {
            const double m = A[idx[r]][c] / d;
            for (int cc = c; cc < 3; ++cc) A[idx[r]][cc] -= m * A[idx[c]][cc];
            b[idx[r]] -= m * b[idx[c]];
        }
    }
    for (int c = 2; c >= 0; --c) {
        double s = b[idx[c]];
        for (int cc = c + 1; cc < 3; ++cc) s -= A[idx[c]][cc] * out[cc];
        out[c] = s / A[idx[c]][c];
    }
    return true;
}

} // namespace

FitReport theorem2_fit(const std::vector<double>& times, const std::vector<double>& values,
                       double probe_x, const TheoryParams& params, double noise_floor) {
    if (times.size() != values.size() || times.size() < 8)
        throw shape_error("fit needs matching series of at least 8 samples");
    if (!params.t.empty() && std::abs(probe_x) <= params.radius_at(times.back()))
        throw interior_point_error("probe inside R(T)");

    FitReport rep;
    double amp = 0.0;
    for (double v : values) amp = std::max(amp, std::abs(v));
    if (amp <= noise_floor) {
        rep.degenerate = true;
        return rep;
    }

    // zero crossings seed the frequency
    std::vector<double> crossings;
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double a = values[k - 1], b = values[k];
        if ((a > 0 && b <= 0) || (a < 0 && b >= 0)) {
            const double u = a / (a - b);
            crossings.push_back(times[k - 1] + u * (times[k] - times[k - 1]));
        }
    }
    if (crossings.size() < 2)
        throw insufficient_history_error("fewer than one period recorded at the probe");
    double omega = M_PI * static_cast<double>(crossings.size() - 1) /
                   (crossings.back() - crossings.front());
    const double span = times.back() - times.front();
    if (span * omega < 2.0 * M_PI * 0.99)
        throw insufficient_history_error("series shorter than one fitted period");

    // Gauss-Newton on (a, b, omega); linear part re-solved inside
    double a = 0.0, b = 0.0;
    for (int it = 0; it < 60; ++it) {
        double A[3][3] = {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}};
        double rhs[3] = {0, 0, 0};
        for (std::size_t k = 0; k < times.size(); ++k) {
            const double c = std::cos(omega * times[k]);
            const double s = std::sin(omega * times[k]);
            const double dw = times[k] * (-a * s + b * c);
            const double r = a * c + b * s - values[k];
            const double J[3] = {c, s, dw};
            for (int p = 0; p < 3; ++p) {
                rhs[p] -= J[p] * r;
                for (int q = 0; q < 3; ++q) A[p][q] += J[p] * J[q];
            }
        }
        double delta[3];
        if (!solve3(A, rhs, delta)) break;
        // cap the frequency move for robustness far from the optimum
        const double max_dw = 0.2 * omega;
        delta[2] = std::clamp(delta[2], -max_dw, max_dw);
        a += delta[0];
        b += delta[1];
        omega += delta[2];
        if (std::abs(delta[0]) + std::abs(delta[1]) + std::abs(delta[2]) < 1e-15 * (1.0 + omega))
            break;
    }

    double sse = 0.0;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double r = a * std::cos(omega * times[k]) + b * std::sin(omega * times[k]) -
                         values[k];
        sse += r * r;
    }
    rep.a = a;
    rep.b = b;
    rep.omega = omega;
    rep.rms = std::sqrt(sse / static_cast<double>(times.size()));
    return rep;
}

Theorem1Report theorem1_check(const std::vector<FieldState>& snapshots,
                              const TheoryParams& params, double threshold) {
    Theorem1Report rep;
    for (const auto& snap : snapshots) {
        const double radius = params.radius_at(snap.time);
        const double buffer = 2.0 * snap.grid.spacing();
        for (std::size_t i = 0; i < snap.grid.nodes; ++i) {
            const double x = snap.grid.node(i);
            if (std::abs(x) <= radius + buffer) continue;
            const double r = std::abs(snap.rho[i]);
            if (r > rep.worst_value) {
                rep.worst_value = r;
                rep.worst_x = x;
                rep.worst_time = snap.time;
            }
        }
    }
    rep.ok = rep.worst_value <= threshold;
    return rep;
}

} // namespace vp1d
