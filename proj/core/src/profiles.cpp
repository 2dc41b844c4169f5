#include "vp1d/profiles.hpp"

#include <cmath>
#include <vector>

#include "vp1d/errors.hpp"

namespace vp1d {

double quartic_bump(double u) {
    if (std::abs(u) > 1.0) return 0.0;
    const double w = 1.0 - u * u;
    return w * w;
}

double quartic_bump_slope(double u) {
    if (std::abs(u) > 1.0) return 0.0;
    return 2.0 * (1.0 - u * u) * (-2.0 * u);
}

double plasma_frequency(const BackgroundProfile& bg, const VelocityGrid& vgrid,
                        QuadratureRule rule) {
    if (vgrid.extent < bg.support)
        throw domain_coverage_error("velocity grid does not cover the background support");
    double mass;
    if (bg.moment) {
        mass = *bg.moment;
    } else {
        std::vector<double> y(vgrid.nodes);
        for (std::size_t j = 0; j < vgrid.nodes; ++j) y[j] = bg(vgrid.node(j));
        mass = integrate(y, vgrid.spacing(), rule);
    }
    if (mass < 0.0) mass = 0.0;
    return std::sqrt(mass);
}

double initial_field_amplitude(const InitialData& init, const SpatialGrid& xgrid,
                               const VelocityGrid& vgrid, QuadratureRule rule) {
    if (xgrid.extent < init.radius)
        throw domain_coverage_error("spatial grid does not cover [-R, R]");
    if (vgrid.extent < init.background.support)
        throw domain_coverage_error("velocity grid does not cover the background support");

    // trapezoid over the x-nodes inside [-R, R]; the integrand F - f0 is
    // continuous and vanishes at |x| = R, so skipping the partial end cells
    // costs O(h^3)
    std::vector<double> col(vgrid.nodes), rows;
    rows.reserve(xgrid.nodes);
    std::vector<double> xs;
    xs.reserve(xgrid.nodes);
    for (std::size_t i = 0; i < xgrid.nodes; ++i) {
        const double x = xgrid.node(i);
        if (std::abs(x) > init.radius) continue;
        for (std::size_t j = 0; j < vgrid.nodes; ++j) {
            const double v = vgrid.node(j);
            col[j] = init.background(v) - init(x, v);
        }
        rows.push_back(integrate(col, vgrid.spacing(), rule));
        xs.push_back(x);
    }
    if (rows.size() < 2) return 0.0;
    return 0.5 * integrate(rows, xgrid.spacing(), rule);
}

StandardCase build_standard_case(double epsilon, double radius, double amplitude) {
    if (epsilon <= -1.0)
        throw negativity_error("epsilon <= -1 makes f0 negative");
    if (!(radius > 0.0))
        throw config_error("perturbation radius must be positive");
    if (!(amplitude >= 0.0))
        throw config_error("background amplitude must be nonnegative");

    const double c = amplitude * 15.0 / 16.0;
    StandardCase sc;
    sc.epsilon = epsilon;
    sc.radius = radius;
    sc.amplitude = amplitude;
    sc.background.value = [c](double v) { return c * quartic_bump(v); };
    sc.background.slope = [c](double v) { return c * quartic_bump_slope(v); };
    sc.background.support = amplitude > 0.0 ? 1.0 : 0.0;
    sc.background.moment = amplitude * 1.0; // (15/16) * 16/15
    sc.background.curvature_scale = c * 8.0; // |F''(+-1)| = (15/16)*8 per unit amplitude
    sc.initial.background = sc.background;
    sc.initial.radius = radius;
    const auto bgv = sc.background.value;
    sc.initial.value = [bgv, epsilon, radius](double x, double v) {
        return bgv(v) * (1.0 + epsilon * quartic_bump(x / radius));
    };
    return sc;
}

double deviation_support_qg(const PhaseSpaceState& state, const BackgroundProfile& bg,
                            double threshold, double running) {
    if (threshold < 0.0)
        throw config_error("deviation support threshold must be nonnegative");
    const std::size_t nx = state.xgrid.nodes;
    const std::size_t nv = state.vgrid.nodes;
    double best = 0.0;
    // scan rows from the largest |v| inward; stop once both signs hit
    std::size_t lo = 0, hi = nv; // [lo, hi) still unexamined
    while (lo < hi) {
        // pick whichever remaining row has the larger |v|
        const double vlo = std::abs(state.vgrid.node(lo));
        const double vhi = std::abs(state.vgrid.node(hi - 1));
        const std::size_t j = (vhi >= vlo) ? hi - 1 : lo;
        const double vj = state.vgrid.node(j);
        if (std::abs(vj) <= best) break;
        const double Fv = bg(vj);
        const double* row = state.f.data() + j * nx;
        bool hit = false;
        for (std::size_t i = 0; i < nx; ++i) {
            if (std::abs(Fv - row[i]) > threshold) {
                hit = true;
                break;
            }
        }
        if (hit) best = std::max(best, std::abs(vj));
        if (j == hi - 1) --hi; else ++lo;
    }
    return std::max(best, running);
}

} // namespace vp1d
