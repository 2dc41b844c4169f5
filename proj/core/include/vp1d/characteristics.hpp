#pragma once

#include <cmath>
#include <concepts>
#include <functional>
#include <iosfwd>
#include <vector>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/fields.hpp"
#include "vp1d/interpolation.hpp"
#include "vp1d/profiles.hpp"

namespace vp1d {

/// One point on a characteristic, anchored at time s with the v-tangent
/// (dX/dv, dV/dv) and the delta-f weight carried along.
struct CharacteristicPoint {
    double x = 0.0;
    double v = 0.0;
    double dxdv = 0.0;
    double dvdv = 1.0;
    double w = 0.0;
    double s = 0.0;
};

struct PathSample {
    double s, x, v;
};

template <class S>
concept FieldSource = requires(const S& s, double t, double x) {
    { s.E(t, x) } -> std::convertible_to<double>;
    { s.rho(t, x) } -> std::convertible_to<double>;
};

/// Time-indexed stack of field states: linear in t, cubic in x. Outside the
/// grid, E continues with its boundary value and rho with zero (exact by the
/// 1D field law while the support stays interior); strict mode throws
/// instead.
class FieldSampler {
  public:
    FieldSampler(std::vector<double> times, std::vector<std::vector<double>> E,
                 std::vector<std::vector<double>> rho, SpatialGrid grid, bool strict = false);

    static FieldSampler from_states(const std::vector<FieldState>& states, bool strict = false);

    double E(double t, double x) const { return sample(E_, t, x, /*edge_extend=*/true); }
    double rho(double t, double x) const { return sample(rho_, t, x, /*edge_extend=*/false); }

    double t_min() const { return times_.front(); }
    double t_max() const { return times_.back(); }
    const SpatialGrid& grid() const { return grid_; }

  private:
    double sample(const std::vector<std::vector<double>>& fields, double t, double x,
                  bool edge_extend) const;

    std::vector<double> times_;
    std::vector<std::vector<double>> E_;
    std::vector<std::vector<double>> rho_;
    SpatialGrid grid_;
    bool strict_;
};

struct TraceOptions {
    double dt = 1e-2;          // substep size cap
    bool record_path = false;  // fill PathSample vector
};

namespace detail {

// velocity-Verlet substep for dX/ds = V, dV/ds = -E(s, X); tangent and
// weight ride along with matching second-order updates
template <FieldSource S>
void verlet_substep(CharacteristicPoint& p, const S& field, double h, bool tangent,
                    const BackgroundProfile* bg) {
    const double a0 = -field.E(p.s, p.x);
    const double e0 = -a0;
    const double r0 = tangent ? field.rho(p.s, p.x) : 0.0;
    const double x1 = p.x + h * p.v + 0.5 * h * h * a0;
    const double s1 = p.s + h;
    const double a1 = -field.E(s1, x1);
    const double e1 = -a1;
    const double v1 = p.v + 0.5 * h * (a0 + a1);
    if (tangent) {
        const double b0 = -r0 * p.dxdv;
        const double dxdv1 = p.dxdv + h * p.dvdv + 0.5 * h * h * b0;
        const double r1 = field.rho(s1, x1);
        const double b1 = -r1 * dxdv1;
        p.dvdv += 0.5 * h * (b0 + b1);
        p.dxdv = dxdv1;
    }
    if (bg) {
        // dw/ds = -E F'(V) along the path (f constant, w tracks F(V) - f)
        p.w += 0.5 * h * (-e0 * bg->slope(p.v) - e1 * bg->slope(v1));
    }
    p.x = x1;
    p.v = v1;
    p.s = s1;
}

template <FieldSource S>
CharacteristicPoint integrate(CharacteristicPoint p, const S& field, double s_target,
                              const TraceOptions& opt, bool tangent, const BackgroundProfile* bg,
                              std::vector<PathSample>* path) {
    if (!(opt.dt > 0.0)) throw config_error("trace substep must be positive");
    const double span = s_target - p.s;
    if (span == 0.0) return p;
    const int nsub = std::max(1, static_cast<int>(std::ceil(std::abs(span) / opt.dt)));
    const double h = span / nsub;
    if (path) path->push_back({p.s, p.x, p.v});
    for (int k = 0; k < nsub; ++k) {
        verlet_substep(p, field, h, tangent, bg);
        if (path) path->push_back({p.s, p.x, p.v});
    }
    p.s = s_target; // absorb roundoff from repeated addition
    return p;
}

} // namespace detail

/// integrate the characteristic ODE from p.s to s_target
template <FieldSource S>
CharacteristicPoint trace(const CharacteristicPoint& p, const S& field, double s_target,
                          const TraceOptions& opt, std::vector<PathSample>* path = nullptr) {
    return detail::integrate(p, field, s_target, opt, false, nullptr, path);
}

/// trace plus the v-tangent system d(dX/dv) = dV/dv, d(dV/dv) = -rho dX/dv
template <FieldSource S>
CharacteristicPoint trace_with_tangent(const CharacteristicPoint& p, const S& field,
                                       double s_target, const TraceOptions& opt,
                                       std::vector<PathSample>* path = nullptr) {
    return detail::integrate(p, field, s_target, opt, true, nullptr, path);
}

/// trace plus the delta-f weight dw/ds = -E(s,X) F'(V)
template <FieldSource S>
CharacteristicPoint evolve_weight(const CharacteristicPoint& p, const S& field, double s_target,
                                  const TraceOptions& opt, const BackgroundProfile& bg,
                                  std::vector<PathSample>* path = nullptr) {
    return detail::integrate(p, field, s_target, opt, false, &bg, path);
}

struct Lemma2Report {
    bool ok = true;
    double min_margin = 0.0;      // min over samples of |X(s)| - R(s)
    PathSample first_violation{}; // valid when !ok
};

/// check |X(s)| >= R(s) - tolerance at every recorded sample
Lemma2Report lemma2_monitor(const std::vector<PathSample>& path,
                            const std::function<double(double)>& radius_at, double tolerance);

/// CSV: s, X, V, dXdv, dVdv, w — one row per recorded substep
void write_trajectory_csv(std::ostream& out, const std::vector<CharacteristicPoint>& points);

} // namespace vp1d
