#pragma once

#include <functional>
#include <optional>

#include "vp1d/grid.hpp"
#include "vp1d/quadrature.hpp"
#include "vp1d/state.hpp"

namespace vp1d {

/// Fixed ion background F(v): even, nonnegative, C^1 with compact support.
struct BackgroundProfile {
    std::function<double(double)> value;  // F(v)
    std::function<double(double)> slope;  // F'(v)
    double support = 0.0;                 // Q_F: F = 0 for |v| > support
    std::optional<double> moment;         // closed-form integral of F, if known
    double curvature_scale = 0.0;         // max |F''|, sets the deviation deadband

    double operator()(double v) const { return value(v); }
};

/// Initial electron density f0(x, v); equals F(v) for |x| > radius.
struct InitialData {
    std::function<double(double, double)> value; // f0(x, v)
    double radius = 0.0;                         // R
    BackgroundProfile background;

    double operator()(double x, double v) const { return value(x, v); }
};

/// omega = sqrt(integral of F); uses the closed-form moment when present,
/// otherwise quadrature over the velocity grid.
double plasma_frequency(const BackgroundProfile& bg, const VelocityGrid& vgrid,
                        QuadratureRule rule = QuadratureRule::trapezoid);

/// E0 = 1/2 * double integral over [-R, R] x velocity space of (F - f0).
double initial_field_amplitude(const InitialData& init, const SpatialGrid& xgrid,
                               const VelocityGrid& vgrid,
                               QuadratureRule rule = QuadratureRule::trapezoid);

/// Canonical fixture: F(v) = amplitude * (15/16)(1 - v^2)^2 on |v| <= 1
/// (unit mass at amplitude 1) and f0 = F(v) * (1 + eps * psi(x/R)) with
/// psi the same quartic bump.
struct StandardCase {
    BackgroundProfile background;
    InitialData initial;
    double epsilon = 0.0;
    double radius = 1.0;
    double amplitude = 1.0;
};
StandardCase build_standard_case(double epsilon, double radius, double amplitude = 1.0);

/// Largest |v| grid node at which |F(v) - f(t,x,v)| exceeds the threshold
/// for some x, maxed with the running historical value.
double deviation_support_qg(const PhaseSpaceState& state, const BackgroundProfile& bg,
                            double threshold, double running = 0.0);

/// quartic bump (1 - u^2)^2 on |u| <= 1 and its derivative
double quartic_bump(double u);
double quartic_bump_slope(double u);

} // namespace vp1d
