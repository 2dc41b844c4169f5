#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "vp1d/grid.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/state.hpp"

namespace vp1d {

/// Charge density, field and current on one spatial grid at one time.
struct FieldState {
    double time = 0.0;
    SpatialGrid grid;
    std::vector<double> rho;
    std::vector<double> E;
    std::vector<double> j;
    double l_sup = 0.0; // measured support bound: |rho| <= threshold outside [-l_sup, l_sup]
};

/// rho(x_i) = trapezoid over v of F(v) - f(t, x_i, v)
std::vector<double> charge_density(const PhaseSpaceState& state, const BackgroundProfile& bg);

/// j(x_i) = trapezoid over v of v (F(v) - f(t, x_i, v))
std::vector<double> current_density(const PhaseSpaceState& state, const BackgroundProfile& bg);

struct FieldSolve {
    std::vector<double> E;
    double l_sup = 0.0;
};

/// E(x_i) = cumulative trapezoid of rho minus half the total; exactly
/// antisymmetric endpoint values by construction. Throws
/// support_overflow_error when |rho| exceeds the threshold at either grid
/// end (the formula needs the support strictly inside).
FieldSolve field_from_density(const std::vector<double>& rho, const SpatialGrid& grid,
                              double support_threshold);

/// centered estimate of d rho/dt + d j/dx between two recorded times
std::vector<double> continuity_residual(const FieldState& prev, const FieldState& next);

/// trapezoid of rho over the grid; equals 2 E(right end) bit-exactly
double total_charge(const FieldState& field);

/// CSV columns x, rho, E, j (header required)
void write_field_csv(std::ostream& out, const FieldState& field);
FieldState read_field_csv(std::istream& in, double time);

} // namespace vp1d
