#pragma once

#include <cstddef>
#include <vector>

#include "vp1d/grid.hpp"

namespace vp1d {

/// Gridded phase-space density f(t, x, v) with the running diagnostics the
/// theory checks need. Layout: row-major over velocity, f[j*nx + i].
struct PhaseSpaceState {
    double time = 0.0;
    SpatialGrid xgrid;
    VelocityGrid vgrid;
    std::vector<double> f;

    // running history
    double qg = 0.0;    // sup_{tau<=t} velocity support of F - f
    double c1 = 0.0;    // integral of ||E||inf over [0, t]
    double gamma = 0.0; // exterior velocity offset accumulated from the boundary field

    double at(std::size_t ix, std::size_t jv) const { return f[jv * xgrid.nodes + ix]; }
    double& at(std::size_t ix, std::size_t jv) { return f[jv * xgrid.nodes + ix]; }
};

} // namespace vp1d
