#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include "vp1d/errors.hpp"

namespace vp1d {

/// Uniform node-centered grid on [-extent, extent].
struct UniformGrid {
    double extent = 0.0;
    std::size_t nodes = 0;

    UniformGrid() = default;
    UniformGrid(double extent_, std::size_t nodes_) : extent(extent_), nodes(nodes_) {
        if (nodes < 8)
            throw config_error("grid needs at least 8 nodes, got " + std::to_string(nodes));
        if (!(extent > 0.0))
            throw config_error("grid extent must be positive");
    }

    double min() const { return -extent; }
    double max() const { return extent; }
    double spacing() const { return 2.0 * extent / static_cast<double>(nodes - 1); }
    double node(std::size_t i) const { return -extent + spacing() * static_cast<double>(i); }

    /// fractional node coordinate of x (0 at the left end)
    double coord(double x) const { return (x + extent) / spacing(); }

    bool contains(double x) const { return x >= -extent && x <= extent; }

    bool same_as(const UniformGrid& o) const {
        return nodes == o.nodes && extent == o.extent;
    }
};

using SpatialGrid = UniformGrid;
using VelocityGrid = UniformGrid;

/// Velocity grid whose node layout puts a node a small fraction xi below
/// v = edge (the background support boundary). Support measurements
/// node-snap downward; without this the initial Q_g reads a full cell low
/// and the Lemma-1 margin is lost where the bound is tight.
inline VelocityGrid velocity_grid_aligned(double edge, double target_extent, std::size_t nodes,
                                          double xi = 0.05) {
    if (nodes % 2 == 0) ++nodes; // symmetric grid with a node at v = 0
    const std::size_t m = (nodes - 1) / 2;
    if (!(edge > 0.0) || target_extent <= edge)
        return VelocityGrid(target_extent, nodes);
    const double k = std::floor(static_cast<double>(m) * edge / target_extent - xi);
    if (k < 1.0)
        return VelocityGrid(target_extent, nodes);
    const double dv = edge / (k + xi);
    return VelocityGrid(static_cast<double>(m) * dv, nodes);
}

} // namespace vp1d
