#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace vp1d {

enum class QuadratureRule { trapezoid, simpson };

/// composite trapezoid of uniformly sampled values
inline double trapezoid(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

/// composite Simpson; falls back to a trapezoid panel at the end when the
/// interval count is odd
inline double simpson(std::span<const double> y, double h) {
    if (y.size() < 2) return 0.0;
    if (y.size() == 2) return 0.5 * h * (y[0] + y[1]);
    double s = 0.0;
    std::size_t i = 0;
    for (; i + 2 < y.size(); i += 2) s += y[i] + 4.0 * y[i + 1] + y[i + 2];
    s *= h / 3.0;
    if (i + 1 < y.size()) s += 0.5 * h * (y[i] + y[i + 1]); // leftover panel
    return s;
}

inline double integrate(std::span<const double> y, double h, QuadratureRule rule) {
    return rule == QuadratureRule::simpson ? simpson(y, h) : trapezoid(y, h);
}

/// cumulative trapezoid, out[0] = 0, out[i] = integral up to node i
inline void cumulative_trapezoid(std::span<const double> y, double h, std::vector<double>& out) {
    out.resize(y.size());
    if (y.empty()) return;
    out[0] = 0.0;
    for (std::size_t i = 1; i < y.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (y[i - 1] + y[i]);
}

} // namespace vp1d
