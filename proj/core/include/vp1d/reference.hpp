#pragma once

#include <algorithm>
#include <cmath>

#include "vp1d/profiles.hpp"

namespace vp1d {

/// Moving exterior reference f_ref(t, x, v) = F(v + gamma(t) * chi(x)).
///
/// chi is an odd C^2 smoothstep equal to sign(x) for |x| >= width; gamma is
/// the exterior velocity offset integrated from the computed boundary field
/// by the owning solver. Where the solution is in the exterior regime the
/// deviation from this reference vanishes identically, which is what makes
/// the moment quadratures exact there (the reference's charge moment is
/// zero for every x by shift invariance, and its current moment is
/// gamma * chi(x) * M0 in closed form).
struct ExteriorReference {
    BackgroundProfile bg;
    double width = 0.5; // transition half-width, sign(x) beyond it

    double chi(double x) const {
        const double u = std::clamp(x / width, -1.0, 1.0);
        const double u2 = u * u;
        return u * (15.0 - 10.0 * u2 + 3.0 * u2 * u2) / 8.0;
    }

    double value(double x, double v, double gamma) const {
        return bg(v + gamma * chi(x));
    }
};

} // namespace vp1d
