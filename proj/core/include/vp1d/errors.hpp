#pragma once

#include <stdexcept>
#include <string>

namespace vp1d {

// Numerical-contract violations are distinct types so callers (and the CLI
// exit-code logic) can tell configuration mistakes from runtime blow-ups.

struct domain_coverage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |rho| above threshold at the grid ends: the domain was sized too small,
// or the compact-support property failed.
struct support_overflow_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct out_of_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct interpolation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// exterior formulas queried at |x| <= R(t)
struct interior_point_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct insufficient_history_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct negativity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct shape_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace vp1d
