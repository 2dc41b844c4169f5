#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vp1d/grid.hpp"
#include "vp1d/interpolation.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/quadrature.hpp"
#include "vp1d/solver.hpp"
#include "vp1d/theory.hpp"

namespace vp1d {

enum class Scheme { semilagrangian, deltaf_pic, both };

struct VerifyTolerances {
    double freq_rel = 1e-2;      // |fitted omega - omega| / omega
    double amp_rel = 2e-2;       // |fitted amplitude - E0| / E0
    double sine_rel = 1e-2;      // |sin component| / E0
    double thm1_rel = 1e-6;      // exterior |rho| / run max |rho|
    double thm2_dist_rel = 1e-3; // sup_v |f - theory| / max F
    double tangent_tol = 1e-6;   // |dV/dv(0) - 1|
    double lemma2_cells = 2.0;   // slack in units of dx
    double charge_rel = 2e-2;    // |total - 2 E0 cos| / 2 E0
    double antisym_rel = 1e-12;  // |E_left + E_right| / max |E|
    double compare_rel = 5e-2;   // rho series rel L2, peak-normalized
    int anchors = 20;
    double convergence_lo = 2.83; // residual ratio band (order 1.5 .. 3)
    double convergence_hi = 8.0;
};

/// Parsed run configuration; negative numeric fields mean "auto".
struct RunConfig {
    std::string profile_name = "quartic-bump";
    double epsilon = 0.0;
    double radius = 1.0;
    double amplitude = 1.0;

    std::size_t nx = 2049;
    std::size_t nv = 513;
    double x_extent = -1.0;
    double v_extent = -1.0;

    double final_periods = -1.0;
    double final_time = -1.0;
    double dt = -1.0;
    double steps_per_period = -1.0;

    Scheme scheme = Scheme::semilagrangian;
    InterpKind interpolation = InterpKind::lagrange;
    QuadratureRule quadrature = QuadratureRule::trapezoid;
    double reference_width = -1.0;
    double deadband = -1.0;

    std::size_t pic_particles = 200000;
    DepositKernel pic_kernel = DepositKernel::quadratic;
    double pic_lattice_x = -1.0;
    double pic_lattice_v = -1.0;
    int pic_iterations = 2;
    double pic_jitter = 0.0;

    std::uint64_t seed = 1;
    std::vector<double> probes;                            // empty: auto
    std::vector<double> snapshot_fractions = {0.25, 0.5, 1.0}; // of final time

    double support_rel = 1e-8;
    double qg_rel = 1e-12;
    double undershoot_rel = 1e-8;

    std::string output_dir = "out";
    bool field_history = true;
    bool f_snapshots = true;

    VerifyTolerances verify;
};

/// Everything a run needs, with all auto fields resolved.
struct ResolvedSetup {
    RunConfig config; // auto fields replaced by their resolved values
    StandardCase profiles;
    TheoryParams theory; // closed-form E0, omega
    SpatialGrid xgrid;
    VelocityGrid vgrid;
    double dt = 0.0;
    std::size_t steps = 0;
    double final_time = 0.0;
    std::vector<double> probe_positions;
    std::vector<double> snapshot_times; // snapped to step times, ascending
    double c1_apriori = 0.0;            // crude bound on int ||E||inf over the run
    double r_apriori = 0.0;             // crude R(T)
};

/// key = value text; unknown keys are errors
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& file);

/// validate and resolve all auto fields
ResolvedSetup resolve(const RunConfig& cfg);

/// round-trippable echo of a resolved configuration
std::string echo_config(const ResolvedSetup& setup);

/// a priori R(t) used for sizing and by the theory subcommand
double apriori_radius(const RunConfig& cfg, double E0, double omega, double t);

} // namespace vp1d
