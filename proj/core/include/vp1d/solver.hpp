#pragma once

#include <cstdint>
#include <vector>

#include "vp1d/characteristics.hpp"
#include "vp1d/fields.hpp"
#include "vp1d/grid.hpp"
#include "vp1d/interpolation.hpp"
#include "vp1d/profiles.hpp"
#include "vp1d/reference.hpp"
#include "vp1d/state.hpp"

namespace vp1d {

struct SolverOptions {
    InterpKind interpolation = InterpKind::lagrange;
    double deadband = -1.0;        // <0: auto, 0.03 * max|F''| * dv^2
    double reference_width = -1.0; // <0: auto, R/2
    double undershoot_tol_rel = 1e-8; // of max f0
    double support_rel = 1e-8;        // of running max |rho|
    double qg_rel = 1e-12;            // of max |g0|
    bool field_solve = true;          // false: free streaming (test hook)
};

struct StepDiagnostics {
    FieldState mid_field;      // field used for the kick, at t + dt/2
    double clipped_mass = 0.0; // undershoot mass clipped this step
};

/// Semi-Lagrangian grid solver. Internally advances the deviation
/// d = f - F(v + gamma * chi(x)) with Strang-split cubic-interpolation
/// advections; the reference part moves analytically.
class SemiLagrangianSolver {
  public:
    SemiLagrangianSolver(const BackgroundProfile& bg, const InitialData& init,
                         const SpatialGrid& xgrid, const VelocityGrid& vgrid,
                         const SolverOptions& opts = {});

    StepDiagnostics step(double dt);

    double time() const { return time_; }
    double gamma() const { return gamma_; }
    double qg() const { return qg_; }
    double c1() const { return c1_; }
    double deadband() const { return deadband_; }
    double clipped_mass_total() const { return clipped_total_; }
    const SpatialGrid& xgrid() const { return xg_; }
    const VelocityGrid& vgrid() const { return vg_; }

    /// end-of-step moments and field at the current time (cached per step)
    const FieldState& field() const { return end_field_; }

    /// assembles the full f grid (reference plus deviation)
    PhaseSpaceState snapshot() const;

    /// deviation from the moving reference (test access)
    const std::vector<double>& deviation() const { return d_; }

  private:
    void advect_x(double half_dt, double gamma);
    void advect_v(double dt, const std::vector<double>& E_mid, double e_mid);
    void apply_undershoot_clip();
    void update_qg();
    void refresh_end_field();
    std::vector<double> rho_from_deviation() const;
    std::vector<double> current_from_deviation(double gamma) const;
    double support_threshold() const;

    BackgroundProfile bg_;
    ExteriorReference ref_;
    SpatialGrid xg_;
    VelocityGrid vg_;
    SolverOptions opts_;

    std::vector<double> d_, scratch_;
    std::vector<double> xs_, vs_, chix_, Fv_;
    double background_moment_ = 0.0;
    FieldState end_field_;

    double time_ = 0.0;
    double gamma_ = 0.0;
    double qg_ = 0.0;
    double c1_ = 0.0;
    double einf_end_ = 0.0; // end-of-step ||E||inf for the C1 trapezoid
    double deadband_ = 0.0;
    double qg_threshold_ = 0.0;
    double undershoot_tol_ = 0.0;
    double rho_run_max_ = 0.0;
    double support_floor_ = 0.0;
    double max_f0_ = 0.0;
    double clipped_total_ = 0.0;
    double clipped_step_ = 0.0;
};

enum class DepositKernel { linear, quadratic };

/// Kernel deposit of weighted particles onto a grid: rho[i] receives
/// w * K((x_i - X)/dx) * cell_area / dx. Particles whose stencil leaves the
/// grid are skipped; the integral of the deposit equals the sum of the
/// deposited weights times cell_area.
std::vector<double> deposit_on_grid(std::span<const double> X, std::span<const double> w,
                                    const SpatialGrid& grid, DepositKernel kernel,
                                    double cell_area);

struct PicOptions {
    std::size_t target_particles = 200000;
    double lattice_x = -1.0; // <0: auto
    double lattice_v = -1.0;
    int corrector_iterations = 2;
    DepositKernel kernel = DepositKernel::quadratic;
    double jitter = 0.0; // lattice jitter amplitude in cells
    std::uint64_t seed = 1;
    double support_rel = 1e-8;
    double qg_rel = 1e-12;
    // a particle may leave the deposit grid only while its deposit weight
    // is below this fraction of the initial weight scale
    double escape_weight_rel = 1e-6;
};

/// Spec view of the particle discretization: delta-f weights w = g at the
/// particle, one lattice cell of phase-space area each.
struct ParticleEnsemble {
    std::vector<CharacteristicPoint> points;
    double cell_area = 0.0;
    double kernel_width = 0.0;
};

/// Delta-f particle solver (the independent oracle). Particles carry their
/// constant f value; weights are algebraic in the current state, and the
/// deposited quantity is the deviation from the same moving reference the
/// grid solver uses.
class DeltaFPicSolver {
  public:
    DeltaFPicSolver(const BackgroundProfile& bg, const InitialData& init,
                    const SpatialGrid& xgrid, const PicOptions& opts = {});

    void step(double dt);

    double time() const { return time_; }
    double gamma() const { return gamma_; }
    double qg() const { return qg_; }
    double c1() const { return c1_; }
    std::size_t particle_count() const { return X_.size(); }
    const SpatialGrid& xgrid() const { return xg_; }

    /// field at the current time (deposited)
    const FieldState& field() const { return field_; }

    ParticleEnsemble ensemble() const;

    /// f reconstructed on a phase-space grid by 2D deposition
    PhaseSpaceState snapshot(const VelocityGrid& vgrid) const;

  private:
    std::vector<double> deposit(const std::vector<double>& V, double gamma) const;
    FieldSolve solve(const std::vector<double>& rho) const;
    double gather(const std::vector<double>& E, double x) const;
    void refresh_field();
    void update_qg();

    BackgroundProfile bg_;
    ExteriorReference ref_;
    SpatialGrid xg_;
    PicOptions opts_;

    std::vector<double> X_, V_, fp_; // positions, velocities, constant f values
    double cell_area_ = 0.0;
    double weight_scale_ = 0.0; // max |g0| over the lattice

    FieldState field_;
    double time_ = 0.0;
    double gamma_ = 0.0;
    double qg_ = 0.0;
    double c1_ = 0.0;
    double qg_threshold_ = 0.0;
    double rho_run_max_ = 0.0;
    double support_floor_ = 0.0;
    double background_moment_ = 0.0;
};

} // namespace vp1d
