#include "vp1d/run.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vp1d/interpolation.hpp"
#include "vp1d/quadrature.hpp"
#include "vp1d/solver.hpp"

namespace vp1d {

namespace {

struct SeriesRecorder {
    const ResolvedSetup& setup;
    RunSeries& series;
    double int_c1 = 0.0; // integral of C1 over time, for the R(t) double integral
    double prev_c1 = 0.0;
    const FieldState* prev_field = nullptr;

    void record(const FieldState& field, double qg, double c1, double gamma,
                double clipped_mass) {
        const auto& grid = field.grid;
        auto probe_val = [&](double p) {
            return cubic_point(field.E, grid.coord(std::clamp(p, grid.min(), grid.max())));
        };
        const double t = field.time;
        series.t.push_back(t);
        series.e_probe_pos.push_back(probe_val(setup.probe_positions.at(0)));
        series.e_probe_neg.push_back(
            probe_val(setup.probe_positions.size() > 1 ? setup.probe_positions[1]
                                                       : -setup.probe_positions[0]));
        double einf = 0.0, rinf = 0.0;
        for (double e : field.E) einf = std::max(einf, std::abs(e));
        for (double r : field.rho) rinf = std::max(rinf, std::abs(r));
        series.e_inf.push_back(einf);
        series.rho_inf.push_back(rinf);
        series.total_charge.push_back(total_charge(field));
        series.e_left_end.push_back(field.E.front());
        series.e_right_end.push_back(field.E.back());
        series.l_sup.push_back(field.l_sup);
        series.qg.push_back(qg);
        series.c1.push_back(c1);
        series.gamma.push_back(gamma);
        if (!series.t.empty() && series.t.size() >= 2) {
            const double dt = t - series.t[series.t.size() - 2];
            int_c1 += 0.5 * dt * (prev_c1 + c1);
        }
        prev_c1 = c1;
        series.r_t.push_back(setup.theory.R + t * qg + (t * c1 - int_c1));
        if (prev_field) {
            const auto res = continuity_residual(*prev_field, field);
            double ss = 0.0;
            for (double r : res) ss += r * r;
            series.continuity_res.push_back(
                std::sqrt(ss / static_cast<double>(res.size())));
        } else {
            series.continuity_res.push_back(0.0);
        }
        series.clipped_mass.push_back(clipped_mass);
    }
};

} // namespace

RunArtifacts run_simulation(const ResolvedSetup& setup, Scheme scheme,
                            const std::filesystem::path& dir) {
    if (scheme == Scheme::both)
        throw config_error("run_simulation expects a single scheme");

    RunArtifacts art;
    art.dir = dir;
    art.setup = setup;
    art.setup.config.scheme = scheme;
    art.setup.config.output_dir = dir.string();

    SeriesRecorder rec{art.setup, art.series};

    std::vector<std::size_t> snap_steps;
    for (double ts : setup.snapshot_times)
        snap_steps.push_back(static_cast<std::size_t>(std::llround(ts / setup.dt)));

    const bool keep_history = setup.config.field_history;
    const bool keep_f = setup.config.f_snapshots;

    try {
        if (scheme == Scheme::semilagrangian) {
            SolverOptions opts;
            opts.interpolation = setup.config.interpolation;
            opts.deadband = setup.config.deadband;
            opts.reference_width = setup.config.reference_width;
            opts.undershoot_tol_rel = setup.config.undershoot_rel;
            opts.support_rel = setup.config.support_rel;
            opts.qg_rel = setup.config.qg_rel;
            SemiLagrangianSolver solver(setup.profiles.background, setup.profiles.initial,
                                        setup.xgrid, setup.vgrid, opts);

            auto emit_snapshot = [&]() {
                art.field_snapshots.push_back(solver.field());
                if (keep_f) art.f_snapshots.push_back(solver.snapshot());
            };

            rec.record(solver.field(), solver.qg(), solver.c1(), solver.gamma(), 0.0);
            if (keep_history) art.field_history.push_back(solver.field());
            emit_snapshot();
            FieldState prev = solver.field();
            rec.prev_field = &prev;
            for (std::size_t k = 1; k <= setup.steps; ++k) {
                const auto diag = solver.step(setup.dt);
                const FieldState& f = solver.field();
                rec.record(f, solver.qg(), solver.c1(), solver.gamma(), diag.clipped_mass);
                if (keep_history) art.field_history.push_back(f);
                if (std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end())
                    emit_snapshot();
                prev = f;
            }
        } else {
            PicOptions opts;
            opts.target_particles = setup.config.pic_particles;
            opts.lattice_x = setup.config.pic_lattice_x;
            opts.lattice_v = setup.config.pic_lattice_v;
            opts.corrector_iterations = setup.config.pic_iterations;
            opts.kernel = setup.config.pic_kernel;
            opts.jitter = setup.config.pic_jitter;
            opts.seed = setup.config.seed;
            opts.support_rel = setup.config.support_rel;
            opts.qg_rel = setup.config.qg_rel;
            DeltaFPicSolver solver(setup.profiles.background, setup.profiles.initial,
                                   setup.xgrid, opts);

            auto emit_snapshot = [&]() {
                art.field_snapshots.push_back(solver.field());
                if (keep_f) art.f_snapshots.push_back(solver.snapshot(setup.vgrid));
            };

            rec.record(solver.field(), solver.qg(), solver.c1(), solver.gamma(), 0.0);
            if (keep_history) art.field_history.push_back(solver.field());
            emit_snapshot();
            FieldState prev = solver.field();
            rec.prev_field = &prev;
            for (std::size_t k = 1; k <= setup.steps; ++k) {
                solver.step(setup.dt);
                const FieldState& f = solver.field();
                rec.record(f, solver.qg(), solver.c1(), solver.gamma(), 0.0);
                if (keep_history) art.field_history.push_back(f);
                if (std::find(snap_steps.begin(), snap_steps.end(), k) != snap_steps.end())
                    emit_snapshot();
                prev = f;
            }
        }
    } catch (const std::runtime_error& err) {
        art.failed = true;
        art.failure = err.what();
        write_artifacts(art);
        throw;
    }

    write_artifacts(art);
    return art;
}

} // namespace vp1d
