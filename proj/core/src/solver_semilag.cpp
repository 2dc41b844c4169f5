#include "vp1d/solver.hpp"

#include <algorithm>
#include <cmath>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/parallel.hpp"
#include "vp1d/quadrature.hpp"

namespace vp1d {

SemiLagrangianSolver::SemiLagrangianSolver(const BackgroundProfile& bg, const InitialData& init,
                                           const SpatialGrid& xgrid, const VelocityGrid& vgrid,
                                           const SolverOptions& opts)
    : bg_(bg), xg_(xgrid), vg_(vgrid), opts_(opts) {
    if (vg_.extent < bg_.support)
        throw domain_coverage_error("velocity grid does not cover the background support");
    if (xg_.extent < init.radius)
        throw domain_coverage_error("spatial grid does not cover the initial perturbation");

    ref_.bg = bg_;
    ref_.width = opts_.reference_width > 0.0 ? opts_.reference_width
                                             : std::max(0.5 * init.radius, 4.0 * xg_.spacing());

    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    xs_.resize(nx);
    chix_.resize(nx);
    for (std::size_t i = 0; i < nx; ++i) {
        xs_[i] = xg_.node(i);
        chix_[i] = ref_.chi(xs_[i]);
    }
    vs_.resize(nv);
    Fv_.resize(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        vs_[j] = vg_.node(j);
        Fv_[j] = bg_(vs_[j]);
    }

    d_.resize(nx * nv);
    scratch_.resize(nx * nv);
    double dmax = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double f0 = init(xs_[i], vs_[j]);
            if (f0 < 0.0) throw negativity_error("initial data is negative");
            const double dev = f0 - Fv_[j]; // gamma(0) = 0
            d_[j * nx + i] = dev;
            dmax = std::max(dmax, std::abs(dev));
            max_f0_ = std::max(max_f0_, f0);
        }
    }

    const double dv = vg_.spacing();
    deadband_ = opts_.deadband >= 0.0 ? opts_.deadband
                                      : 0.03 * bg_.curvature_scale * dv * dv;
    qg_threshold_ = opts_.qg_rel * dmax;
    undershoot_tol_ = opts_.undershoot_tol_rel * max_f0_;

    background_moment_ = bg_.moment ? *bg_.moment : trapezoid(Fv_, dv);
    support_floor_ = 1e-12 * (1.0 + background_moment_);

    update_qg();
    refresh_end_field();
}

double SemiLagrangianSolver::support_threshold() const {
    return opts_.support_rel * rho_run_max_ + support_floor_;
}

std::vector<double> SemiLagrangianSolver::rho_from_deviation() const {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double dv = vg_.spacing();
    std::vector<double> rho(nx, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        const double w = ((j == 0 || j + 1 == nv) ? 0.5 : 1.0) * dv;
        const double* row = d_.data() + j * nx;
        for (std::size_t i = 0; i < nx; ++i) rho[i] -= w * row[i];
    }
    return rho;
}

std::vector<double> SemiLagrangianSolver::current_from_deviation(double gamma) const {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double dv = vg_.spacing();
    std::vector<double> cur(nx, 0.0);
    for (std::size_t j = 0; j < nv; ++j) {
        const double w = ((j == 0 || j + 1 == nv) ? 0.5 : 1.0) * dv * vs_[j];
        const double* row = d_.data() + j * nx;
        for (std::size_t i = 0; i < nx; ++i) cur[i] -= w * row[i];
    }
    for (std::size_t i = 0; i < nx; ++i) cur[i] += gamma * chix_[i] * background_moment_;
    return cur;
}

void SemiLagrangianSolver::refresh_end_field() {
    end_field_.time = time_;
    end_field_.grid = xg_;
    end_field_.rho = rho_from_deviation();
    for (double r : end_field_.rho) rho_run_max_ = std::max(rho_run_max_, std::abs(r));
    if (opts_.field_solve) {
        auto fs = field_from_density(end_field_.rho, xg_, support_threshold());
        end_field_.E = std::move(fs.E);
        end_field_.l_sup = fs.l_sup;
    } else {
        end_field_.E.assign(xg_.nodes, 0.0);
        end_field_.l_sup = 0.0;
    }
    end_field_.j = current_from_deviation(gamma_);

    double einf = 0.0;
    for (double e : end_field_.E) einf = std::max(einf, std::abs(e));
    einf_end_ = einf;
}

void SemiLagrangianSolver::advect_x(double half_dt, double gamma) {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double dx = xg_.spacing();
    const double db = deadband_;
    const double w0 = ref_.width;

    parallel_for(nv, [&](std::size_t j) {
        RowInterpolator interp(opts_.interpolation, nx);
        const double vj = vs_[j];
        const double shift = vj * half_dt / dx; // foot index = i - shift
        const double* src = d_.data() + j * nx;
        double* dst = scratch_.data() + j * nx;
        interp.prepare({src, nx});
        for (std::size_t i = 0; i < nx; ++i) {
            double val = interp.at(static_cast<double>(i) - shift);
            if (db > 0.0 && std::abs(val) < db) val = 0.0;
            dst[i] = val;
        }
        // reference difference F(v + g chi(foot)) - F(v + g chi(x)): nonzero
        // only where foot and node do not share a chi plateau
        if (gamma != 0.0 && std::abs(vj) <= bg_.support + std::abs(gamma)) {
            const double reach = w0 + std::abs(vj * half_dt);
            for (std::size_t i = 0; i < nx; ++i) {
                if (std::abs(xs_[i]) >= reach) continue;
                const double foot = xs_[i] - vj * half_dt;
                const double cf = ref_.chi(foot);
                if (cf == chix_[i]) continue;
                dst[i] += bg_(vj + gamma * cf) - bg_(vj + gamma * chix_[i]);
                if (db > 0.0 && std::abs(dst[i]) < db) dst[i] = 0.0;
            }
        }
    });
    d_.swap(scratch_);
}

void SemiLagrangianSolver::advect_v(double dt, const std::vector<double>& E_mid, double e_mid) {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double dv = vg_.spacing();
    const double db = deadband_;
    const double gamma_new = gamma_ + dt * e_mid;

    parallel_for(nx, [&](std::size_t i) {
        RowInterpolator interp(opts_.interpolation, nv);
        std::vector<double> col(nv);
        for (std::size_t j = 0; j < nv; ++j) col[j] = d_[j * nx + i];
        interp.prepare(col);
        const double Ei = E_mid[i];
        const double foot_offset = Ei * dt / dv; // foot index = j + offset
        const double arg_shift = dt * (Ei - e_mid * chix_[i]);
        for (std::size_t j = 0; j < nv; ++j) {
            double val = interp.at(static_cast<double>(j) + foot_offset);
            if (arg_shift != 0.0) {
                const double base = vs_[j] + gamma_new * chix_[i];
                if (std::abs(base) <= bg_.support + std::abs(arg_shift))
                    val += bg_(base + arg_shift) - bg_(base);
            }
            if (db > 0.0 && std::abs(val) < db) val = 0.0;
            scratch_[j * nx + i] = val;
        }
    });
    d_.swap(scratch_);
    gamma_ = gamma_new;
}

void SemiLagrangianSolver::apply_undershoot_clip() {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double dxdv = xg_.spacing() * vg_.spacing();
    clipped_step_ = 0.0;
    double worst = 0.0;
    for (std::size_t j = 0; j < nv; ++j) {
        double* row = d_.data() + j * nx;
        const double vj = vs_[j];
        // f = ref + d can only go negative where d < 0
        for (std::size_t i = 0; i < nx; ++i) {
            if (row[i] >= 0.0) continue;
            const double refv = ref_.value(xs_[i], vj, gamma_);
            const double f = refv + row[i];
            if (f >= 0.0) continue;
            worst = std::min(worst, f);
            clipped_step_ += -f * dxdv;
            row[i] = -refv; // clip f to zero
        }
    }
    clipped_total_ += clipped_step_;
    if (-worst > undershoot_tol_)
        throw interpolation_error("interpolation undershoot " + number_string(-worst) +
                                  " exceeds tolerance " + number_string(undershoot_tol_));
}

void SemiLagrangianSolver::update_qg() {
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    const double thr = qg_threshold_;
    const double gabs = std::abs(gamma_);
    double best = 0.0;
    // rows from the largest |v| inward until both signs hit
    std::size_t lo = 0, hi = nv;
    while (lo < hi) {
        const double vlo = std::abs(vs_[lo]);
        const double vhi = std::abs(vs_[hi - 1]);
        const std::size_t j = (vhi >= vlo) ? hi - 1 : lo;
        const double vj = vs_[j];
        if (std::abs(vj) <= best) break;
        const double* row = d_.data() + j * nx;
        bool hit = false;
        if (std::abs(vj) > bg_.support + gabs) {
            // both F terms vanish there: g = -d
            for (std::size_t i = 0; i < nx; ++i)
                if (std::abs(row[i]) > thr) { hit = true; break; }
        } else {
            const double Fv = Fv_[j];
            for (std::size_t i = 0; i < nx; ++i) {
                const double g = Fv - bg_(vj + gamma_ * chix_[i]) - row[i];
                if (std::abs(g) > thr) { hit = true; break; }
            }
        }
        if (hit) best = std::max(best, std::abs(vj));
        if (j == hi - 1) --hi; else ++lo;
    }
    qg_ = std::max(qg_, best);
}

StepDiagnostics SemiLagrangianSolver::step(double dt) {
    if (!(dt > 0.0)) throw config_error("time step must be positive");
    const std::size_t nx = xg_.nodes;
    const double einf_prev = einf_end_;

    advect_x(0.5 * dt, gamma_);

    StepDiagnostics diag;
    diag.mid_field.time = time_ + 0.5 * dt;
    diag.mid_field.grid = xg_;
    diag.mid_field.rho = rho_from_deviation();
    double e_mid = 0.0;
    if (opts_.field_solve) {
        for (double r : diag.mid_field.rho) rho_run_max_ = std::max(rho_run_max_, std::abs(r));
        auto fs = field_from_density(diag.mid_field.rho, xg_, support_threshold());
        diag.mid_field.E = std::move(fs.E);
        diag.mid_field.l_sup = fs.l_sup;
        e_mid = diag.mid_field.E.back();
    } else {
        diag.mid_field.E.assign(nx, 0.0);
    }
    diag.mid_field.j = current_from_deviation(gamma_ + 0.5 * dt * e_mid);

    if (opts_.field_solve) advect_v(dt, diag.mid_field.E, e_mid);
    advect_x(0.5 * dt, gamma_);
    time_ += dt;

    apply_undershoot_clip();
    diag.clipped_mass = clipped_step_;
    update_qg();
    refresh_end_field();
    c1_ += 0.5 * dt * (einf_prev + einf_end_);
    return diag;
}

PhaseSpaceState SemiLagrangianSolver::snapshot() const {
    PhaseSpaceState st;
    st.time = time_;
    st.xgrid = xg_;
    st.vgrid = vg_;
    st.qg = qg_;
    st.c1 = c1_;
    st.gamma = gamma_;
    const std::size_t nx = xg_.nodes, nv = vg_.nodes;
    st.f.resize(nx * nv);
    for (std::size_t j = 0; j < nv; ++j) {
        const double vj = vs_[j];
        for (std::size_t i = 0; i < nx; ++i)
            st.f[j * nx + i] = ref_.value(xs_[i], vj, gamma_) + d_[j * nx + i];
    }
    return st;
}

} // namespace vp1d
