#include "vp1d/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/quadrature.hpp"

namespace vp1d {

namespace {

struct KernelWeights {
    long first; // leftmost node index
    double w[3];
    int count;
};

KernelWeights kernel_at(DepositKernel kind, double xi) {
    KernelWeights k{};
    if (kind == DepositKernel::linear) {
        const double jf = std::floor(xi);
        k.first = static_cast<long>(jf);
        const double th = xi - jf;
        k.w[0] = 1.0 - th;
        k.w[1] = th;
        k.count = 2;
    } else {
        const double jr = std::nearbyint(xi);
        k.first = static_cast<long>(jr) - 1;
        const double th = xi - jr; // in [-1/2, 1/2]
        k.w[0] = 0.5 * (0.5 - th) * (0.5 - th);
        k.w[1] = 0.75 - th * th;
        k.w[2] = 0.5 * (0.5 + th) * (0.5 + th);
        k.count = 3;
    }
    return k;
}

} // namespace

std::vector<double> deposit_on_grid(std::span<const double> X, std::span<const double> w,
                                    const SpatialGrid& grid, DepositKernel kernel,
                                    double cell_area) {
    if (X.size() != w.size()) throw shape_error("deposit: X and w sizes differ");
    const std::size_t n = grid.nodes;
    std::vector<double> rho(n, 0.0);
    for (std::size_t p = 0; p < X.size(); ++p) {
        if (!grid.contains(X[p])) continue;
        const KernelWeights k = kernel_at(kernel, grid.coord(X[p]));
        if (k.first < 0 || k.first + k.count > static_cast<long>(n)) continue;
        for (int q = 0; q < k.count; ++q)
            rho[static_cast<std::size_t>(k.first + q)] += k.w[q] * w[p];
    }
    const double scale = cell_area / grid.spacing();
    for (double& r : rho) r *= scale;
    return rho;
}

DeltaFPicSolver::DeltaFPicSolver(const BackgroundProfile& bg, const InitialData& init,
                                 const SpatialGrid& xgrid, const PicOptions& opts)
    : bg_(bg), xg_(xgrid), opts_(opts) {
    ref_.bg = bg_;
    ref_.width = std::max(0.5 * init.radius, 4.0 * xg_.spacing());

    const double lat_x = opts_.lattice_x > 0.0 ? opts_.lattice_x : 0.8 * xg_.extent;
    const double lat_v = opts_.lattice_v > 0.0 ? opts_.lattice_v : bg_.support + 0.6;
    if (lat_x > xg_.extent)
        throw config_error("particle lattice wider than the deposit grid");
    if (opts_.target_particles < 1000)
        throw config_error("delta-f oracle needs at least 1000 particles");

    // equal-spacing lattice sized to the particle target
    const double area = 4.0 * lat_x * lat_v;
    const double cell = std::sqrt(area / static_cast<double>(opts_.target_particles));
    const std::size_t npx = std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(2.0 * lat_x / cell)));
    const std::size_t npv = std::max<std::size_t>(8, static_cast<std::size_t>(std::lround(2.0 * lat_v / cell)));
    const double dxl = 2.0 * lat_x / static_cast<double>(npx);
    const double dvl = 2.0 * lat_v / static_cast<double>(npv);
    cell_area_ = dxl * dvl;

    std::mt19937_64 rng(opts_.seed);
    std::uniform_real_distribution<double> jit(-0.5, 0.5);

    X_.reserve(npx * npv);
    V_.reserve(npx * npv);
    fp_.reserve(npx * npv);
    for (std::size_t ix = 0; ix < npx; ++ix) {
        for (std::size_t jv = 0; jv < npv; ++jv) {
            double x = -lat_x + dxl * (static_cast<double>(ix) + 0.5);
            double v = -lat_v + dvl * (static_cast<double>(jv) + 0.5);
            if (opts_.jitter > 0.0) {
                x += opts_.jitter * dxl * jit(rng);
                v += opts_.jitter * dvl * jit(rng);
            }
            const double f0 = init(x, v);
            if (f0 < 0.0) throw negativity_error("initial data is negative");
            X_.push_back(x);
            V_.push_back(v);
            fp_.push_back(f0);
            weight_scale_ = std::max(weight_scale_, std::abs(bg_(v) - f0));
        }
    }

    const double dv_lattice = dvl;
    background_moment_ = bg_.moment ? *bg_.moment : 0.0;
    if (!bg_.moment) {
        // quadrature over the lattice velocity column
        std::vector<double> y;
        y.reserve(npv);
        for (std::size_t jv = 0; jv < npv; ++jv)
            y.push_back(bg_(-lat_v + dv_lattice * (static_cast<double>(jv) + 0.5)));
        for (double f : y) background_moment_ += f * dv_lattice;
    }
    support_floor_ = 1e-12 * (1.0 + background_moment_);
    qg_threshold_ = opts_.qg_rel * weight_scale_;

    refresh_field();
    update_qg();
}

double DeltaFPicSolver::gather(const std::vector<double>& E, double x) const {
    const long n = static_cast<long>(E.size());
    const double xi = xg_.coord(x);
    if (xi < 1.0) return E.front(); // constant exterior extension
    if (xi > static_cast<double>(n - 2)) return E.back();
    const KernelWeights k = kernel_at(opts_.kernel, xi);
    double val = 0.0;
    for (int q = 0; q < k.count; ++q) {
        long idx = k.first + q;
        if (idx < 0) idx = 0;
        if (idx > n - 1) idx = n - 1;
        val += k.w[q] * E[static_cast<std::size_t>(idx)];
    }
    return val;
}

std::vector<double> DeltaFPicSolver::deposit(const std::vector<double>& V, double gamma) const {
    const std::size_t n = xg_.nodes;
    const double dx = xg_.spacing();
    std::vector<double> rho(n, 0.0);
    double escaped_worst = 0.0;
    for (std::size_t p = 0; p < X_.size(); ++p) {
        // deviation from the moving reference; the reference's own charge
        // moment vanishes pointwise, so this deposit is the whole of rho
        const double q = ref_.value(X_[p], V[p], gamma) - fp_[p];
        if (!xg_.contains(X_[p])) {
            escaped_worst = std::max(escaped_worst, std::abs(q));
            continue;
        }
        if (q == 0.0) continue;
        const double xi = xg_.coord(X_[p]);
        const KernelWeights k = kernel_at(opts_.kernel, xi);
        if (k.first < 0 || k.first + k.count > static_cast<long>(n)) {
            escaped_worst = std::max(escaped_worst, std::abs(q));
            continue;
        }
        for (int w = 0; w < k.count; ++w)
            rho[static_cast<std::size_t>(k.first + w)] += k.w[w] * q;
    }
    if (escaped_worst > opts_.escape_weight_rel * weight_scale_)
        throw out_of_domain_error("weighted particle left the deposit grid (weight " +
                                  number_string(escaped_worst) + "); enlarge the domain");
    const double scale = cell_area_ / dx;
    for (double& r : rho) r *= scale;
    return rho;
}

FieldSolve DeltaFPicSolver::solve(const std::vector<double>& rho) const {
    return field_from_density(rho, xg_, opts_.support_rel * std::max(rho_run_max_, 1e-300) +
                                            support_floor_);
}

void DeltaFPicSolver::refresh_field() {
    auto rho = deposit(V_, gamma_);
    for (double r : rho) rho_run_max_ = std::max(rho_run_max_, std::abs(r));
    auto fs = solve(rho);
    field_.time = time_;
    field_.grid = xg_;
    field_.rho = std::move(rho);
    field_.E = std::move(fs.E);
    field_.l_sup = fs.l_sup;
    // j = gamma chi M0 + sum of v-weighted deviation weights
    const std::size_t n = xg_.nodes;
    const double dx = xg_.spacing();
    field_.j.assign(n, 0.0);
    for (std::size_t p = 0; p < X_.size(); ++p) {
        if (!xg_.contains(X_[p])) continue;
        const double q = (ref_.value(X_[p], V_[p], gamma_) - fp_[p]) * V_[p];
        if (q == 0.0) continue;
        const KernelWeights k = kernel_at(opts_.kernel, xg_.coord(X_[p]));
        if (k.first < 0 || k.first + k.count > static_cast<long>(n)) continue;
        for (int w = 0; w < k.count; ++w)
            field_.j[static_cast<std::size_t>(k.first + w)] += k.w[w] * q;
    }
    const double scale = cell_area_ / dx;
    for (std::size_t i = 0; i < n; ++i)
        field_.j[i] = field_.j[i] * scale + gamma_ * ref_.chi(xg_.node(i)) * background_moment_;
}

void DeltaFPicSolver::update_qg() {
    // g-weight support: largest |V| among particles with |F(V) - f_p| above
    // threshold, maxed with history
    double best = 0.0;
    for (std::size_t p = 0; p < X_.size(); ++p) {
        const double w = bg_(V_[p]) - fp_[p];
        if (std::abs(w) > qg_threshold_) best = std::max(best, std::abs(V_[p]));
    }
    qg_ = std::max(qg_, best);
}

void DeltaFPicSolver::step(double dt) {
    if (!(dt > 0.0)) throw config_error("time step must be positive");
    const double einf_prev = [&] {
        double m = 0.0;
        for (double e : field_.E) m = std::max(m, std::abs(e));
        return m;
    }();

    const double e_old = field_.E.back();
    // kick-drift with the current field
    std::vector<double> Vh(V_.size());
    for (std::size_t p = 0; p < X_.size(); ++p) {
        Vh[p] = V_[p] - 0.5 * dt * gather(field_.E, X_[p]);
        X_[p] += dt * Vh[p];
    }
    // closing kick: field at the new time depends on the new weights, which
    // depend on the closing kick; a short fixed-point iteration converges
    // (contraction ~ O(dt^2))
    std::vector<double> Enew = field_.E;
    double gamma_try = gamma_ + dt * e_old; // predictor
    std::vector<double> Vnew(V_.size());
    const int iters = std::max(1, opts_.corrector_iterations + 1);
    for (int it = 0; it < iters; ++it) {
        for (std::size_t p = 0; p < X_.size(); ++p)
            Vnew[p] = Vh[p] - 0.5 * dt * gather(Enew, X_[p]);
        auto rho = deposit(Vnew, gamma_try);
        for (double r : rho) rho_run_max_ = std::max(rho_run_max_, std::abs(r));
        auto fs = solve(rho);
        Enew = std::move(fs.E);
        gamma_try = gamma_ + 0.5 * dt * (e_old + Enew.back());
    }
    for (std::size_t p = 0; p < X_.size(); ++p)
        V_[p] = Vh[p] - 0.5 * dt * gather(Enew, X_[p]);
    gamma_ = gamma_ + 0.5 * dt * (e_old + Enew.back());
    time_ += dt;

    refresh_field();
    update_qg();
    double einf = 0.0;
    for (double e : field_.E) einf = std::max(einf, std::abs(e));
    c1_ += 0.5 * dt * (einf_prev + einf);
}

ParticleEnsemble DeltaFPicSolver::ensemble() const {
    ParticleEnsemble ens;
    ens.cell_area = cell_area_;
    ens.kernel_width = opts_.kernel == DepositKernel::quadratic ? 1.5 * xg_.spacing()
                                                                : xg_.spacing();
    ens.points.reserve(X_.size());
    for (std::size_t p = 0; p < X_.size(); ++p) {
        CharacteristicPoint cp;
        cp.x = X_[p];
        cp.v = V_[p];
        cp.w = bg_(V_[p]) - fp_[p]; // delta-f weight: g at the particle
        cp.s = time_;
        ens.points.push_back(cp);
    }
    return ens;
}

PhaseSpaceState DeltaFPicSolver::snapshot(const VelocityGrid& vgrid) const {
    PhaseSpaceState st;
    st.time = time_;
    st.xgrid = xg_;
    st.vgrid = vgrid;
    st.qg = qg_;
    st.c1 = c1_;
    st.gamma = gamma_;
    const std::size_t nx = xg_.nodes, nv = vgrid.nodes;
    // 2D deposit of the reference-relative deviation, then add the reference
    std::vector<double> dev(nx * nv, 0.0);
    const double dx = xg_.spacing(), dv = vgrid.spacing();
    for (std::size_t p = 0; p < X_.size(); ++p) {
        if (!xg_.contains(X_[p]) || !vgrid.contains(V_[p])) continue;
        const double q = fp_[p] - ref_.value(X_[p], V_[p], gamma_); // d at the particle
        if (q == 0.0) continue;
        const KernelWeights kx = kernel_at(opts_.kernel, xg_.coord(X_[p]));
        const KernelWeights kv = kernel_at(opts_.kernel, vgrid.coord(V_[p]));
        if (kx.first < 0 || kx.first + kx.count > static_cast<long>(nx)) continue;
        if (kv.first < 0 || kv.first + kv.count > static_cast<long>(nv)) continue;
        for (int a = 0; a < kv.count; ++a)
            for (int b = 0; b < kx.count; ++b)
                dev[static_cast<std::size_t>(kv.first + a) * nx +
                    static_cast<std::size_t>(kx.first + b)] += kv.w[a] * kx.w[b] * q;
    }
    const double scale = cell_area_ / (dx * dv);
    st.f.resize(nx * nv);
    for (std::size_t j = 0; j < nv; ++j) {
        const double v = vgrid.node(j);
        for (std::size_t i = 0; i < nx; ++i)
            st.f[j * nx + i] = ref_.value(xg_.node(i), v, gamma_) + dev[j * nx + i] * scale;
    }
    return st;
}

} // namespace vp1d
