#include "vp1d/fields.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/parallel.hpp"
#include "vp1d/quadrature.hpp"

namespace vp1d {

namespace {

std::vector<double> velocity_moment(const PhaseSpaceState& state, const BackgroundProfile& bg,
                                    bool weight_by_v) {
    const std::size_t nx = state.xgrid.nodes;
    const std::size_t nv = state.vgrid.nodes;
    const double dv = state.vgrid.spacing();
    std::vector<double> Fv(nv), vs(nv);
    for (std::size_t j = 0; j < nv; ++j) {
        vs[j] = state.vgrid.node(j);
        Fv[j] = bg(vs[j]);
    }
    std::vector<double> out(nx);
    parallel_for(nx, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < nv; ++j) {
            double g = Fv[j] - state.f[j * nx + i];
            if (weight_by_v) g *= vs[j];
            const double w = (j == 0 || j + 1 == nv) ? 0.5 : 1.0;
            sum += w * g;
        }
        out[i] = sum * dv;
    });
    return out;
}

} // namespace

std::vector<double> charge_density(const PhaseSpaceState& state, const BackgroundProfile& bg) {
    if (state.vgrid.extent < bg.support)
        throw domain_coverage_error("velocity grid does not cover the background support");
    return velocity_moment(state, bg, false);
}

std::vector<double> current_density(const PhaseSpaceState& state, const BackgroundProfile& bg) {
    if (state.vgrid.extent < bg.support)
        throw domain_coverage_error("velocity grid does not cover the background support");
    return velocity_moment(state, bg, true);
}

FieldSolve field_from_density(const std::vector<double>& rho, const SpatialGrid& grid,
                              double support_threshold) {
    if (rho.size() != grid.nodes)
        throw shape_error("density array does not match the grid");
    const std::size_t n = rho.size();
    if (std::abs(rho.front()) > support_threshold || std::abs(rho.back()) > support_threshold)
        throw support_overflow_error(
            "charge density above threshold at the grid boundary; domain too small");

    FieldSolve out;
    cumulative_trapezoid(rho, grid.spacing(), out.E);
    const double half_total = 0.5 * out.E.back();
    for (double& e : out.E) e -= half_total;

    out.l_sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(rho[i]) > support_threshold)
            out.l_sup = std::max(out.l_sup, std::abs(grid.node(i)));
    }
    return out;
}

std::vector<double> continuity_residual(const FieldState& prev, const FieldState& next) {
    if (!prev.grid.same_as(next.grid) || prev.rho.size() != next.rho.size() ||
        prev.j.size() != next.j.size())
        throw shape_error("continuity residual needs both states on one grid");
    if (!(next.time > prev.time))
        throw config_error("continuity residual needs next.time > prev.time");
    const std::size_t n = prev.rho.size();
    const double dt = next.time - prev.time;
    const double dx = prev.grid.spacing();
    std::vector<double> res(n);
    std::vector<double> jm(n);
    for (std::size_t i = 0; i < n; ++i) jm[i] = 0.5 * (prev.j[i] + next.j[i]);
    for (std::size_t i = 0; i < n; ++i) res[i] = (next.rho[i] - prev.rho[i]) / dt;
    for (std::size_t i = 1; i + 1 < n; ++i) res[i] += (jm[i + 1] - jm[i - 1]) / (2.0 * dx);
    if (n >= 3) {
        res[0] += (-3.0 * jm[0] + 4.0 * jm[1] - jm[2]) / (2.0 * dx);
        res[n - 1] += (3.0 * jm[n - 1] - 4.0 * jm[n - 2] + jm[n - 3]) / (2.0 * dx);
    }
    return res;
}

double total_charge(const FieldState& field) {
    return trapezoid(field.rho, field.grid.spacing());
}

void write_field_csv(std::ostream& out, const FieldState& field) {
    out << "x,rho,E,j\n";
    for (std::size_t i = 0; i < field.grid.nodes; ++i) {
        csv_number(out, field.grid.node(i));
        out << ',';
        csv_number(out, field.rho[i]);
        out << ',';
        csv_number(out, field.E[i]);
        out << ',';
        csv_number(out, field.j[i]);
        out << '\n';
    }
}

FieldState read_field_csv(std::istream& in, double time) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,rho,E,j", 0) != 0)
        throw config_error("field CSV: missing x,rho,E,j header");
    std::vector<double> xs, rho, E, j;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 4) throw config_error("field CSV: expected 4 columns");
        xs.push_back(parse_double(cells[0]));
        rho.push_back(parse_double(cells[1]));
        E.push_back(parse_double(cells[2]));
        j.push_back(parse_double(cells[3]));
    }
    if (xs.size() < 8) throw config_error("field CSV: too few rows");
    FieldState fs;
    fs.time = time;
    fs.grid = SpatialGrid(std::abs(xs.back()), xs.size());
    fs.rho = std::move(rho);
    fs.E = std::move(E);
    fs.j = std::move(j);
    return fs;
}

} // namespace vp1d
