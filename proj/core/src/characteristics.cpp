#include "vp1d/characteristics.hpp"

#include <algorithm>
#include <ostream>

namespace vp1d {

FieldSampler::FieldSampler(std::vector<double> times, std::vector<std::vector<double>> E,
                           std::vector<std::vector<double>> rho, SpatialGrid grid, bool strict)
    : times_(std::move(times)), E_(std::move(E)), rho_(std::move(rho)), grid_(grid),
      strict_(strict) {
    if (times_.size() < 2 || E_.size() != times_.size() || rho_.size() != times_.size())
        throw config_error("field sampler needs at least two snapshots with matching arrays");
    for (std::size_t k = 1; k < times_.size(); ++k)
        if (!(times_[k] > times_[k - 1]))
            throw config_error("field sampler times must be strictly increasing");
}

FieldSampler FieldSampler::from_states(const std::vector<FieldState>& states, bool strict) {
    std::vector<double> times;
    std::vector<std::vector<double>> E, rho;
    times.reserve(states.size());
    for (const auto& s : states) {
        times.push_back(s.time);
        E.push_back(s.E);
        rho.push_back(s.rho);
    }
    if (states.empty()) throw config_error("field sampler needs snapshots");
    return FieldSampler(std::move(times), std::move(E), std::move(rho), states.front().grid,
                        strict);
}

double FieldSampler::sample(const std::vector<std::vector<double>>& fields, double t, double x,
                            bool edge_extend) const {
    const double teps = 1e-9 * (times_.back() - times_.front());
    if (t < times_.front() - teps || t > times_.back() + teps)
        throw insufficient_history_error("sample time outside the stored range");
    t = std::clamp(t, times_.front(), times_.back());

    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    std::size_t k1 = static_cast<std::size_t>(it - times_.begin());
    if (k1 == 0) k1 = 1;
    if (k1 >= times_.size()) k1 = times_.size() - 1;
    const std::size_t k0 = k1 - 1;
    const double u = (t - times_[k0]) / (times_[k1] - times_[k0]);

    if (!grid_.contains(x)) {
        if (strict_)
            throw out_of_domain_error("sample point left the spatial grid");
        if (!edge_extend) return 0.0;
        const std::size_t edge = (x < 0.0) ? 0 : grid_.nodes - 1;
        return (1.0 - u) * fields[k0][edge] + u * fields[k1][edge];
    }
    const double xi = grid_.coord(x);
    const double f0 = cubic_point(fields[k0], xi);
    const double f1 = cubic_point(fields[k1], xi);
    return (1.0 - u) * f0 + u * f1;
}

Lemma2Report lemma2_monitor(const std::vector<PathSample>& path,
                            const std::function<double(double)>& radius_at, double tolerance) {
    Lemma2Report rep;
    bool first = true;
    for (const auto& ps : path) {
        const double margin = std::abs(ps.x) - radius_at(ps.s);
        if (first || margin < rep.min_margin) rep.min_margin = margin;
        first = false;
        if (rep.ok && margin < -tolerance) {
            rep.ok = false;
            rep.first_violation = ps;
        }
    }
    return rep;
}

void write_trajectory_csv(std::ostream& out, const std::vector<CharacteristicPoint>& points) {
    out << "s,X,V,dXdv,dVdv,w\n";
    for (const auto& p : points) {
        csv_number(out, p.s);
        out << ',';
        csv_number(out, p.x);
        out << ',';
        csv_number(out, p.v);
        out << ',';
        csv_number(out, p.dxdv);
        out << ',';
        csv_number(out, p.dvdv);
        out << ',';
        csv_number(out, p.w);
        out << '\n';
    }
}

} // namespace vp1d
