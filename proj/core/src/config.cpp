#include "vp1d/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"

namespace vp1d {

namespace {

std::string trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return std::string(s);
}

double num_or_auto(const std::string& v, const std::string& key) {
    if (v == "auto") return -1.0;
    try {
        return parse_double(v);
    } catch (const config_error&) {
        throw config_error("key '" + key + "': expected a number or 'auto', got '" + v + "'");
    }
}

double num(const std::string& v, const std::string& key) {
    try {
        return parse_double(v);
    } catch (const config_error&) {
        throw config_error("key '" + key + "': expected a number, got '" + v + "'");
    }
}

bool flag(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw config_error("key '" + key + "': expected true/false, got '" + v + "'");
}

std::vector<double> num_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        out.push_back(num(item, key));
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool periods_set = false, time_set = false, dt_set = false, spp_set = false;

    std::stringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw config_error("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(std::string_view(stripped).substr(0, eq));
        const std::string val = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty() || val.empty())
            throw config_error("line " + std::to_string(lineno) + ": empty key or value");

        if (key == "profile.name") {
            if (val != "quartic-bump")
                throw config_error("unknown profile name '" + val + "'");
            cfg.profile_name = val;
        } else if (key == "profile.epsilon") {
            cfg.epsilon = num(val, key);
        } else if (key == "profile.radius") {
            cfg.radius = num(val, key);
        } else if (key == "profile.amplitude") {
            cfg.amplitude = num(val, key);
        } else if (key == "grid.nx") {
            cfg.nx = static_cast<std::size_t>(num(val, key));
        } else if (key == "grid.nv") {
            cfg.nv = static_cast<std::size_t>(num(val, key));
        } else if (key == "grid.x_extent") {
            cfg.x_extent = num_or_auto(val, key);
        } else if (key == "grid.v_extent") {
            cfg.v_extent = num_or_auto(val, key);
        } else if (key == "time.final_periods") {
            cfg.final_periods = num(val, key);
            periods_set = true;
        } else if (key == "time.final_time") {
            cfg.final_time = num(val, key);
            time_set = true;
        } else if (key == "time.dt") {
            cfg.dt = num(val, key);
            dt_set = true;
        } else if (key == "time.steps_per_period") {
            cfg.steps_per_period = num(val, key);
            spp_set = true;
        } else if (key == "solver.scheme") {
            if (val == "semilagrangian") cfg.scheme = Scheme::semilagrangian;
            else if (val == "deltaf-pic") cfg.scheme = Scheme::deltaf_pic;
            else if (val == "both") cfg.scheme = Scheme::both;
            else throw config_error("solver.scheme: unknown scheme '" + val + "'");
        } else if (key == "solver.interpolation") {
            if (val == "lagrange") cfg.interpolation = InterpKind::lagrange;
            else if (val == "spline") cfg.interpolation = InterpKind::spline;
            else throw config_error("solver.interpolation: unknown kind '" + val + "'");
        } else if (key == "solver.quadrature") {
            if (val == "trapezoid") cfg.quadrature = QuadratureRule::trapezoid;
            else if (val == "simpson") cfg.quadrature = QuadratureRule::simpson;
            else throw config_error("solver.quadrature: unknown rule '" + val + "'");
        } else if (key == "solver.reference_width") {
            cfg.reference_width = num_or_auto(val, key);
        } else if (key == "solver.deadband") {
            cfg.deadband = num_or_auto(val, key);
        } else if (key == "pic.particles") {
            cfg.pic_particles = static_cast<std::size_t>(num(val, key));
        } else if (key == "pic.kernel") {
            if (val == "linear") cfg.pic_kernel = DepositKernel::linear;
            else if (val == "quadratic") cfg.pic_kernel = DepositKernel::quadratic;
            else throw config_error("pic.kernel: unknown kernel '" + val + "'");
        } else if (key == "pic.lattice_x") {
            cfg.pic_lattice_x = num_or_auto(val, key);
        } else if (key == "pic.lattice_v") {
            cfg.pic_lattice_v = num_or_auto(val, key);
        } else if (key == "pic.corrector_iterations") {
            cfg.pic_iterations = static_cast<int>(num(val, key));
        } else if (key == "pic.jitter") {
            cfg.pic_jitter = num(val, key);
        } else if (key == "seed") {
            cfg.seed = static_cast<std::uint64_t>(num(val, key));
        } else if (key == "probes") {
            if (val == "auto") cfg.probes.clear();
            else cfg.probes = num_list(val, key);
        } else if (key == "snapshots.fractions") {
            cfg.snapshot_fractions = num_list(val, key);
        } else if (key == "thresholds.support_rel") {
            cfg.support_rel = num(val, key);
        } else if (key == "thresholds.qg_rel") {
            cfg.qg_rel = num(val, key);
        } else if (key == "thresholds.undershoot_rel") {
            cfg.undershoot_rel = num(val, key);
        } else if (key == "output.directory") {
            cfg.output_dir = val;
        } else if (key == "output.field_history") {
            cfg.field_history = flag(val, key);
        } else if (key == "output.f_snapshots") {
            cfg.f_snapshots = flag(val, key);
        } else if (key == "verify.freq_rel") {
            cfg.verify.freq_rel = num(val, key);
        } else if (key == "verify.amp_rel") {
            cfg.verify.amp_rel = num(val, key);
        } else if (key == "verify.sine_rel") {
            cfg.verify.sine_rel = num(val, key);
        } else if (key == "verify.thm1_rel") {
            cfg.verify.thm1_rel = num(val, key);
        } else if (key == "verify.thm2_dist_rel") {
            cfg.verify.thm2_dist_rel = num(val, key);
        } else if (key == "verify.tangent_tol") {
            cfg.verify.tangent_tol = num(val, key);
        } else if (key == "verify.lemma2_cells") {
            cfg.verify.lemma2_cells = num(val, key);
        } else if (key == "verify.charge_rel") {
            cfg.verify.charge_rel = num(val, key);
        } else if (key == "verify.antisym_rel") {
            cfg.verify.antisym_rel = num(val, key);
        } else if (key == "verify.compare_rel") {
            cfg.verify.compare_rel = num(val, key);
        } else if (key == "verify.anchors") {
            cfg.verify.anchors = static_cast<int>(num(val, key));
        } else if (key == "verify.convergence_lo") {
            cfg.verify.convergence_lo = num(val, key);
        } else if (key == "verify.convergence_hi") {
            cfg.verify.convergence_hi = num(val, key);
        } else {
            throw config_error("unknown key '" + key + "'");
        }
    }

    if (periods_set && time_set)
        throw config_error("give time.final_periods or time.final_time, not both");
    if (!periods_set && !time_set)
        throw config_error("missing required key: time.final_periods or time.final_time");
    if (dt_set && spp_set)
        throw config_error("give time.dt or time.steps_per_period, not both");

    // validation that does not need resolution
    if (cfg.epsilon <= -1.0)
        throw negativity_error("profile.epsilon <= -1 makes f0 negative");
    if (!(cfg.radius > 0.0)) throw config_error("profile.radius must be positive");
    if (cfg.amplitude < 0.0) throw config_error("profile.amplitude must be nonnegative");
    if (cfg.nx < 8 || cfg.nv < 8) throw config_error("grid.nx and grid.nv must be at least 8");
    if (periods_set && !(cfg.final_periods > 0.0) && cfg.final_periods != 0.0)
        throw config_error("time.final_periods must be nonnegative");
    if (time_set && cfg.final_time < 0.0)
        throw config_error("time.final_time must be nonnegative");
    if (dt_set && !(cfg.dt > 0.0)) throw config_error("time.dt must be positive");
    if (spp_set && !(cfg.steps_per_period > 0.0))
        throw config_error("time.steps_per_period must be positive");
    if (cfg.pic_iterations < 0) throw config_error("pic.corrector_iterations must be >= 0");
    if (cfg.pic_jitter < 0.0) throw config_error("pic.jitter must be nonnegative");
    for (double fr : cfg.snapshot_fractions)
        if (!(fr > 0.0) || fr > 1.0)
            throw config_error("snapshots.fractions must lie in (0, 1]");
    if (cfg.support_rel < 0 || cfg.qg_rel < 0 || cfg.undershoot_rel < 0)
        throw config_error("thresholds must be nonnegative");
    if (cfg.output_dir.empty()) throw config_error("output.directory must not be empty");
    return cfg;
}

RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open config file: " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double apriori_radius(const RunConfig& cfg, double E0, double omega, double t) {
    const double c1 = omega > 0.0 ? 1.3 * std::abs(E0) * (2.0 / M_PI) * t
                                  : std::abs(E0) * t;
    const double qf = cfg.amplitude > 0.0 ? 1.0 : 0.0; // quartic-bump support
    const double dbl = omega > 0.0 ? 1.3 * std::abs(E0) * (2.0 / M_PI) * 0.5 * t * t
                                   : std::abs(E0) * 0.5 * t * t;
    return cfg.radius + t * (qf + 0.75 * c1) + dbl;
}

ResolvedSetup resolve(const RunConfig& cfg_in) {
    ResolvedSetup s;
    s.config = cfg_in;
    RunConfig& cfg = s.config;

    s.profiles = build_standard_case(cfg.epsilon, cfg.radius, cfg.amplitude);
    const double qf = s.profiles.background.support;
    const double M0 = *s.profiles.background.moment;
    s.theory.omega = std::sqrt(M0);
    // E0 = -eps/2 * M0 * (16/15) * R for the quartic fixture
    s.theory.E0 = -cfg.epsilon * 0.5 * M0 * (16.0 / 15.0) * cfg.radius;
    s.theory.R = cfg.radius;
    const double omega = s.theory.omega;
    const double E0 = s.theory.E0;

    // time stepping
    if (cfg.final_time >= 0.0) {
        s.final_time = cfg.final_time;
    } else {
        if (!(omega > 0.0))
            throw config_error("time.final_periods needs a background with omega > 0");
        s.final_time = cfg.final_periods * 2.0 * M_PI / omega;
    }
    if (cfg.dt > 0.0) {
        s.dt = cfg.dt;
    } else {
        const double spp = cfg.steps_per_period > 0.0 ? cfg.steps_per_period : 200.0;
        if (!(omega > 0.0))
            throw config_error("time.steps_per_period needs omega > 0; give time.dt");
        s.dt = (2.0 * M_PI / omega) / spp;
    }
    s.steps = s.final_time > 0.0
                  ? static_cast<std::size_t>(std::llround(std::ceil(s.final_time / s.dt - 1e-9)))
                  : 0;
    s.final_time = static_cast<double>(s.steps) * s.dt;

    // a priori sizing
    const double T = s.final_time;
    s.c1_apriori = omega > 0.0 ? 1.3 * std::abs(E0) * (2.0 / M_PI) * T : std::abs(E0) * T;
    s.r_apriori = apriori_radius(cfg, E0, omega, T);

    double v_target = cfg.v_extent;
    if (v_target <= 0.0) {
        const double shift = omega > 0.0 ? 3.0 * std::abs(E0) / omega : 0.0;
        v_target = qf + std::max(shift, s.c1_apriori) + 0.1;
        if (!(v_target > 0.0)) v_target = 1.0;
    }
    s.vgrid = velocity_grid_aligned(qf, v_target, cfg.nv);

    if (cfg.probes.empty()) {
        const double p = 1.1 * s.r_apriori;
        s.probe_positions = {p, -p};
    } else {
        s.probe_positions = cfg.probes;
    }
    double x_target = cfg.x_extent;
    if (x_target <= 0.0) {
        x_target = cfg.radius + 2.0;
        for (double p : s.probe_positions) x_target = std::max(x_target, std::abs(p) + 2.0);
        x_target = std::max(x_target, s.r_apriori + 2.0);
    }
    s.xgrid = SpatialGrid(x_target, cfg.nx);
    for (double p : s.probe_positions)
        if (std::abs(p) > s.xgrid.extent)
            throw config_error("probe position outside the spatial grid");

    // snapshot times snapped to whole steps, deduplicated
    std::vector<std::size_t> snap_steps;
    for (double fr : cfg.snapshot_fractions) {
        const auto k = static_cast<std::size_t>(std::llround(fr * static_cast<double>(s.steps)));
        if (k >= 1 && k <= s.steps) snap_steps.push_back(k);
    }
    std::sort(snap_steps.begin(), snap_steps.end());
    snap_steps.erase(std::unique(snap_steps.begin(), snap_steps.end()), snap_steps.end());
    for (auto k : snap_steps) s.snapshot_times.push_back(static_cast<double>(k) * s.dt);

    // echo-ready resolved values
    cfg.x_extent = s.xgrid.extent;
    cfg.v_extent = s.vgrid.extent;
    cfg.final_time = s.final_time;
    cfg.final_periods = -1.0;
    cfg.dt = s.dt;
    cfg.steps_per_period = -1.0;
    cfg.probes = s.probe_positions;
    if (cfg.reference_width <= 0.0)
        cfg.reference_width = std::max(0.5 * cfg.radius, 4.0 * s.xgrid.spacing());
    if (cfg.deadband < 0.0) {
        const double dv = s.vgrid.spacing();
        cfg.deadband = 0.03 * s.profiles.background.curvature_scale * dv * dv;
    }
    if (cfg.pic_lattice_v <= 0.0) cfg.pic_lattice_v = qf + s.c1_apriori + 0.1;
    if (cfg.pic_lattice_x <= 0.0)
        cfg.pic_lattice_x = std::min(cfg.radius + T * cfg.pic_lattice_v + 0.5, s.xgrid.extent);
    return s;
}

std::string echo_config(const ResolvedSetup& s) {
    const RunConfig& c = s.config;
    std::ostringstream out;
    auto kv = [&out](const char* key, const std::string& val) {
        out << key << " = " << val << "\n";
    };
    auto kvn = [&out](const char* key, double val) {
        out << key << " = " << number_string(val) << "\n";
    };
    out << "# resolved configuration (reparseable)\n";
    kv("profile.name", c.profile_name);
    kvn("profile.epsilon", c.epsilon);
    kvn("profile.radius", c.radius);
    kvn("profile.amplitude", c.amplitude);
    kvn("grid.nx", static_cast<double>(c.nx));
    kvn("grid.nv", static_cast<double>(c.nv));
    kvn("grid.x_extent", c.x_extent);
    kvn("grid.v_extent", c.v_extent);
    kvn("time.final_time", c.final_time);
    kvn("time.dt", c.dt);
    kv("solver.scheme", c.scheme == Scheme::semilagrangian ? "semilagrangian"
                        : c.scheme == Scheme::deltaf_pic   ? "deltaf-pic"
                                                           : "both");
    kv("solver.interpolation", c.interpolation == InterpKind::spline ? "spline" : "lagrange");
    kv("solver.quadrature",
       c.quadrature == QuadratureRule::simpson ? "simpson" : "trapezoid");
    kvn("solver.reference_width", c.reference_width);
    kvn("solver.deadband", c.deadband);
    kvn("pic.particles", static_cast<double>(c.pic_particles));
    kv("pic.kernel", c.pic_kernel == DepositKernel::linear ? "linear" : "quadratic");
    kvn("pic.lattice_x", c.pic_lattice_x);
    kvn("pic.lattice_v", c.pic_lattice_v);
    kvn("pic.corrector_iterations", c.pic_iterations);
    kvn("pic.jitter", c.pic_jitter);
    kvn("seed", static_cast<double>(c.seed));
    {
        std::string plist;
        for (std::size_t i = 0; i < c.probes.size(); ++i) {
            if (i) plist += ", ";
            plist += number_string(c.probes[i]);
        }
        kv("probes", plist);
    }
    {
        std::string flist;
        for (std::size_t i = 0; i < c.snapshot_fractions.size(); ++i) {
            if (i) flist += ", ";
            flist += number_string(c.snapshot_fractions[i]);
        }
        kv("snapshots.fractions", flist);
    }
    kvn("thresholds.support_rel", c.support_rel);
    kvn("thresholds.qg_rel", c.qg_rel);
    kvn("thresholds.undershoot_rel", c.undershoot_rel);
    kv("output.directory", c.output_dir);
    kv("output.field_history", c.field_history ? "true" : "false");
    kv("output.f_snapshots", c.f_snapshots ? "true" : "false");
    kvn("verify.freq_rel", c.verify.freq_rel);
    kvn("verify.amp_rel", c.verify.amp_rel);
    kvn("verify.sine_rel", c.verify.sine_rel);
    kvn("verify.thm1_rel", c.verify.thm1_rel);
    kvn("verify.thm2_dist_rel", c.verify.thm2_dist_rel);
    kvn("verify.tangent_tol", c.verify.tangent_tol);
    kvn("verify.lemma2_cells", c.verify.lemma2_cells);
    kvn("verify.charge_rel", c.verify.charge_rel);
    kvn("verify.antisym_rel", c.verify.antisym_rel);
    kvn("verify.compare_rel", c.verify.compare_rel);
    kvn("verify.anchors", c.verify.anchors);
    kvn("verify.convergence_lo", c.verify.convergence_lo);
    kvn("verify.convergence_hi", c.verify.convergence_hi);
    return out.str();
}

} // namespace vp1d
