#include "vp1d/checks.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "vp1d/characteristics.hpp"
#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/theory.hpp"

namespace vp1d {

namespace {

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

TheoryParams params_with_series(const RunArtifacts& art) {
    TheoryParams p = art.setup.theory;
    p.t = art.series.t;
    p.r_t = art.series.r_t;
    p.c1 = art.series.c1;
    p.qg = art.series.qg;
    return p;
}

} // namespace

VerifyReport verify_artifacts(const RunArtifacts& art) {
    VerifyReport rep;
    const auto& s = art.series;
    const auto& tol = art.setup.config.verify;
    if (s.size() == 0) throw insufficient_history_error("artifacts contain an empty series");
    const double E0 = art.setup.theory.E0;
    const double omega = art.setup.theory.omega;
    const double dx = art.setup.xgrid.spacing();
    const double dv = art.setup.vgrid.spacing();
    const double T = s.t.back();
    const double R_T = s.r_t.back();
    const double max_rho_run = *std::max_element(s.rho_inf.begin(), s.rho_inf.end());
    const double max_e_run = *std::max_element(s.e_inf.begin(), s.e_inf.end());
    const double maxF = art.setup.profiles.background(0.0);
    const auto params = params_with_series(art);

    auto add = [&](const std::string& name, double value, double threshold, bool pass,
                   std::string note = {}) {
        rep.checks.push_back({name, pass, value, threshold, std::move(note)});
    };
    auto add_le = [&](const std::string& name, double value, double threshold,
                      std::string note = {}) {
        add(name, value, threshold, value <= threshold, std::move(note));
    };

    rep.info.emplace_back("final_time", number_string(T));
    rep.info.emplace_back("E0", number_string(E0));
    rep.info.emplace_back("omega", number_string(omega));
    rep.info.emplace_back("R_final", number_string(R_T));
    rep.info.emplace_back("C1_final", number_string(s.c1.back()));
    rep.info.emplace_back("Qg_final", number_string(s.qg.back()));
    rep.info.emplace_back("max_E_inf", number_string(max_e_run));
    rep.info.emplace_back("max_rho_inf", number_string(max_rho_run));

    // probes must be exterior for the Theorem 2 checks to apply
    const double probe_pos = art.setup.probe_positions.at(0);
    const double probe_neg = art.setup.probe_positions.size() > 1
                                 ? art.setup.probe_positions[1]
                                 : -probe_pos;
    {
        const double closest = std::min(std::abs(probe_pos), std::abs(probe_neg));
        add("probe_exterior", closest, R_T + 2.0 * dx, closest > R_T + 2.0 * dx,
            "|probe| must exceed R(T)");
    }

    // Theorem 2: harmonic fit of the exterior field at both probes
    const double zero_floor = 1e-12 * (1.0 + maxF);
    FitReport fit_pos, fit_neg;
    bool fit_ok = true;
    try {
        fit_pos = theorem2_fit(s.t, s.e_probe_pos, probe_pos, params);
        fit_neg = theorem2_fit(s.t, s.e_probe_neg, probe_neg, params);
    } catch (const std::runtime_error& err) {
        fit_ok = false;
        add("thm2_fit", 0.0, 0.0, std::abs(E0) <= zero_floor, err.what());
    }
    if (fit_ok) {
        if (fit_pos.degenerate || fit_neg.degenerate) {
            add("thm2_degenerate_zero", std::abs(E0), zero_floor,
                std::abs(E0) <= zero_floor, "flat probe series");
        } else {
            add_le("thm2_freq_pos", std::abs(fit_pos.omega - omega) / omega, tol.freq_rel);
            add_le("thm2_freq_neg", std::abs(fit_neg.omega - omega) / omega, tol.freq_rel);
            add_le("thm2_amp_pos", std::abs(fit_pos.a - E0) / std::abs(E0), tol.amp_rel);
            add_le("thm2_amp_neg", std::abs(fit_neg.a + E0) / std::abs(E0), tol.amp_rel);
            add_le("thm2_sine_pos", std::abs(fit_pos.b) / std::abs(E0), tol.sine_rel);
            add_le("thm2_sine_neg", std::abs(fit_neg.b) / std::abs(E0), tol.sine_rel);
            add("thm2_sign_structure", fit_pos.a * fit_neg.a, 0.0,
                fit_pos.a * fit_neg.a < 0.0 && fit_pos.a * E0 > 0.0,
                "amplitudes must mirror sign(x)");
            rep.info.emplace_back("fit_omega_pos", number_string(fit_pos.omega));
            rep.info.emplace_back("fit_amp_pos", number_string(fit_pos.a));
            rep.info.emplace_back("fit_rms_pos", number_string(fit_pos.rms));
        }
    }

    // Theorem 2: shifted-background distribution at the probes
    if (!art.f_snapshots.empty()) {
        double worst = 0.0;
        std::string where;
        for (const auto& snap : art.f_snapshots) {
            if (snap.time <= 0.0) continue;
            for (int sgn : {+1, -1}) {
                const double xstar = sgn * 1.1 * R_T;
                if (std::abs(xstar) > snap.xgrid.extent) continue;
                const auto node = static_cast<std::size_t>(
                    std::llround(snap.xgrid.coord(xstar)));
                for (std::size_t j = 0; j < snap.vgrid.nodes; ++j) {
                    const double v = snap.vgrid.node(j);
                    const double fth = exterior_distribution(snap.time, xstar, v, params,
                                                             art.setup.profiles.background);
                    const double diff = std::abs(snap.at(node, j) - fth);
                    if (diff > worst) {
                        worst = diff;
                        where = "t=" + number_string(snap.time);
                    }
                }
            }
        }
        add_le("thm2_distribution", worst, tol.thm2_dist_rel * maxF, where);
    } else {
        add("thm2_distribution", 0.0, 0.0, true, "skipped: no f snapshots");
    }

    // Theorem 1: exterior charge density at every snapshot
    if (!art.field_snapshots.empty()) {
        const double thr = tol.thm1_rel * max_rho_run + 1e-16 * (1.0 + maxF);
        const auto t1 = theorem1_check(art.field_snapshots, params, thr);
        add("thm1_exterior_rho", t1.worst_value, thr, t1.ok,
            t1.ok ? "" : "worst at x=" + number_string(t1.worst_x) +
                             " t=" + number_string(t1.worst_time));
    } else {
        add("thm1_exterior_rho", 0.0, 0.0, true, "skipped: no field snapshots");
    }

    // Lemma 1
    {
        const auto l1 = lemma1_check(s, dv);
        add("lemma1_qg_bound", -l1.min_margin, 0.0, l1.ok,
            "margin " + number_string(l1.min_margin) + " at t=" +
                number_string(l1.worst_time));
    }

    // trajectory checks need the per-step field history
    if (art.field_history.size() >= 2 && T > 0.0) {
        const auto sampler = FieldSampler::from_states(art.field_history);
        SupportRadius radius(art.setup.theory.R, s.t, s.e_inf, s.qg);
        std::mt19937_64 rng(art.setup.config.seed ^ 0x9e3779b97f4a7c15ull);
        const double qgT = s.qg.back();
        const double xlo = R_T + 2.0 * dx;
        const double xhi = std::max(xlo + 2.0 * dx,
                                    std::min(1.3 * R_T, art.setup.xgrid.extent - 2.0 * dx));
        std::uniform_real_distribution<double> ux(xlo, xhi);
        std::uniform_real_distribution<double> uv(-qgT, qgT);
        std::uniform_int_distribution<int> usign(0, 1);

        double worst_tangent = 0.0;
        double worst_margin = 1e300;
        const int n_anchors = std::max(1, tol.anchors);
        TraceOptions topt;
        topt.dt = art.setup.dt;
        for (int a = 0; a < n_anchors; ++a) {
            CharacteristicPoint p;
            p.x = (usign(rng) ? 1.0 : -1.0) * ux(rng);
            p.v = uv(rng);
            p.s = T;
            std::vector<PathSample> path;
            const auto back = trace_with_tangent(p, sampler, 0.0, topt, &path);
            worst_tangent = std::max(worst_tangent, std::abs(back.dvdv - 1.0));
            const auto l2 = lemma2_monitor(path, [&](double t) { return radius(t); },
                                           tol.lemma2_cells * dx);
            worst_margin = std::min(worst_margin, l2.min_margin);
        }
        add_le("tangent_flatness", worst_tangent, tol.tangent_tol);
        add("lemma2_exterior_paths", worst_margin, -tol.lemma2_cells * dx,
            worst_margin >= -tol.lemma2_cells * dx,
            "min |X(s)| - R(s) over anchors");
    } else {
        add("tangent_flatness", 0.0, 0.0, true, "skipped: no field history");
        add("lemma2_exterior_paths", 0.0, 0.0, true, "skipped: no field history");
    }

    // conservation identities
    {
        double worst_roundoff = 0.0, worst_theory = 0.0, worst_antisym = 0.0, scale = 1.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            worst_roundoff = std::max(
                worst_roundoff, std::abs(s.total_charge[k] - 2.0 * s.e_right_end[k]));
            scale = std::max(scale, std::abs(s.total_charge[k]));
            worst_theory = std::max(worst_theory,
                                    std::abs(s.total_charge[k] -
                                             2.0 * E0 * std::cos(omega * s.t[k])));
            worst_antisym =
                std::max(worst_antisym, std::abs(s.e_left_end[k] + s.e_right_end[k]));
        }
        add_le("charge_equals_2E_right", worst_roundoff, 5e-15 * scale, "round-off identity");
        add_le("charge_matches_theory", worst_theory,
               tol.charge_rel * std::max(std::abs(2.0 * E0), 1e-10));
        add_le("field_antisymmetry", worst_antisym, tol.antisym_rel * max_e_run + 1e-14);
    }

    if (art.failed)
        add("run_completed", 0.0, 0.0, false, "FAILED marker present: " + art.failure);
    return rep;
}

std::string format_report(const VerifyReport& rep, const std::string& title) {
    std::ostringstream out;
    out << "report: " << title << "\n";
    for (const auto& [k, v] : rep.info) out << k << ": " << v << "\n";
    for (const auto& c : rep.checks) {
        out << "check " << c.name << ": " << (c.pass ? "PASS" : "FAIL")
            << " value " << number_string(c.value) << " threshold "
            << number_string(c.threshold);
        if (!c.note.empty()) out << " (" << c.note << ")";
        out << "\n";
    }
    out << "result: " << (rep.all_pass() ? "PASS" : "FAIL") << "\n";
    return out.str();
}

void write_report(const RunArtifacts& art, const VerifyReport& rep) {
    {
        std::ofstream out(art.dir / "verify_report.txt");
        out << format_report(rep, art.dir.string());
    }
    std::ofstream csv(art.dir / "verify_margins.csv");
    csv << "check,value,threshold,margin,pass\n";
    for (const auto& c : rep.checks) {
        csv << c.name << ',';
        csv_number(csv, c.value);
        csv << ',';
        csv_number(csv, c.threshold);
        csv << ',';
        csv_number(csv, c.threshold - c.value);
        csv << ',' << (c.pass ? 1 : 0) << '\n';
    }
}

CompareReport compare_runs(const RunArtifacts& a, const RunArtifacts& b, double tolerance) {
    if (!a.setup.xgrid.same_as(b.setup.xgrid))
        throw config_error("compare: runs use different spatial grids");
    if (a.field_history.empty() || b.field_history.empty())
        throw config_error("compare: both runs need fields_history.csv");
    if (a.field_history.size() != b.field_history.size())
        throw config_error("compare: runs recorded different step counts");

    double peak_rho = 0.0, peak_E = 0.0;
    for (const auto& f : a.field_history) {
        double sr = 0.0, se = 0.0;
        for (double r : f.rho) sr += r * r;
        for (double e : f.E) se += e * e;
        peak_rho = std::max(peak_rho, sr);
        peak_E = std::max(peak_E, se);
    }
    peak_rho = std::sqrt(peak_rho);
    peak_E = std::sqrt(peak_E);

    CompareReport rep;
    rep.tolerance = tolerance;
    for (std::size_t k = 0; k < a.field_history.size(); ++k) {
        const auto& fa = a.field_history[k];
        const auto& fb = b.field_history[k];
        if (std::abs(fa.time - fb.time) > 1e-9 * (1.0 + std::abs(fa.time)))
            throw config_error("compare: runs recorded different times");
        double dr = 0.0, de = 0.0;
        for (std::size_t i = 0; i < fa.rho.size(); ++i) {
            const double r = fa.rho[i] - fb.rho[i];
            const double e = fa.E[i] - fb.E[i];
            dr += r * r;
            de += e * e;
        }
        if (peak_rho > 0.0) rep.max_rel_rho = std::max(rep.max_rel_rho, std::sqrt(dr) / peak_rho);
        if (peak_E > 0.0) rep.max_rel_E = std::max(rep.max_rel_E, std::sqrt(de) / peak_E);
    }
    rep.pass = rep.max_rel_rho <= tolerance && rep.max_rel_E <= tolerance;
    return rep;
}

double residual_scalar_second_half(const RunSeries& series) {
    if (series.size() < 3) return 0.0;
    const double half = 0.5 * series.t.back();
    double worst = 0.0;
    for (std::size_t k = 1; k < series.size(); ++k)
        if (series.t[k] >= half) worst = std::max(worst, series.continuity_res[k]);
    return worst;
}

} // namespace vp1d
