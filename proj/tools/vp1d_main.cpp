#include <cmath>
#include <exception>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "vp1d/artifacts.hpp"
#include "vp1d/checks.hpp"
#include "vp1d/config.hpp"
#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"
#include "vp1d/run.hpp"

namespace fs = std::filesystem;
using namespace vp1d;

namespace {

int cmd_run(const std::string& config_path) {
    ResolvedSetup setup;
    try {
        setup = resolve(load_config(config_path));
    } catch (const std::exception& err) {
        std::cerr << "config error: " << err.what() << "\n";
        return 1;
    }
    try {
        const fs::path out = setup.config.output_dir;
        if (setup.config.scheme == Scheme::both) {
            run_simulation(setup, Scheme::semilagrangian, out / "semilagrangian");
            std::cout << "semi-Lagrangian artifacts: " << (out / "semilagrangian").string()
                      << "\n";
            run_simulation(setup, Scheme::deltaf_pic, out / "deltaf-pic");
            std::cout << "delta-f PIC artifacts:     " << (out / "deltaf-pic").string() << "\n";
        } else {
            run_simulation(setup, setup.config.scheme, out);
            std::cout << "artifacts: " << out.string() << "\n";
        }
    } catch (const std::exception& err) {
        std::cerr << "run failed: " << err.what() << "\n";
        return 2;
    }
    return 0;
}

int cmd_verify(const std::string& dir) {
    try {
        const auto art = read_artifacts(dir);
        const auto rep = verify_artifacts(art);
        write_report(art, rep);
        std::cout << format_report(rep, dir);
        return rep.all_pass() ? 0 : 1;
    } catch (const std::exception& err) {
        std::cerr << "verify failed: " << err.what() << "\n";
        return 1;
    }
}

int cmd_compare(const std::string& dir_a, const std::string& dir_b, double tolerance) {
    try {
        ReadOptions ro;
        ro.f_snapshots = false;
        const auto a = read_artifacts(dir_a, ro);
        const auto b = read_artifacts(dir_b, ro);
        const double tol = tolerance > 0.0 ? tolerance : a.setup.config.verify.compare_rel;
        const auto rep = compare_runs(a, b, tol);
        std::cout << "compare: " << dir_a << " vs " << dir_b << "\n"
                  << "rel_L2_rho_max: " << number_string(rep.max_rel_rho) << "\n"
                  << "rel_L2_E_max: " << number_string(rep.max_rel_E) << "\n"
                  << "tolerance: " << number_string(rep.tolerance) << "\n"
                  << "result: " << (rep.pass ? "PASS" : "FAIL") << "\n";
        return rep.pass ? 0 : 1;
    } catch (const std::exception& err) {
        std::cerr << "compare failed: " << err.what() << "\n";
        return 1;
    }
}

int cmd_theory(const std::string& config_path) {
    try {
        const auto setup = resolve(load_config(config_path));
        const auto& th = setup.theory;
        std::cout << "E0: " << number_string(th.E0) << "\n"
                  << "omega: " << number_string(th.omega) << "\n";
        if (th.omega > 0.0)
            std::cout << "period: " << number_string(2.0 * M_PI / th.omega) << "\n";
        std::cout << "R: " << number_string(th.R) << "\n"
                  << "final_time: " << number_string(setup.final_time) << "\n"
                  << "dt: " << number_string(setup.dt) << " (" << setup.steps << " steps)\n"
                  << "x_extent: " << number_string(setup.xgrid.extent) << " (nx "
                  << setup.xgrid.nodes << ")\n"
                  << "v_extent: " << number_string(setup.vgrid.extent) << " (nv "
                  << setup.vgrid.nodes << ")\n"
                  << "probes: " << number_string(setup.probe_positions[0]) << ", "
                  << number_string(setup.probe_positions[1]) << "\n"
                  << "c1_apriori: " << number_string(setup.c1_apriori) << "\n\n"
                  << "t,R_apriori,E_exterior\n";
        const int rows = 10;
        for (int k = 0; k <= rows; ++k) {
            const double t = setup.final_time * k / rows;
            std::cout << number_string(t) << ","
                      << number_string(apriori_radius(setup.config, th.E0, th.omega, t)) << ","
                      << number_string(th.E0 * std::cos(th.omega * t)) << "\n";
        }
        return 0;
    } catch (const std::exception& err) {
        std::cerr << "theory failed: " << err.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D-1V Vlasov-Poisson simulator with a fixed ion background.\n"
                 "Set VP1D_THREADS to parallelize the advection sweeps."};
    app.require_subcommand(1);

    std::string config_path, dir_a, dir_b;
    double tolerance = -1.0;

    auto* run = app.add_subcommand("run", "run a simulation from a config file");
    run->add_option("config", config_path, "configuration file")->required();

    auto* verify = app.add_subcommand("verify", "check an artifacts directory against theory");
    verify->add_option("dir", dir_a, "artifacts directory")->required();

    auto* compare = app.add_subcommand("compare", "relative L2 differences of two runs");
    compare->add_option("dirA", dir_a, "first artifacts directory")->required();
    compare->add_option("dirB", dir_b, "second artifacts directory")->required();
    compare->add_option("--tolerance", tolerance, "pass/fail tolerance (default: from dirA)");

    auto* theory = app.add_subcommand("theory", "print the closed-form constants and sizing");
    theory->add_option("config", config_path, "configuration file")->required();

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return cmd_run(config_path);
    if (verify->parsed()) return cmd_verify(dir_a);
    if (compare->parsed()) return cmd_compare(dir_a, dir_b, tolerance);
    if (theory->parsed()) return cmd_theory(config_path);
    return 1;
}
