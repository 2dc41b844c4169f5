#include "vp1d/artifacts.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "vp1d/csv.hpp"
#include "vp1d/errors.hpp"

namespace vp1d {

namespace fs = std::filesystem;

std::string time_tag(double t) {
    std::string s = number_string(t);
    return s;
}

namespace {

constexpr const char* kSeriesHeader =
    "step,t,E_probe_pos,E_probe_neg,E_inf,rho_inf,total_charge,E_left_end,E_right_end,"
    "L_sup,Q_g,R_t,C1,gamma,continuity_res,clipped_mass";

void write_series(const fs::path& file, const RunSeries& s) {
    std::ofstream out(file);
    out << kSeriesHeader << "\n";
    for (std::size_t k = 0; k < s.size(); ++k) {
        out << k;
        const double row[] = {s.t[k],         s.e_probe_pos[k], s.e_probe_neg[k],
                              s.e_inf[k],     s.rho_inf[k],     s.total_charge[k],
                              s.e_left_end[k], s.e_right_end[k], s.l_sup[k],
                              s.qg[k],        s.r_t[k],         s.c1[k],
                              s.gamma[k],     s.continuity_res[k], s.clipped_mass[k]};
        for (double v : row) {
            out << ',';
            csv_number(out, v);
        }
        out << '\n';
    }
}

RunSeries read_series(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("missing series.csv in " + file.parent_path().string());
    std::string line;
    if (!std::getline(in, line) || line.rfind(kSeriesHeader, 0) != 0)
        throw config_error("series.csv: unexpected header");
    RunSeries s;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 16) throw config_error("series.csv: expected 16 columns");
        s.t.push_back(parse_double(cells[1]));
        s.e_probe_pos.push_back(parse_double(cells[2]));
        s.e_probe_neg.push_back(parse_double(cells[3]));
        s.e_inf.push_back(parse_double(cells[4]));
        s.rho_inf.push_back(parse_double(cells[5]));
        s.total_charge.push_back(parse_double(cells[6]));
        s.e_left_end.push_back(parse_double(cells[7]));
        s.e_right_end.push_back(parse_double(cells[8]));
        s.l_sup.push_back(parse_double(cells[9]));
        s.qg.push_back(parse_double(cells[10]));
        s.r_t.push_back(parse_double(cells[11]));
        s.c1.push_back(parse_double(cells[12]));
        s.gamma.push_back(parse_double(cells[13]));
        s.continuity_res.push_back(parse_double(cells[14]));
        s.clipped_mass.push_back(parse_double(cells[15]));
    }
    s.check_consistent();
    return s;
}

void write_theory(const fs::path& file, const RunArtifacts& art) {
    std::ofstream out(file);
    out << "t,E_theory,gamma_theory,R_t,C1,lemma1_bound\n";
    const auto& s = art.series;
    const double E0 = art.setup.theory.E0;
    const double om = art.setup.theory.omega;
    const double dv = art.setup.vgrid.spacing();
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double t = s.t[k];
        csv_number(out, t);
        out << ',';
        csv_number(out, E0 * std::cos(om * t));
        out << ',';
        csv_number(out, om > 0.0 ? E0 / om * std::sin(om * t) : 0.0);
        out << ',';
        csv_number(out, s.r_t[k]);
        out << ',';
        csv_number(out, s.c1[k]);
        out << ',';
        csv_number(out, s.qg.front() + s.c1[k] + dv);
        out << '\n';
    }
}

void write_f_snapshot(const fs::path& file, const PhaseSpaceState& st) {
    std::ofstream out(file);
    out << "x";
    for (std::size_t j = 0; j < st.vgrid.nodes; ++j) {
        out << ',';
        csv_number(out, st.vgrid.node(j));
    }
    out << '\n';
    for (std::size_t i = 0; i < st.xgrid.nodes; ++i) {
        csv_number(out, st.xgrid.node(i));
        for (std::size_t j = 0; j < st.vgrid.nodes; ++j) {
            out << ',';
            csv_number(out, st.f[j * st.xgrid.nodes + i]);
        }
        out << '\n';
    }
}

PhaseSpaceState read_f_snapshot(const fs::path& file, double time) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty snapshot " + file.string());
    auto head = split_csv_line(line);
    if (head.size() < 9 || head[0] != "x")
        throw config_error("snapshot header must start with x");
    std::vector<double> vs;
    for (std::size_t c = 1; c < head.size(); ++c) vs.push_back(parse_double(head[c]));

    std::vector<double> xs;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != head.size())
            throw config_error("snapshot row width mismatch in " + file.string());
        xs.push_back(parse_double(cells[0]));
        std::vector<double> r(vs.size());
        for (std::size_t c = 0; c < vs.size(); ++c) r[c] = parse_double(cells[c + 1]);
        rows.push_back(std::move(r));
    }
    PhaseSpaceState st;
    st.time = time;
    st.xgrid = SpatialGrid(std::abs(xs.back()), xs.size());
    st.vgrid = VelocityGrid(std::abs(vs.back()), vs.size());
    st.f.resize(xs.size() * vs.size());
    for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t j = 0; j < vs.size(); ++j) st.f[j * xs.size() + i] = rows[i][j];
    return st;
}

void write_history(const fs::path& file, const std::vector<FieldState>& hist) {
    std::ofstream out(file);
    out << "t,x,rho,E,j\n";
    for (const auto& fsnap : hist) {
        for (std::size_t i = 0; i < fsnap.grid.nodes; ++i) {
            csv_number(out, fsnap.time);
            out << ',';
            csv_number(out, fsnap.grid.node(i));
            out << ',';
            csv_number(out, fsnap.rho[i]);
            out << ',';
            csv_number(out, fsnap.E[i]);
            out << ',';
            csv_number(out, fsnap.j[i]);
            out << '\n';
        }
    }
}

std::vector<FieldState> read_history(const fs::path& file) {
    std::ifstream in(file);
    if (!in) return {};
    std::string line;
    if (!std::getline(in, line) || line.rfind("t,x,rho,E,j", 0) != 0)
        throw config_error("fields_history.csv: unexpected header");
    std::vector<FieldState> hist;
    std::vector<double> xs;
    double cur_t = 0.0;
    bool have = false;
    FieldState snap;
    auto flush = [&]() {
        if (!have) return;
        snap.grid = SpatialGrid(std::abs(xs.back()), xs.size());
        snap.time = cur_t;
        hist.push_back(std::move(snap));
        snap = FieldState{};
        xs.clear();
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv_line(line);
        if (cells.size() != 5) throw config_error("fields_history.csv: expected 5 columns");
        const double t = parse_double(cells[0]);
        if (!have || t != cur_t) {
            flush();
            cur_t = t;
            have = true;
        }
        xs.push_back(parse_double(cells[1]));
        snap.rho.push_back(parse_double(cells[2]));
        snap.E.push_back(parse_double(cells[3]));
        snap.j.push_back(parse_double(cells[4]));
    }
    flush();
    return hist;
}

} // namespace

void write_artifacts(const RunArtifacts& art) {
    fs::create_directories(art.dir);
    {
        std::ofstream echo(art.dir / "config.echo");
        echo << echo_config(art.setup);
    }
    write_series(art.dir / "series.csv", art.series);
    write_theory(art.dir / "theory.csv", art);
    for (const auto& fsnap : art.field_snapshots) {
        std::ofstream out(art.dir / ("field_t" + time_tag(fsnap.time) + ".csv"));
        write_field_csv(out, fsnap);
    }
    for (const auto& st : art.f_snapshots)
        write_f_snapshot(art.dir / ("snapshot_t" + time_tag(st.time) + ".csv"), st);
    if (!art.field_history.empty())
        write_history(art.dir / "fields_history.csv", art.field_history);
    if (art.failed) {
        std::ofstream marker(art.dir / "FAILED");
        marker << art.failure << "\n";
    } else {
        std::error_code ec;
        fs::remove(art.dir / "FAILED", ec);
    }
}

RunArtifacts read_artifacts(const fs::path& dir, const ReadOptions& opts) {
    RunArtifacts art;
    art.dir = dir;
    if (!fs::exists(dir / "config.echo"))
        throw config_error("not an artifacts directory (missing config.echo): " + dir.string());
    art.setup = resolve(load_config(dir / "config.echo"));
    if (opts.series) art.series = read_series(dir / "series.csv");
    if (fs::exists(dir / "FAILED")) {
        art.failed = true;
        std::ifstream in(dir / "FAILED");
        std::getline(in, art.failure);
    }

    auto parse_time_from = [](const std::string& name, const std::string& prefix)
        -> std::optional<double> {
        if (name.rfind(prefix, 0) != 0 || name.size() <= prefix.size() + 4) return std::nullopt;
        const std::string core = name.substr(prefix.size(), name.size() - prefix.size() - 4);
        try {
            return parse_double(core);
        } catch (const config_error&) {
            return std::nullopt;
        }
    };

    if (opts.snapshots || opts.f_snapshots) {
        std::vector<std::pair<double, fs::path>> fields, rasters;
        for (const auto& entry : fs::directory_iterator(dir)) {
            const std::string name = entry.path().filename().string();
            if (auto t = parse_time_from(name, "field_t")) fields.emplace_back(*t, entry.path());
            if (auto t = parse_time_from(name, "snapshot_t"))
                rasters.emplace_back(*t, entry.path());
        }
        std::sort(fields.begin(), fields.end());
        std::sort(rasters.begin(), rasters.end());
        if (opts.snapshots) {
            for (const auto& [t, p] : fields) {
                std::ifstream in(p);
                art.field_snapshots.push_back(read_field_csv(in, t));
            }
        }
        if (opts.f_snapshots) {
            for (const auto& [t, p] : rasters) art.f_snapshots.push_back(read_f_snapshot(p, t));
        }
    }
    if (opts.field_history) art.field_history = read_history(dir / "fields_history.csv");
    return art;
}

} // namespace vp1d
