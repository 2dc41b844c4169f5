#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "vp1d/errors.hpp"

namespace vp1d {

/// Per-step diagnostics of a run, one entry per recorded step (including
/// t = 0). Written to and read from series.csv column-for-column.
struct RunSeries {
    std::vector<double> t;
    std::vector<double> e_probe_pos; // E at the +probe
    std::vector<double> e_probe_neg; // E at the -probe
    std::vector<double> e_inf;       // ||E||inf
    std::vector<double> rho_inf;     // ||rho||inf
    std::vector<double> total_charge;
    std::vector<double> e_left_end;
    std::vector<double> e_right_end;
    std::vector<double> l_sup;
    std::vector<double> qg;
    std::vector<double> r_t;
    std::vector<double> c1;
    std::vector<double> gamma;
    std::vector<double> continuity_res; // spatial RMS of the residual vs previous step
    std::vector<double> clipped_mass;

    std::size_t size() const { return t.size(); }

    void check_consistent() const {
        const std::size_t n = t.size();
        auto chk = [n](const std::vector<double>& c, const char* name) {
            if (c.size() != n)
                throw shape_error(std::string("series column ") + name + " has wrong length");
        };
        chk(e_probe_pos, "E_probe_pos");
        chk(e_probe_neg, "E_probe_neg");
        chk(e_inf, "E_inf");
        chk(rho_inf, "rho_inf");
        chk(total_charge, "total_charge");
        chk(e_left_end, "E_left_end");
        chk(e_right_end, "E_right_end");
        chk(l_sup, "L_sup");
        chk(qg, "Q_g");
        chk(r_t, "R_t");
        chk(c1, "C1");
        chk(gamma, "gamma");
        chk(continuity_res, "continuity_res");
        chk(clipped_mass, "clipped_mass");
    }
};

} // namespace vp1d
