#pragma once

#include <string>
#include <vector>

#include "vp1d/artifacts.hpp"

namespace vp1d {

struct CheckResult {
    std::string name;
    bool pass = false;
    double value = 0.0;     // measured
    double threshold = 0.0; // pass bound on the measured value
    std::string note;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::vector<std::pair<std::string, std::string>> info;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

/// run every theory check the artifacts support, at the tolerances recorded
/// in the run's configuration
VerifyReport verify_artifacts(const RunArtifacts& art);

/// structured-text report (key: value lines)
std::string format_report(const VerifyReport& rep, const std::string& title);

/// verify_report.txt plus verify_margins.csv in the artifacts directory
void write_report(const RunArtifacts& art, const VerifyReport& rep);

struct CompareReport {
    bool pass = false;
    double max_rel_rho = 0.0;
    double max_rel_E = 0.0;
    double tolerance = 0.0;
};

/// relative L2 differences of the rho and E histories, normalized by the
/// first run's peak norm (rho passes through ~0 twice per period, so
/// per-instant normalization is ill-posed)
CompareReport compare_runs(const RunArtifacts& a, const RunArtifacts& b, double tolerance);

/// max spatial-RMS continuity residual over t >= T/2 (the first half holds
/// the C^1 initial-transient ringing; see the convergence criterion)
double residual_scalar_second_half(const RunSeries& series);

} // namespace vp1d
