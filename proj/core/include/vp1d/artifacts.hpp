#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "vp1d/config.hpp"
#include "vp1d/fields.hpp"
#include "vp1d/series.hpp"
#include "vp1d/state.hpp"

namespace vp1d {

/// Everything a run leaves behind. On disk:
///   series.csv            one row per step
///   theory.csv            closed-form predictions at the same times
///   config.echo           resolved configuration (reparseable)
///   snapshot_t<time>.csv  f raster, x rows by v columns
///   field_t<time>.csv     x, rho, E, j columns
///   fields_history.csv    per-step fields (optional, for trajectory checks)
///   FAILED                present only when the run aborted
struct RunArtifacts {
    std::filesystem::path dir;
    ResolvedSetup setup;
    RunSeries series;
    std::vector<FieldState> field_snapshots;
    std::vector<PhaseSpaceState> f_snapshots;
    std::vector<FieldState> field_history;
    bool failed = false;
    std::string failure;
};

void write_artifacts(const RunArtifacts& art);

struct ReadOptions {
    bool series = true;
    bool snapshots = true;
    bool f_snapshots = true;
    bool field_history = true;
};
RunArtifacts read_artifacts(const std::filesystem::path& dir, const ReadOptions& opts = {});

/// file-name tag for a snapshot time
std::string time_tag(double t);

} // namespace vp1d
