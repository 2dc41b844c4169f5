#pragma once

#include <filesystem>

#include "vp1d/artifacts.hpp"
#include "vp1d/config.hpp"

namespace vp1d {

/// Advance the configured solver to the final time, recording the per-step
/// series, snapshots and (optionally) the full field history, then write
/// the artifacts directory. On a numerical failure the partial artifacts
/// are written with a FAILED marker and the error is rethrown.
///
/// `scheme` must be semilagrangian or deltaf_pic; callers expand `both`.
RunArtifacts run_simulation(const ResolvedSetup& setup, Scheme scheme,
                            const std::filesystem::path& dir);

} // namespace vp1d
