#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "output.hpp"

namespace rhlab::cli {

/// Dispatch a configuration to its module pipeline.
RunBundle run(const RunConfig& config);

/// Canned desk-scale analogues of the reference figures.
const std::vector<std::string>& figure_ids();
RunBundle reproduce(const std::string& figure, std::uint64_t seed = 0);

/// Pair moments (σ_x, σ_y of both ions and the four two-body moments) at the
/// sample of a trajectory CSV closest to `time_us` (negative: last sample).
json moments_from_trajectory(const std::string& path, int i, int j, double time_us);

}  // namespace rhlab::cli
