#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rhlab/chain.hpp"

namespace rhlab {

struct DimensionEstimate {
    /// Exact product-space dimension when it fits in 64 bits.
    std::optional<std::uint64_t> exact;
    double log2 = 0.0;
};

/// 2^N Π_k (n_k + 1). `cutoffs` holds either one value for every mode or one per mode.
DimensionEstimate estimate_dimension(int n_ions, const std::vector<int>& cutoffs);

/// Smallest n with P(X > n) ≤ tail for X ~ Poisson(mean).
int poisson_cutoff(double mean, double tail);

struct ModeCutoff {
    double mode_freq = 0.0;
    double mean_occupation = 0.0;  // (√N g / δ_k)²
    /// Empty for a resonant mode (δ_k = 0), which needs a manual cutoff.
    std::optional<int> cutoff;
};

/// Poisson-tail cutoffs for the collective modes of `model`, with mean
/// occupations from the displacement heuristic n̄_k = (√N g / δ_k)².
std::vector<ModeCutoff> suggest_cutoffs(const RHModel& model, double target_error = 1e-3);

}  // namespace rhlab
