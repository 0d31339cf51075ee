#include "rhlab/estimate.hpp"

#include <cmath>
#include <limits>

#include "rhlab/error.hpp"

namespace rhlab {

DimensionEstimate estimate_dimension(int n_ions, const std::vector<int>& cutoffs) {
    if (n_ions < 1) throw DomainError("dimension estimate needs at least one ion");
    if (cutoffs.size() != 1 && cutoffs.size() != static_cast<std::size_t>(n_ions))
        throw DomainError("give one phonon cutoff or one per mode (" + std::to_string(n_ions) + ")");

    DimensionEstimate est;
    est.log2 = n_ions;
    std::uint64_t exact = std::uint64_t{1} << std::min(n_ions, 63);
    bool fits = n_ions < 64;
    for (int k = 0; k < n_ions; ++k) {
        const int c = cutoffs.size() == 1 ? cutoffs[0] : cutoffs[static_cast<std::size_t>(k)];
        if (c < 0) throw DomainError("phonon cutoffs must be nonnegative");
        const auto levels = static_cast<std::uint64_t>(c) + 1;
        est.log2 += std::log2(static_cast<double>(levels));
        if (fits && exact > std::numeric_limits<std::uint64_t>::max() / levels) fits = false;
        if (fits) exact *= levels;
    }
    if (fits) est.exact = exact;
    return est;
}

int poisson_cutoff(double mean, double tail) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("Poisson mean must be finite and nonnegative");
    if (!(tail > 0.0 && tail < 1.0)) throw DomainError("tail probability must lie in (0, 1)");
    if (mean == 0.0) return 0;
    double cdf = 0.0;
    for (int n = 0;; ++n) {
        cdf += std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
        if (1.0 - cdf <= tail) return n;
        if (n > 100 + 20 * mean) throw NumericalError("Poisson tail inversion did not terminate");
    }
}

std::vector<ModeCutoff> suggest_cutoffs(const RHModel& model, double target_error) {
    const ModeSpectrum spec = model.modes();
    const double n = model.n_sites();
    std::vector<ModeCutoff> out;
    for (int k = 0; k < spec.size(); ++k) {
        ModeCutoff m;
        m.mode_freq = spec.freqs[k];
        if (m.mode_freq == 0.0) {
            m.mean_occupation = model.coupling == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
            if (model.coupling == 0.0) m.cutoff = 0;
        } else {
            m.mean_occupation = n * model.coupling * model.coupling / (m.mode_freq * m.mode_freq);
            m.cutoff = poisson_cutoff(m.mean_occupation, target_error);
        }
        out.push_back(m);
    }
    return out;
}

}  // namespace rhlab
