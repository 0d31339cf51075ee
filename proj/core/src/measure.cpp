#include "rhlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "rhlab/error.hpp"

namespace rhlab {

namespace {

struct Rotated {
    double si, sj, ss;
};

Rotated rotate(const SpinPairMoments& m, double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c * m.sx_i + s * m.sy_i, c * m.sx_j + s * m.sy_j, c * c * m.xx + c * s * (m.xy + m.yx) + s * s * m.yy};
}

}  // namespace

double rotated_correlation(const SpinPairMoments& m, double phi) {
    const Rotated r = rotate(m, phi);
    return r.ss - r.si * r.sj;
}

PhaseScan phase_scan(const SpinPairMoments& m, int i, int j, const std::vector<double>& phases) {
    PhaseScan scan{i, j, phases, {}};
    for (double phi : phases) scan.correlations.push_back(rotated_correlation(m, phi));
    return scan;
}

PhaseScan phase_scan(const QuantumState& psi, int i, int j, const std::vector<double>& phases) {
    if (psi.basis && std::abs(psi.norm() - 1.0) > 1e-8) throw DomainError("phase scan needs a normalized state");
    return phase_scan(spin_pair_moments(psi, i, j), i, j, phases);
}

std::vector<double> phase_grid(int n) {
    if (n < 1) throw DomainError("phase grid needs at least one point");
    std::vector<double> phases;
    for (int k = 0; k < n; ++k) phases.push_back(std::numbers::pi * k / n);
    return phases;
}

CorrelationFit fit_correlation(const PhaseScan& scan) {
    const auto n = static_cast<Eigen::Index>(scan.phases.size());
    if (scan.correlations.size() != scan.phases.size()) throw DomainError("phase scan has mismatched lengths");
    if (n < 5) throw DomainError("correlation fit needs at least 5 phase points");
    const auto [lo, hi] = std::minmax_element(scan.phases.begin(), scan.phases.end());
    if (*hi - *lo < std::numbers::pi * (n - 1) / n - 1e-12)
        throw DomainError("phase scan must cover a full period of cos(2 phi)");

    Mat design(n, 3);
    Vec y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double phi = scan.phases[static_cast<std::size_t>(k)];
        design(k, 0) = 1.0;
        design(k, 1) = std::cos(2.0 * phi);
        design(k, 2) = std::sin(2.0 * phi);
        y[k] = scan.correlations[static_cast<std::size_t>(k)];
    }
    const Vec coef = design.colPivHouseholderQr().solve(y);
    const double a = coef[0], b = coef[1], c = coef[2];

    CorrelationFit fit;
    const double half = std::hypot(b, c);
    const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
    fit.degenerate = half <= 1e-14 * scale;
    fit.amplitude = fit.degenerate ? 0.0 : 2.0 * half;
    fit.phase_offset = fit.degenerate ? 0.0 : 0.5 * std::atan2(-c, b);
    fit.offset = a - 0.5 * fit.amplitude;
    fit.residual = std::sqrt((design * coef - y).squaredNorm() / static_cast<double>(n));
    return fit;
}

PairDistribution pair_distribution(const SpinPairMoments& m, double phi) {
    const Rotated r = rotate(m, phi);
    PairDistribution p{};
    int k = 0;
    for (int s1 : {1, -1})
        for (int s2 : {1, -1}) p[static_cast<std::size_t>(k++)] = 0.25 * (1.0 + s1 * r.si + s2 * r.sj + s1 * s2 * r.ss);
    return p;
}

double distribution_correlation(const PairDistribution& p) {
    const double ss = p[0] - p[1] - p[2] + p[3];
    const double si = p[0] + p[1] - p[2] - p[3];
    const double sj = p[0] - p[1] + p[2] - p[3];
    return ss - si * sj;
}

double DetectionErrorModel::crosstalk_at(int distance) const {
    if (distance <= 1) return crosstalk;
    const auto k = static_cast<std::size_t>(distance - 2);
    return k < distant_crosstalk.size() ? distant_crosstalk[k] : 0.0;
}

void DetectionErrorModel::validate() const {
    auto check = [](double e, const char* what) {
        if (!(e >= 0.0 && e <= 0.5)) throw DomainError(std::string(what) + " must lie in [0, 0.5]");
    };
    check(crosstalk, "crosstalk probability");
    check(flip, "flip probability");
    for (double e : distant_crosstalk) check(e, "distant crosstalk probability");
}

PairDistribution apply_detection_errors(const PairDistribution& p, const DetectionErrorModel& model, int distance) {
    model.validate();
    double total = 0.0;
    for (double x : p) {
        if (!(x >= -1e-12) || !std::isfinite(x)) throw DomainError("outcome probabilities must be nonnegative");
        total += x;
    }
    if (std::abs(total - 1.0) > 1e-9) throw DomainError("outcome probabilities must sum to 1");

    const double ec = model.crosstalk_at(distance);
    PairDistribution q = p;
    q[0] += ec * (p[1] + p[2]);
    q[1] -= ec * p[1];
    q[2] -= ec * p[2];

    const double e = model.flip;
    PairDistribution r{};
    // Outcome index bits: 2 for ion i down, 1 for ion j down.
    for (int from = 0; from < 4; ++from)
        for (int to = 0; to < 4; ++to) {
            const int flips = ((from ^ to) & 1) + (((from ^ to) >> 1) & 1);
            const double w = flips == 0 ? (1 - e) * (1 - e) : flips == 1 ? e * (1 - e) : e * e;
            r[static_cast<std::size_t>(to)] += w * q[static_cast<std::size_t>(from)];
        }
    return r;
}

std::array<long, 4> sample_shots(const PairDistribution& p, long shots, std::uint64_t seed) {
    if (shots < 0) throw DomainError("shot count must be nonnegative");
    std::mt19937_64 rng(seed);
    std::discrete_distribution<int> dist({std::max(p[0], 0.0), std::max(p[1], 0.0), std::max(p[2], 0.0), std::max(p[3], 0.0)});
    std::array<long, 4> counts{};
    for (long s = 0; s < shots; ++s) ++counts[static_cast<std::size_t>(dist(rng))];
    return counts;
}

std::map<std::string, double> spin_distribution(const QuantumState& psi, double phi) {
    if (!psi.basis) throw DomainError("state has no basis");
    const FockBasis& b = *psi.basis;
    using cd = std::complex<double>;
    // Rotated amplitudes live on the full product space: σ_φ mixes parity sectors.
    std::vector<cd> full(b.full_size(), 0.0);
    for (std::size_t k = 0; k < b.size(); ++k) full[b.full_index(k)] = psi.amplitudes[static_cast<Eigen::Index>(k)];
    // |±_φ⟩ = (|↑⟩ ± e^{iφ}|↓⟩)/√2; digit 0 becomes "+" (reported as u).
    const cd phase = std::exp(cd(0.0, -phi));
    const double r = std::sqrt(0.5);
    for (int i = 0; i < b.n_ions(); ++i) {
        const std::uint64_t stride = b.stride(b.spin_factor(i));
        for (std::uint64_t s = 0; s < b.full_size(); ++s) {
            if (b.digit(s, b.spin_factor(i)) != 0) continue;
            const cd up = full[s];
            const cd dn = full[s + stride];
            full[s] = r * (up + phase * dn);
            full[s + stride] = r * (up - phase * dn);
        }
    }
    std::map<std::string, double> out;
    for (std::uint64_t s = 0; s < b.full_size(); ++s) {
        const double p = std::norm(full[s]);
        if (p == 0.0) continue;
        std::string key;
        for (int i = 0; i < b.n_ions(); ++i) key += b.spin(s, i) == 1 ? 'u' : 'd';
        out[key] += p;
    }
    return out;
}

std::map<std::string, long> sample_shots(const QuantumState& psi, double phi, long shots, std::uint64_t seed) {
    if (shots < 0) throw DomainError("shot count must be nonnegative");
    const auto dist = spin_distribution(psi, phi);
    std::vector<std::string> keys;
    std::vector<double> weights;
    for (const auto& [k, p] : dist) {
        keys.push_back(k);
        weights.push_back(p);
    }
    std::map<std::string, long> counts;
    if (keys.empty() || shots == 0) return counts;
    std::mt19937_64 rng(seed);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    for (long s = 0; s < shots; ++s) ++counts[keys[pick(rng)]];
    return counts;
}

PhaseScan sampled_phase_scan(const SpinPairMoments& m, int i, int j, const std::vector<double>& phases, long shots,
                             std::uint64_t seed, const DetectionErrorModel& errors) {
    if (shots < 1) throw DomainError("sampled scans need at least one shot per phase");
    PhaseScan scan{i, j, phases, {}};
    std::mt19937_64 seeder(seed);
    for (double phi : phases) {
        const PairDistribution p = apply_detection_errors(pair_distribution(m, phi), errors, std::abs(i - j));
        const auto counts = sample_shots(p, shots, seeder());
        PairDistribution f{};
        for (std::size_t k = 0; k < 4; ++k) f[k] = static_cast<double>(counts[k]) / static_cast<double>(shots);
        scan.correlations.push_back(distribution_correlation(f));
    }
    return scan;
}

}  // namespace rhlab
