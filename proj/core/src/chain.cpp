#include "rhlab/chain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "rhlab/error.hpp"

namespace rhlab {

std::vector<double> ChainGeometry::positions() const {
    std::vector<double> z(n_ions(), 0.0);
    for (std::size_t i = 0; i < spacings.size(); ++i) z[i + 1] = z[i] + spacings[i];
    return z;
}

double ChainGeometry::coulomb_constant() const {
    return charge * charge / (4.0 * std::numbers::pi * constants::vacuum_permittivity * mass);
}

namespace {

// Σ_{j≠i} 1/z_ij³ for every ion.
Vec inverse_cube_sums(const std::vector<double>& z) {
    const auto n = static_cast<int>(z.size());
    Vec s = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) s[i] += 1.0 / std::pow(std::abs(z[i] - z[j]), 3);
    return s;
}

}  // namespace

void ChainGeometry::validate() const {
    if (!(trap_freq > 0.0)) throw DomainError("trap frequency must be positive");
    if (!(mass > 0.0)) throw DomainError("ion mass must be positive");
    if (charge == 0.0) throw DomainError("ion charge must be nonzero");
    for (std::size_t i = 0; i < spacings.size(); ++i)
        if (!(spacings[i] > 0.0))
            throw DomainError("spacing " + std::to_string(i) + " must be positive");
    const Vec s = inverse_cube_sums(positions());
    const double k = coulomb_constant();
    for (int i = 0; i < n_ions(); ++i) {
        if (trap_freq * trap_freq - k * s[i] <= 0.0)
            throw ChainUnstable(i, "chain unstable: local frequency of ion " + std::to_string(i) +
                                       " is imaginary (Coulomb softening exceeds trap stiffness)");
    }
}

ChainGeometry ChainGeometry::uniform(int n_ions, double spacing, double trap_freq) {
    if (n_ions < 1) throw DomainError("n_ions must be at least 1");
    ChainGeometry g;
    g.spacings.assign(static_cast<std::size_t>(n_ions - 1), spacing);
    g.trap_freq = trap_freq;
    return g;
}

Mat MotionalModel::mode_matrix() const {
    Mat m = corrected_hoppings;
    m.diagonal() = corrected_freqs;
    return m;
}

MotionalModel motional_model(const ChainGeometry& geom) {
    geom.validate();
    const int n = geom.n_ions();
    const auto z = geom.positions();
    const double k = geom.coulomb_constant();
    const double wx = geom.trap_freq;

    MotionalModel m;
    m.trap_freq = wx;
    m.local_freqs = (wx * wx - k * inverse_cube_sums(z).array()).sqrt().matrix();

    m.hoppings = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) {
                const double d = std::abs(z[i] - z[j]);
                m.hoppings(i, j) = k / (2.0 * std::sqrt(m.local_freqs[i] * m.local_freqs[j]) * d * d * d);
            }

    // Counter-rotating terms, eliminated at second order; the bare ω_x sets
    // the energy denominator.
    m.corrected_freqs = m.local_freqs - m.hoppings.rowwise().squaredNorm() / (2.0 * wx);
    // The hopping diagonal is zero, so (t t)_ij already excludes k = i, j.
    m.corrected_hoppings = m.hoppings - (m.hoppings * m.hoppings) / (2.0 * wx);
    m.corrected_hoppings.diagonal().setZero();
    return m;
}

ModeSpectrum diagonalize_modes(const Mat& symmetric) {
    Eigen::SelfAdjointEigenSolver<Mat> solver(symmetric);
    if (solver.info() != Eigen::Success) throw NumericalError("mode eigensolver failed");
    ModeSpectrum s{solver.eigenvalues(), solver.eigenvectors()};
    for (int k = 0; k < s.vectors.cols(); ++k) {
        auto v = s.vectors.col(k);
        const double peak = v.cwiseAbs().maxCoeff();
        // First entry within rounding of the peak decides the sign, so
        // symmetric/antisymmetric pairs are stable across platforms.
        for (int i = 0; i < v.size(); ++i) {
            if (std::abs(v[i]) >= peak * (1.0 - 1e-9)) {
                if (v[i] < 0) v = -v;
                break;
            }
        }
    }
    return s;
}

ModeSpectrum collective_modes(const MotionalModel& m) { return diagonalize_modes(m.mode_matrix()); }

RHModel interaction_picture(const MotionalModel& m, double blue_detuning, double red_detuning) {
    RHModel r;
    r.spin_freq = 0.5 * (blue_detuning + red_detuning);
    r.site_freqs = m.corrected_freqs.array() - m.trap_freq + 0.5 * (blue_detuning - red_detuning);
    r.hoppings = m.corrected_hoppings;
    r.coupling = 0.0;
    return r;
}

double coupling_from_laser(double lamb_dicke, double rabi) {
    if (!(lamb_dicke > 0.0)) throw DomainError("Lamb-Dicke parameter must be positive");
    if (rabi < 0.0) throw DomainError("Rabi frequency must be nonnegative");
    return 0.5 * lamb_dicke * rabi;
}

double rabi_from_coupling(double coupling, double lamb_dicke) {
    if (!(lamb_dicke > 0.0)) throw DomainError("Lamb-Dicke parameter must be positive");
    return 2.0 * coupling / lamb_dicke;
}

Mat RHModel::mode_matrix() const {
    Mat m = hoppings;
    m.diagonal() = site_freqs;
    return m;
}

ModeSpectrum RHModel::modes() const { return diagonalize_modes(mode_matrix()); }

bool RHModel::equilibrium() const { return n_sites() > 0 && modes().freqs.minCoeff() > 0.0; }

RHModel RHModel::with_coupling(double g) const {
    RHModel r = *this;
    r.coupling = g;
    return r;
}

void RHModel::validate() const {
    const int n = n_sites();
    if (n < 1) throw DomainError("model needs at least one site");
    if (hoppings.rows() != n || hoppings.cols() != n)
        throw DomainError("hopping matrix must be " + std::to_string(n) + "x" + std::to_string(n));
    const double scale = std::max(1.0, hoppings.cwiseAbs().maxCoeff());
    for (int i = 0; i < n; ++i) {
        if (hoppings(i, i) != 0.0) throw DomainError("hopping matrix must have zero diagonal");
        for (int j = i + 1; j < n; ++j)
            if (std::abs(hoppings(i, j) - hoppings(j, i)) > 1e-12 * scale)
                throw DomainError("hopping matrix must be symmetric");
    }
}

Mat power_law_hoppings(int n_sites, double nearest, double exponent) {
    Mat t = Mat::Zero(n_sites, n_sites);
    for (int i = 0; i < n_sites; ++i)
        for (int j = 0; j < n_sites; ++j)
            if (i != j) t(i, j) = nearest / std::pow(std::abs(i - j), exponent);
    return t;
}

RHModel tune_lowest_mode(const RHModel& model, double lowest) {
    RHModel r = model;
    const double current = model.modes().freqs[0];
    r.site_freqs.array() += lowest - current;
    return r;
}

}  // namespace rhlab
