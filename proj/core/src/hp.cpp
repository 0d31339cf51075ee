#include "rhlab/hp.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "rhlab/error.hpp"

namespace rhlab {

namespace {
using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};
}  // namespace

LinearizedSystem build_A(const RHModel& model) {
    model.validate();
    const int n = model.n_sites();
    const double w0 = model.spin_freq;
    const double g = model.coupling;
    using L = LinearizedSystem;
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(4 * n, 4 * n);
    for (int i = 0; i < n; ++i) {
        // ds/dt = i[ω₀ s − g(a + a†)]
        a(L::s(i), L::s(i)) = kI * w0;
        a(L::s(i), L::b(i)) = -kI * g;
        a(L::s(i), L::b_dag(i)) = -kI * g;
        // ds†/dt = i[−ω₀ s† + g(a + a†)]
        a(L::s_dag(i), L::s_dag(i)) = -kI * w0;
        a(L::s_dag(i), L::b(i)) = kI * g;
        a(L::s_dag(i), L::b_dag(i)) = kI * g;
        // da/dt = i[−ω a − g(s + s†) − Σ t a_j]
        a(L::b(i), L::b(i)) = -kI * model.site_freqs[i];
        a(L::b(i), L::s(i)) = -kI * g;
        a(L::b(i), L::s_dag(i)) = -kI * g;
        // da†/dt = i[ω a† + g(s + s†) + Σ t a_j†]
        a(L::b_dag(i), L::b_dag(i)) = kI * model.site_freqs[i];
        a(L::b_dag(i), L::s(i)) = kI * g;
        a(L::b_dag(i), L::s_dag(i)) = kI * g;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            a(L::b(i), L::b(j)) = -kI * model.hoppings(i, j);
            a(L::b_dag(i), L::b_dag(j)) = kI * model.hoppings(i, j);
        }
    }
    return LinearizedSystem{std::move(a), model};
}

StabilityReport stability(const LinearizedSystem& sys) {
    StabilityReport r;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(sys.a, false);
    if (es.info() != Eigen::Success) throw NumericalError("eigenvalue solver failed on the linearized system");
    r.eigenvalues = es.eigenvalues();
    r.max_real_part = r.eigenvalues.size() ? r.eigenvalues.real().maxCoeff() : 0.0;
    r.tolerance = 1e-9 * sys.a.norm();
    r.stable = r.max_real_part <= r.tolerance;
    return r;
}

Propagation propagate(const LinearizedSystem& sys, double t) {
    if (t < 0.0) throw DomainError("propagation time must be nonnegative");
    Propagation p;
    const StabilityReport st = stability(sys);
    p.growth_exponent = std::max(0.0, st.max_real_part) * t;
    const Eigen::MatrixXcd at = sys.a * t;
    p.b = at.exp();
    if (!p.b.allFinite() || p.growth_exponent > 600.0) {
        std::ostringstream os;
        os << "linearized dynamics grow as exp(" << p.growth_exponent << ") by t = " << t
           << " s; propagator entries overflow or lose all precision";
        p.warnings.push_back(os.str());
    }
    return p;
}

double sigma_z_hp(const Eigen::MatrixXcd& b, int i) {
    using L = LinearizedSystem;
    const int n = static_cast<int>(b.rows() / 4);
    if (i < 0 || i >= n) throw DomainError("site index out of range");
    cd s = 0.0;
    for (int j = 0; j < n; ++j)
        s += b(L::s_dag(i), L::s(j)) * b(L::s(i), L::s_dag(j)) + b(L::s_dag(i), L::b(j)) * b(L::s(i), L::b_dag(j));
    return 1.0 - 2.0 * s.real();
}

double sigma_z_hp(const LinearizedSystem& sys, int i, double t) { return sigma_z_hp(propagate(sys, t).b, i); }

std::vector<std::vector<double>> sigma_z_hp_trajectory(const LinearizedSystem& sys, const std::vector<double>& times) {
    std::vector<std::vector<double>> out;
    for (double t : times) {
        const Eigen::MatrixXcd b = (sys.a * t).exp();
        std::vector<double> row;
        for (int i = 0; i < sys.n_sites(); ++i) row.push_back(sigma_z_hp(b, i));
        out.push_back(std::move(row));
    }
    return out;
}

double total_excitation(const Eigen::MatrixXcd& b) {
    using L = LinearizedSystem;
    const int n = static_cast<int>(b.rows() / 4);
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            total += (b(L::s_dag(i), L::s(j)) * b(L::s(i), L::s_dag(j)) + b(L::s_dag(i), L::b(j)) * b(L::s(i), L::b_dag(j))).real();
            total += (b(L::b_dag(i), L::s(j)) * b(L::b(i), L::s_dag(j)) + b(L::b_dag(i), L::b(j)) * b(L::b(i), L::b_dag(j))).real();
        }
    return total;
}

StabilityMap stability_map(const RHModel& base, const std::vector<double>& couplings,
                           const std::vector<double>& site_shifts) {
    StabilityMap m{site_shifts, couplings, {}, {}};
    for (double shift : site_shifts) {
        RHModel shifted = base;
        shifted.site_freqs.array() += shift;
        std::vector<bool> row;
        std::vector<double> re;
        for (double g : couplings) {
            const StabilityReport r = stability(build_A(shifted.with_coupling(g)));
            row.push_back(r.stable);
            re.push_back(r.max_real_part);
        }
        m.stable.push_back(std::move(row));
        m.max_real_part.push_back(std::move(re));
    }
    return m;
}

std::optional<double> instability_threshold(const RHModel& model, double g_lo, double g_hi, double tolerance) {
    auto stable_at = [&](double g) { return stability(build_A(model.with_coupling(g))).stable; };
    if (!(g_hi > g_lo) || !(tolerance > 0.0)) throw DomainError("invalid bisection bracket");
    if (!stable_at(g_lo) || stable_at(g_hi)) return std::nullopt;
    while (g_hi - g_lo > tolerance) {
        const double mid = 0.5 * (g_lo + g_hi);
        (stable_at(mid) ? g_lo : g_hi) = mid;
    }
    return g_hi;
}

}  // namespace rhlab
