#include "rhlab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "rhlab/error.hpp"

namespace rhlab {

namespace {

using cd = std::complex<double>;

// Hermitian Lanczos basis of the Krylov space spanned from psi.
struct KrylovSpace {
    Eigen::MatrixXcd q;
    Vec alpha;
    Vec beta;  // beta[j] couples q_j and q_{j+1}; the last entry is the residual norm
    int m = 0;
    bool exact = false;  // invariant subspace reached
};

KrylovSpace build_krylov(const CVec& psi, const HamiltonianOperator& h, double g, int m_max, long& matvecs) {
    const auto n = psi.size();
    m_max = static_cast<int>(std::min<Eigen::Index>(m_max, n));
    KrylovSpace k;
    k.q.resize(n, m_max);
    k.alpha.resize(m_max);
    k.beta.resize(m_max);
    const double nrm = psi.norm();
    k.q.col(0) = psi / nrm;
    CVec w(n);
    for (int j = 0; j < m_max; ++j) {
        h.apply(CVec(k.q.col(j)), w, g);
        ++matvecs;
        k.alpha[j] = k.q.col(j).dot(w).real();
        for (int pass = 0; pass < 2; ++pass) w -= k.q.leftCols(j + 1) * (k.q.leftCols(j + 1).adjoint() * w);
        const double b = w.norm();
        k.beta[j] = b;
        k.m = j + 1;
        const double scale = std::max(1.0, std::abs(k.alpha[j]));
        if (b <= 1e-13 * scale) {
            k.exact = true;
            break;
        }
        if (j + 1 < m_max) k.q.col(j + 1) = w / b;
    }
    return k;
}

}  // namespace

EvolveStats propagate_constant(CVec& psi, const HamiltonianOperator& h, double g, double dt, const EvolveOptions& options) {
    EvolveStats st;
    st.smallest_step = dt;
    if (dt < 0.0) throw DomainError("cannot propagate backwards in time");
    double remaining = dt;
    double next = dt;
    const double min_step = std::max(dt * options.min_step_fraction, 1e-300);
    while (remaining > 0.0) {
        const double before = psi.norm();
        if (before == 0.0) throw NumericalError("state vector vanished during evolution");
        const KrylovSpace k = build_krylov(psi, h, g, options.krylov_dim, st.matvecs);
        Mat t = Mat::Zero(k.m, k.m);
        for (int i = 0; i < k.m; ++i) {
            t(i, i) = k.alpha[i];
            if (i + 1 < k.m) t(i, i + 1) = t(i + 1, i) = k.beta[i];
        }
        // exp(−i h T) e₁ by scaling and squaring: the last component is tiny
        // for short steps and must keep relative accuracy to serve as the
        // error estimate.
        auto coefficients = [&](double step) {
            const Eigen::MatrixXcd e = (Eigen::MatrixXcd(t.cast<cd>() * cd(0.0, -step))).exp();
            return Eigen::VectorXcd(e.col(0));
        };

        double step = std::min(next, remaining);
        Eigen::VectorXcd c = coefficients(step);
        if (!k.exact) {
            while (before * k.beta[k.m - 1] * std::abs(c[k.m - 1]) > options.tolerance) {
                step *= 0.5;
                if (step < min_step) {
                    std::ostringstream os;
                    os << "Krylov step size underflow at " << step << " s (norm bound " << h.norm_bound(g)
                       << " rad/s, tolerance " << options.tolerance << ")";
                    throw NumericalError(os.str());
                }
                c = coefficients(step);
            }
        }
        psi = before * (k.q.leftCols(k.m) * c);
        st.max_norm_drift = std::max(st.max_norm_drift, std::abs(psi.norm() - before));
        st.smallest_step = std::min(st.smallest_step, step);
        ++st.steps;
        // Retry a slightly longer step next time when this one was capped.
        next = step == remaining ? next : 1.5 * step;
        remaining = (step >= remaining) ? 0.0 : remaining - step;
    }
    return st;
}

namespace {

void merge(EvolveStats& into, const EvolveStats& s) {
    into.steps += s.steps;
    into.matvecs += s.matvecs;
    into.max_norm_drift = std::max(into.max_norm_drift, s.max_norm_drift);
    if (s.steps > 0)
        into.smallest_step = into.smallest_step == 0.0 ? s.smallest_step : std::min(into.smallest_step, s.smallest_step);
}

// Fourth-order commutator-free Magnus step. H(g) is affine in g, so each
// exponent α₁H(g₁) + α₂H(g₂) is ½ H(2(α₁g₁ + α₂g₂)).
EvolveStats magnus_step(CVec& psi, const HamiltonianOperator& h, const CouplingSchedule& g, double t, double dt,
                        const EvolveOptions& options) {
    static const double a1 = (3.0 - 2.0 * std::sqrt(3.0)) / 12.0;
    static const double a2 = (3.0 + 2.0 * std::sqrt(3.0)) / 12.0;
    const double g1 = g(t + (0.5 - std::sqrt(3.0) / 6.0) * dt);
    const double g2 = g(t + (0.5 + std::sqrt(3.0) / 6.0) * dt);
    EvolveStats st;
    merge(st, propagate_constant(psi, h, 2.0 * (a2 * g1 + a1 * g2), 0.5 * dt, options));
    merge(st, propagate_constant(psi, h, 2.0 * (a1 * g1 + a2 * g2), 0.5 * dt, options));
    return st;
}

}  // namespace

EvolveStats evolve(QuantumState& psi, const HamiltonianOperator& h, const std::vector<double>& t_grid,
                   const Observer& observe, const CouplingSchedule& schedule, const EvolveOptions& options) {
    if (psi.basis != h.basis() && (!psi.basis || psi.basis->size() != h.size()))
        throw DomainError("state and Hamiltonian live in different bases");
    if (std::abs(psi.norm() - 1.0) > 1e-8) throw DomainError("initial state is not normalized");
    EvolveStats st;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double target = t_grid[k];
        if (target < psi.time || (k > 0 && target < t_grid[k - 1]))
            throw DomainError("time grid must ascend from the state's current time");
        const double span = target - psi.time;
        if (span > 0.0) {
            if (!schedule) {
                merge(st, propagate_constant(psi.amplitudes, h, h.coupling(), span, options));
            } else {
                const int n = std::max(1, static_cast<int>(std::ceil(span / options.max_magnus_step - 1e-9)));
                const double dt = span / n;
                for (int s = 0; s < n; ++s) merge(st, magnus_step(psi.amplitudes, h, schedule, psi.time + s * dt, dt, options));
            }
            psi.time = target;
        }
        if (observe) observe(psi);
    }
    return st;
}

}  // namespace rhlab
