#include "rhlab/lanczos.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rhlab/error.hpp"

namespace rhlab {

namespace {

void project_out(Vec& w, const std::vector<Vec>& set) {
    for (const Vec& d : set) w -= d.dot(w) * d;
}

}  // namespace

Eigenpair lowest_eigenpair(const std::function<void(const Vec&, Vec&)>& apply, std::size_t dim,
                           const std::vector<Vec>& deflate, const LanczosOptions& options) {
    if (dim == 0) throw DomainError("eigenproblem of dimension zero");
    if (deflate.size() >= dim) throw DomainError("nothing left to solve after deflation");
    const auto n = static_cast<Eigen::Index>(dim);
    const int m_max = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(std::max(options.krylov_dim, 2)), dim - deflate.size()));

    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    Vec x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = normal(rng);
    project_out(x, deflate);
    project_out(x, deflate);
    x.normalize();

    Eigenpair out;
    Mat q(n, m_max);
    Vec w(n);
    std::vector<double> alpha, beta;
    for (int restart = 0; restart <= options.max_restarts; ++restart) {
        alpha.clear();
        beta.clear();
        q.col(0) = x;
        int m = 0;
        for (int j = 0; j < m_max; ++j) {
            apply(q.col(j), w);
            ++out.matvecs;
            alpha.push_back(q.col(j).dot(w));
            // Classical Gram-Schmidt, applied twice, against the whole basis.
            for (int pass = 0; pass < 2; ++pass) {
                w -= q.leftCols(j + 1) * (q.leftCols(j + 1).transpose() * w);
                project_out(w, deflate);
            }
            m = j + 1;
            const double b = w.norm();
            beta.push_back(b);
            if (j + 1 == m_max || b <= 1e-14 * std::max(1.0, std::abs(alpha.back()))) break;
            q.col(j + 1) = w / b;
        }

        Mat t = Mat::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[static_cast<std::size_t>(i)];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
        }
        Eigen::SelfAdjointEigenSolver<Mat> es(t);
        const Vec y = es.eigenvectors().col(0);
        const double scale = std::max({std::abs(es.eigenvalues()[0]), std::abs(es.eigenvalues()[m - 1]), 1e-300});
        x = q.leftCols(m) * y;
        project_out(x, deflate);
        x.normalize();

        // Explicit residual: cheap next to the Krylov build and immune to
        // loss of orthogonality.
        apply(x, w);
        ++out.matvecs;
        const double rq = x.dot(w);
        w -= rq * x;
        project_out(w, deflate);
        out.value = rq;
        out.residual = w.norm();
        if (out.residual <= options.tolerance * scale || m < m_max) {
            out.vector = x;
            return out;
        }
    }
    std::ostringstream os;
    os << "Lanczos did not converge after " << options.max_restarts << " restarts (residual " << out.residual
       << " rad/s)";
    throw NumericalError(os.str());
}

GroundStateResult ground_state(const HamiltonianOperator& h, const LanczosOptions& options) {
    const ModeSpectrum& modes = h.modes();
    if (!(modes.freqs.minCoeff() > 0.0)) {
        std::ostringstream os;
        os << "model is not in the equilibrium regime (lowest collective mode " << to_khz(modes.freqs.minCoeff())
           << " kHz x 2pi); its ground state is unbounded";
        throw DomainError(os.str());
    }
    const double g = h.coupling();
    auto apply = [&](const Vec& x, Vec& y) { h.apply(x, y, g); };

    GroundStateResult r;
    const Eigenpair e0 = lowest_eigenpair(apply, h.size(), {}, options);
    r.energy = e0.value;
    r.state = QuantumState{h.basis(), e0.vector.cast<std::complex<double>>(), 0.0};
    r.matvecs = e0.matvecs;
    if (options.n_states >= 2 && h.size() > 1) {
        LanczosOptions o = options;
        o.seed = options.seed + 1;
        const Eigenpair e1 = lowest_eigenpair(apply, h.size(), {e0.vector}, o);
        r.excited_energy = e1.value;
        r.excited_state = QuantumState{h.basis(), e1.vector.cast<std::complex<double>>(), 0.0};
        r.matvecs += e1.matvecs;
    }
    return r;
}

}  // namespace rhlab
