#pragma once

// Brute-force reference implementations. They build operators from explicit
// Kronecker products in the unprojected product space and share no code
// with the library beyond its plain data types.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "rhlab/basis.hpp"
#include "rhlab/chain.hpp"

namespace oracle {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using cd = std::complex<double>;

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// Spin index 0 is up.
inline Mat sz() { return (Mat(2, 2) << 1, 0, 0, -1).finished(); }
inline Mat sx() { return (Mat(2, 2) << 0, 1, 1, 0).finished(); }
inline Mat annihilate(int cutoff) {
    Mat a = Mat::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return a;
}

// op acting on factor f of a product of factors with the given dims.
inline Mat embed(const std::vector<int>& dims, int f, const Mat& op) {
    Mat out = Mat::Identity(1, 1);
    for (int k = 0; k < static_cast<int>(dims.size()); ++k)
        out = kron(out, k == f ? op : Mat::Identity(dims[static_cast<std::size_t>(k)], dims[static_cast<std::size_t>(k)]));
    return out;
}

/// Local layout (s1, a1, s2, a2, ...).
inline Mat rh_local(const rhlab::RHModel& m, int cutoff) {
    const int n = m.n_sites();
    std::vector<int> dims;
    for (int i = 0; i < n; ++i) {
        dims.push_back(2);
        dims.push_back(cutoff + 1);
    }
    const Mat a = annihilate(cutoff);
    std::vector<Mat> ai;
    for (int i = 0; i < n; ++i) ai.push_back(embed(dims, 2 * i + 1, a));
    Mat h = Mat::Zero(ai[0].rows(), ai[0].cols());
    for (int i = 0; i < n; ++i) {
        const auto& b = ai[static_cast<std::size_t>(i)];
        h += 0.5 * m.spin_freq * embed(dims, 2 * i, sz());
        h += m.site_freqs[i] * b.transpose() * b;
        h += m.coupling * embed(dims, 2 * i, sx()) * (b + b.transpose());
        for (int j = i + 1; j < n; ++j) {
            const auto& c = ai[static_cast<std::size_t>(j)];
            h += m.hoppings(i, j) * (b.transpose() * c + c.transpose() * b);
        }
    }
    return h;
}

/// Collective layout (s1..sN, b1..bN) with δ_k, v_ik from diagonalizing diag(ω)+t.
inline Mat rh_collective(const rhlab::RHModel& m, const std::vector<int>& cutoffs) {
    const int n = m.n_sites();
    Mat mm = m.hoppings;
    mm.diagonal() = m.site_freqs;
    Eigen::SelfAdjointEigenSolver<Mat> es(mm);
    std::vector<int> dims(static_cast<std::size_t>(n), 2);
    for (int c : cutoffs) dims.push_back(c + 1);
    std::vector<Mat> bk;
    for (int k = 0; k < n; ++k) bk.push_back(embed(dims, n + k, annihilate(cutoffs[static_cast<std::size_t>(k)])));
    Mat h = Mat::Zero(bk[0].rows(), bk[0].cols());
    for (int k = 0; k < n; ++k) h += es.eigenvalues()[k] * bk[static_cast<std::size_t>(k)].transpose() * bk[static_cast<std::size_t>(k)];
    for (int i = 0; i < n; ++i) {
        h += 0.5 * m.spin_freq * embed(dims, i, sz());
        Mat x = Mat::Zero(h.rows(), h.cols());
        for (int k = 0; k < n; ++k) {
            const Mat& b = bk[static_cast<std::size_t>(k)];
            x += es.eigenvectors()(i, k) * (b + b.transpose());
        }
        h += m.coupling * embed(dims, i, sx()) * x;
    }
    return h;
}

/// Rows/columns of a full-space matrix that belong to the basis, in basis order.
inline Mat restrict(const Mat& full, const rhlab::FockBasis& basis) {
    const auto d = static_cast<Eigen::Index>(basis.size());
    Mat out(d, d);
    for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index c = 0; c < d; ++c)
            out(r, c) = full(static_cast<Eigen::Index>(basis.full_index(static_cast<std::size_t>(r))),
                             static_cast<Eigen::Index>(basis.full_index(static_cast<std::size_t>(c))));
    return out;
}

/// State amplitudes scattered into the unprojected product space.
inline CVec embed_state(const rhlab::QuantumState& psi) {
    CVec out = CVec::Zero(static_cast<Eigen::Index>(psi.basis->full_size()));
    for (std::size_t k = 0; k < psi.basis->size(); ++k)
        out[static_cast<Eigen::Index>(psi.basis->full_index(k))] = psi.amplitudes[static_cast<Eigen::Index>(k)];
    return out;
}

/// exp(−iHt)ψ through the spectral decomposition of a real symmetric H.
inline CVec expm_apply(const Mat& h, const CVec& psi, double t) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const CMat v = es.eigenvectors().cast<cd>();
    CVec c = v.adjoint() * psi;
    for (Eigen::Index k = 0; k < c.size(); ++k) c[k] *= std::exp(cd(0.0, -es.eigenvalues()[k] * t));
    return v * c;
}

/// Classical fourth-order Runge-Kutta with a fixed number of steps.
template <class V>
V rk4(const std::function<V(double, const V&)>& f, V y, double t0, double t1, int steps) {
    const double h = (t1 - t0) / steps;
    double t = t0;
    for (int s = 0; s < steps; ++s) {
        const V k1 = f(t, y);
        const V k2 = f(t + h / 2, V(y + h / 2 * k1));
        const V k3 = f(t + h / 2, V(y + h / 2 * k2));
        const V k4 = f(t + h, V(y + h * k3));
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
    }
    return y;
}

/// Von Neumann entropy (bits) of the first `left_dim` block of a bipartite pure state.
inline double entropy_bits(const CVec& psi, Eigen::Index left_dim) {
    const Eigen::Index right = psi.size() / left_dim;
    CMat m(left_dim, right);
    for (Eigen::Index a = 0; a < left_dim; ++a)
        for (Eigen::Index b = 0; b < right; ++b) m(a, b) = psi[a * right + b];
    const Eigen::VectorXd s = Eigen::JacobiSVD<CMat>(m).singularValues();
    double e = 0.0;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        const double p = s[k] * s[k];
        if (p > 1e-300) e -= p * std::log2(p);
    }
    return e;
}

}  // namespace oracle
