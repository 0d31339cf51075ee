#include "rhlab/hamiltonian.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "rhlab/error.hpp"

namespace rhlab {

double SparseRows::row_abs_sum(std::size_t r) const {
    double s = 0.0;
    for (auto p = row_start[r]; p < row_start[r + 1]; ++p) s += std::abs(vals[static_cast<std::size_t>(p)]);
    return s;
}

namespace {

// Accumulates one row at a time, merging repeated columns.
class RowBuilder {
public:
    explicit RowBuilder(SparseRows& m) : m_(m) {}
    void add(std::int64_t col, double v) {
        if (col < 0 || v == 0.0) return;
        row_[static_cast<std::int32_t>(col)] += v;
    }
    void finish() {
        for (const auto& [c, v] : row_) {
            if (v == 0.0) continue;
            m_.cols.push_back(c);
            m_.vals.push_back(v);
        }
        m_.row_start.push_back(static_cast<std::int64_t>(m_.vals.size()));
        row_.clear();
    }

private:
    SparseRows& m_;
    std::map<std::int32_t, double> row_;
};

template <class V>
void multiply_add(const SparseRows& m, const V& x, V& y, double scale) {
    const auto rows = static_cast<std::int64_t>(m.rows());
    for (std::int64_t r = 0; r < rows; ++r) {
        typename V::Scalar acc(0);
        for (auto p = m.row_start[static_cast<std::size_t>(r)]; p < m.row_start[static_cast<std::size_t>(r) + 1]; ++p)
            acc += m.vals[static_cast<std::size_t>(p)] * x[m.cols[static_cast<std::size_t>(p)]];
        y[r] += scale * acc;
    }
}

double lookup(const SparseRows& m, std::size_t row, std::size_t col) {
    for (auto p = m.row_start[row]; p < m.row_start[row + 1]; ++p)
        if (static_cast<std::size_t>(m.cols[static_cast<std::size_t>(p)]) == col) return m.vals[static_cast<std::size_t>(p)];
    return 0.0;
}

}  // namespace

std::shared_ptr<const FockBasis> make_basis(const BasisSpec& spec, const ResourceBudget& budget) {
    return std::make_shared<const FockBasis>(spec, budget);
}

HamiltonianOperator::HamiltonianOperator(const RHModel& model, std::shared_ptr<const FockBasis> basis)
    : model_(model), basis_(std::move(basis)) {
    model_.validate();
    if (!basis_) throw DomainError("Hamiltonian needs a basis");
    const FockBasis& b = *basis_;
    const int n = model_.n_sites();
    if (b.n_ions() != n)
        throw DomainError("basis has " + std::to_string(b.n_ions()) + " ions but the model has " + std::to_string(n));
    if (b.size() > static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
        throw ResourceError("basis too large for 32-bit column indices");
    modes_ = model_.modes();
    const bool local = b.spec().representation == Representation::local_modes;

    RowBuilder h0(h0_);
    RowBuilder v(v_);
    for (std::size_t k = 0; k < b.size(); ++k) {
        const std::uint64_t s = b.full_index(k);

        double diag = 0.0;
        for (int i = 0; i < n; ++i) {
            diag += 0.5 * model_.spin_freq * b.spin(s, i);
            diag += (local ? model_.site_freqs[i] : modes_.freqs[i]) * b.occupation(s, i);
        }
        h0.add(static_cast<std::int64_t>(k), diag);

        if (local) {
            // a_i† a_j for every ordered pair covers both hopping directions.
            for (int i = 0; i < n; ++i) {
                const int ni = b.occupation(s, i);
                if (ni >= b.spec().cutoffs[static_cast<std::size_t>(i)]) continue;
                for (int j = 0; j < n; ++j) {
                    const int nj = b.occupation(s, j);
                    if (j == i || nj == 0 || model_.hoppings(i, j) == 0.0) continue;
                    const std::uint64_t target = s + b.stride(b.mode_factor(i)) - b.stride(b.mode_factor(j));
                    h0.add(b.index_of(target), model_.hoppings(i, j) * std::sqrt(double(nj) * (ni + 1)));
                }
            }
        }
        h0.finish();

        for (int i = 0; i < n; ++i) {
            const std::uint64_t sf = b.stride(b.spin_factor(i));
            const std::uint64_t flipped = b.spin(s, i) == 1 ? s + sf : s - sf;
            for (int m = 0; m < n; ++m) {
                const double weight = local ? (m == i ? 1.0 : 0.0) : modes_.vectors(i, m);
                if (weight == 0.0) continue;
                const int nm = b.occupation(flipped, m);
                const std::uint64_t mf = b.stride(b.mode_factor(m));
                if (nm > 0) v.add(b.index_of(flipped - mf), weight * std::sqrt(double(nm)));
                if (nm < b.spec().cutoffs[static_cast<std::size_t>(m)])
                    v.add(b.index_of(flipped + mf), weight * std::sqrt(double(nm + 1)));
            }
        }
        v.finish();
    }
}

void HamiltonianOperator::apply(const Vec& x, Vec& y, double g) const {
    y.setZero(x.size());
    multiply_add(h0_, x, y, 1.0);
    if (g != 0.0) multiply_add(v_, x, y, g);
}

void HamiltonianOperator::apply(const CVec& x, CVec& y, double g) const {
    y.setZero(x.size());
    multiply_add(h0_, x, y, 1.0);
    if (g != 0.0) multiply_add(v_, x, y, g);
}

double HamiltonianOperator::norm_bound(double g) const {
    double best = 0.0;
    for (std::size_t r = 0; r < h0_.rows(); ++r)
        best = std::max(best, h0_.row_abs_sum(r) + std::abs(g) * v_.row_abs_sum(r));
    return best;
}

double HamiltonianOperator::expectation(const QuantumState& psi, double g) const {
    CVec h;
    apply(psi.amplitudes, h, g);
    return psi.amplitudes.dot(h).real();
}

double HamiltonianOperator::element(std::size_t row, std::size_t col, double g) const {
    return lookup(h0_, row, col) + g * lookup(v_, row, col);
}

Mat HamiltonianOperator::dense(double g) const {
    const auto d = static_cast<Eigen::Index>(size());
    Mat h = Mat::Zero(d, d);
    for (std::size_t r = 0; r < size(); ++r) {
        for (auto p = h0_.row_start[r]; p < h0_.row_start[r + 1]; ++p)
            h(static_cast<Eigen::Index>(r), h0_.cols[static_cast<std::size_t>(p)]) += h0_.vals[static_cast<std::size_t>(p)];
        for (auto p = v_.row_start[r]; p < v_.row_start[r + 1]; ++p)
            h(static_cast<Eigen::Index>(r), v_.cols[static_cast<std::size_t>(p)]) += g * v_.vals[static_cast<std::size_t>(p)];
    }
    return h;
}

}  // namespace rhlab
