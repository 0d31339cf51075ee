#include <doctest.h>

#include "rhlab/error.hpp"
#include "rhlab/hamiltonian.hpp"
#include "support/oracles.hpp"

using namespace rhlab;

namespace {

RHModel small_model(int n, double g) {
    RHModel m;
    m.spin_freq = khz(12.0);
    m.site_freqs = Vec::LinSpaced(n, khz(9.0), khz(5.0));
    m.hoppings = power_law_hoppings(n, khz(2.5));
    return m.with_coupling(g);
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("hamiltonian") {
TEST_CASE("basis sizes and parity sectors") {
    const auto full = make_basis(BasisSpec::local(3, 2));
    CHECK(full->size() == 216);
    CHECK(full->full_size() == 216);
    const auto even = make_basis(BasisSpec::local(3, 2, ParitySector::even));
    const auto odd = make_basis(BasisSpec::local(3, 2, ParitySector::odd));
    CHECK(even->size() + odd->size() == 216);
    for (std::size_t k = 0; k < even->size(); ++k) CHECK(even->parity(even->full_index(k)) == 1);
    for (std::size_t k = 0; k < odd->size(); ++k) CHECK(odd->parity(odd->full_index(k)) == -1);

    const auto coll = make_basis(BasisSpec::collective({3, 1}, ParitySector::even));
    CHECK(coll->full_size() == 4 * 4 * 2);
    CHECK(coll->size() == 16);
}

TEST_CASE("digits follow the documented layouts") {
    const auto b = make_basis(BasisSpec::local(2, 3));
    const std::uint64_t idx = b->product_index({1, -1}, {2, 3});
    // (s1, a1, s2, a2) with the last factor fastest, spin up = digit 0.
    CHECK(idx == ((0 * 4 + 2) * 2 + 1) * 4 + 3);
    CHECK(b->spin(idx, 0) == 1);
    CHECK(b->spin(idx, 1) == -1);
    CHECK(b->occupation(idx, 0) == 2);
    CHECK(b->occupation(idx, 1) == 3);
    CHECK(b->parity(idx) == -1 * 1 * -1);  // σz product −1, five phonons → −1

    const auto c = make_basis(BasisSpec::collective({2, 5}));
    const std::uint64_t ci = c->product_index({-1, 1}, {1, 4});
    CHECK(ci == ((1 * 2 + 0) * 3 + 1) * 6 + 4);
}

TEST_CASE("local Hamiltonian matches the Kronecker-product oracle") {
    SUBCASE("two sites, full space") {
        const RHModel m = small_model(2, khz(3.0));
        const auto b = make_basis(BasisSpec::local(2, 3));
        const Mat h = HamiltonianOperator(m, b).dense(m.coupling);
        CHECK(max_abs(h - oracle::restrict(oracle::rh_local(m, 3), *b)) < 1e-9);
    }
    SUBCASE("three sites, even sector") {
        const RHModel m = small_model(3, khz(4.5));
        const auto b = make_basis(BasisSpec::local(3, 2, ParitySector::even));
        const Mat h = HamiltonianOperator(m, b).dense(m.coupling);
        CHECK(max_abs(h - oracle::restrict(oracle::rh_local(m, 2), *b)) < 1e-9);
    }
}

TEST_CASE("collective Hamiltonian matches the Kronecker-product oracle") {
    const RHModel m = small_model(2, khz(2.0));
    const auto b = make_basis(BasisSpec::collective({4, 3}, ParitySector::odd));
    const Mat h = HamiltonianOperator(m, b).dense(m.coupling);
    // Mode vectors carry a sign convention; compare spectra, which do not depend on it.
    const Mat ref = oracle::restrict(oracle::rh_collective(m, {4, 3}), *b);
    Eigen::SelfAdjointEigenSolver<Mat> a(h), r(ref);
    CHECK((a.eigenvalues() - r.eigenvalues()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(max_abs(h - h.transpose()) == 0.0);
}

TEST_CASE("H(g) is linear in g and apply agrees with the dense matrix") {
    const RHModel m = small_model(2, khz(1.0));
    const auto b = make_basis(BasisSpec::local(2, 4, ParitySector::even));
    const HamiltonianOperator h(m, b);
    const Mat h0 = h.dense(0.0), h1 = h.dense(khz(1.0)), h3 = h.dense(khz(3.0));
    CHECK(max_abs(h3 - h0 - 3.0 * (h1 - h0)) < 1e-9);

    const Vec x = Vec::LinSpaced(static_cast<Eigen::Index>(b->size()), -1.0, 2.0);
    Vec y;
    h.apply(x, y, khz(3.0));
    CHECK((y - h3 * x).cwiseAbs().maxCoeff() < 1e-9);
    CVec xc = x.cast<std::complex<double>>() * std::complex<double>(0.3, -0.8);
    CVec yc;
    h.apply(xc, yc, khz(3.0));
    CHECK((yc - h3.cast<std::complex<double>>() * xc).cwiseAbs().maxCoeff() < 1e-9);

    Eigen::SelfAdjointEigenSolver<Mat> es(h3);
    CHECK(h.norm_bound(khz(3.0)) >= es.eigenvalues().cwiseAbs().maxCoeff());
    CHECK(h.element(3, 3, khz(3.0)) == doctest::Approx(h3(3, 3)));
}

TEST_CASE("single-site Rabi spectrum is converged at cutoff 40") {
    RHModel m;
    m.spin_freq = khz(10.0);
    m.site_freqs = Vec::Constant(1, khz(2.0));
    m.hoppings = Mat::Zero(1, 1);
    m.coupling = khz(3.0);
    const Mat h40 = HamiltonianOperator(m, make_basis(BasisSpec::local(1, 40, ParitySector::even))).dense(m.coupling);
    const Mat ref = oracle::restrict(oracle::rh_local(m, 60), *make_basis(BasisSpec::local(1, 60, ParitySector::even)));
    Eigen::SelfAdjointEigenSolver<Mat> a(h40), r(ref);
    for (int k = 0; k < 4; ++k) CHECK(a.eigenvalues()[k] == doctest::Approx(r.eigenvalues()[k]).epsilon(1e-10));
}

TEST_CASE("local and collective representations share the low spectrum") {
    const RHModel m = small_model(2, khz(1.5));
    const Mat hl = HamiltonianOperator(m, make_basis(BasisSpec::local(2, 14, ParitySector::even))).dense(m.coupling);
    const Mat hc =
        HamiltonianOperator(m, make_basis(BasisSpec::collective({14, 14}, ParitySector::even))).dense(m.coupling);
    Eigen::SelfAdjointEigenSolver<Mat> a(hl), c(hc);
    for (int k = 0; k < 3; ++k) CHECK(a.eigenvalues()[k] == doctest::Approx(c.eigenvalues()[k]).epsilon(1e-8));
}

TEST_CASE("oversized bases are refused before allocation") {
    ResourceBudget tiny;
    tiny.max_states = 100;
    CHECK_THROWS_AS(make_basis(BasisSpec::local(3, 4), tiny), ResourceError);
    ResourceBudget few_ions;
    few_ions.max_ions = 2;
    CHECK_THROWS_AS(make_basis(BasisSpec::local(3, 1), few_ions), ResourceError);
    CHECK_THROWS_AS(BasisSpec::local(2, -1).validate(), DomainError);
    CHECK_THROWS_AS((BasisSpec{2, Representation::collective_modes, {3}, ParitySector::even}.validate()), DomainError);
}

TEST_CASE("product states") {
    const auto b = make_basis(BasisSpec::local(2, 2, ParitySector::even));
    const QuantumState up = all_up(b);
    CHECK(up.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(all_down(make_basis(BasisSpec::local(3, 2, ParitySector::even))), DomainError);
}
}
