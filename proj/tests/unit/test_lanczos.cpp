#include <doctest.h>

#include <random>

#include "rhlab/error.hpp"
#include "rhlab/lanczos.hpp"
#include "support/oracles.hpp"

using namespace rhlab;

namespace {

Mat random_symmetric(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> d;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = d(rng);
    return 0.5 * (a + a.transpose());
}

RHModel two_site(double g) {
    RHModel m;
    m.spin_freq = khz(28.0);
    m.site_freqs = Vec::Constant(2, khz(5.0));
    m.hoppings = power_law_hoppings(2, khz(3.0));
    return m.with_coupling(g);
}

}  // namespace

TEST_SUITE("lanczos") {
TEST_CASE("lowest eigenpair of a random symmetric matrix") {
    const Mat a = random_symmetric(300, 3);
    Eigen::SelfAdjointEigenSolver<Mat> es(a);
    auto apply = [&](const Vec& x, Vec& y) { y = a * x; };
    const Eigenpair p = lowest_eigenpair(apply, 300, {}, LanczosOptions{});
    CHECK(p.value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-10));
    CHECK(std::abs(p.vector.dot(es.eigenvectors().col(0))) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK((a * p.vector - p.value * p.vector).norm() <= 1e-8 * es.eigenvalues().cwiseAbs().maxCoeff());

    const Eigenpair q = lowest_eigenpair(apply, 300, {p.vector}, LanczosOptions{});
    CHECK(q.value == doctest::Approx(es.eigenvalues()[1]).epsilon(1e-9));
    CHECK(std::abs(q.vector.dot(p.vector)) < 1e-8);
}

TEST_CASE("ground state and gap agree with dense diagonalization") {
    for (double g : {khz(1.0), khz(6.0)}) {
        const RHModel m = two_site(g);
        const auto b = make_basis(BasisSpec::local(2, 8, ParitySector::even));
        const HamiltonianOperator h(m, b);
        const GroundStateResult r = ground_state(h);
        Eigen::SelfAdjointEigenSolver<Mat> es(oracle::restrict(oracle::rh_local(m, 8), *b));
        CAPTURE(g);
        CHECK(r.energy == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-9));
        REQUIRE(r.gap());
        CHECK(*r.gap() == doctest::Approx(es.eigenvalues()[1] - es.eigenvalues()[0]).epsilon(1e-6));
        CHECK(r.state.norm() == doctest::Approx(1.0));
        CHECK(h.expectation(r.state) == doctest::Approx(r.energy).epsilon(1e-10));
    }
}

TEST_CASE("same seed gives identical output") {
    const RHModel m = two_site(khz(4.0));
    const auto b = make_basis(BasisSpec::local(2, 6, ParitySector::even));
    const HamiltonianOperator h(m, b);
    LanczosOptions o;
    o.seed = 11;
    const GroundStateResult a = ground_state(h, o), c = ground_state(h, o);
    CHECK(a.energy == c.energy);
    CHECK(a.state.amplitudes == c.state.amplitudes);
}

TEST_CASE("models without a phonon ground state are refused") {
    RHModel m = two_site(khz(1.0));
    m.site_freqs.setConstant(-khz(5.0));
    const auto b = make_basis(BasisSpec::local(2, 3, ParitySector::even));
    CHECK_THROWS_AS(ground_state(HamiltonianOperator(m, b)), DomainError);
}
}
