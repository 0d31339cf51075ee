#include <doctest.h>

#include <cmath>

#include "rhlab/error.hpp"
#include "rhlab/hamiltonian.hpp"
#include "rhlab/hp.hpp"
#include "support/oracles.hpp"

using namespace rhlab;
using cd = std::complex<double>;

namespace {

RHModel single(double w0, double w, double g) {
    RHModel m;
    m.spin_freq = w0;
    m.site_freqs = Vec::Constant(1, w);
    m.hoppings = Mat::Zero(1, 1);
    return m.with_coupling(g);
}

RHModel pair_model(double g) {
    RHModel m;
    m.spin_freq = khz(10.0);
    m.site_freqs = Vec::Constant(2, khz(4.0));
    m.hoppings = power_law_hoppings(2, khz(1.5));
    return m.with_coupling(g);
}

}  // namespace

TEST_SUITE("hp") {
TEST_CASE("all-up start and the uncoupled limit") {
    const LinearizedSystem sys = build_A(pair_model(khz(1.0)));
    CHECK(sys.n_sites() == 2);
    CHECK(sigma_z_hp(sys, 0, 0.0) == 1.0);
    const LinearizedSystem free = build_A(pair_model(0.0));
    for (double t : {us(10), us(137), us(400)}) CHECK(sigma_z_hp(free, 1, t) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("propagator matches a Runge-Kutta solution of dB/dt = A B") {
    const LinearizedSystem sys = build_A(pair_model(khz(2.0)));
    const std::function<oracle::CMat(double, const oracle::CMat&)> f = [&](double, const oracle::CMat& b) {
        return oracle::CMat(sys.a * b);
    };
    const oracle::CMat ref = oracle::rk4(f, oracle::CMat(oracle::CMat::Identity(8, 8)), 0.0, us(200), 20000);
    const Propagation p = propagate(sys, us(200));
    CHECK((p.b - ref).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(p.warnings.empty());
}

TEST_CASE("HP occupation equals the quadratic boson model solved in a Fock basis") {
    // −ω₀ s†s + ω a†a + g(s + s†)(a + a†), vacuum start, σ_z = 1 − 2⟨s†s⟩.
    const double w0 = khz(10.0), w = khz(3.0), g = khz(0.6);
    const int cut = 10;
    const oracle::Mat a = oracle::annihilate(cut);
    const oracle::Mat id = oracle::Mat::Identity(cut + 1, cut + 1);
    const oracle::Mat s1 = oracle::kron(a, id), a1 = oracle::kron(id, a);
    const oracle::Mat h = -w0 * s1.transpose() * s1 + w * a1.transpose() * a1 +
                          g * (s1 + s1.transpose()) * (a1 + a1.transpose());
    oracle::CVec vac = oracle::CVec::Zero(h.rows());
    vac[0] = 1.0;
    const LinearizedSystem sys = build_A(single(w0, w, g));
    for (double t : {us(20), us(90), us(250)}) {
        const oracle::CVec psi = oracle::expm_apply(h, vac, t);
        const double occ = (psi.adjoint() * (s1.transpose() * s1).cast<cd>() * psi)(0, 0).real();
        CHECK(sigma_z_hp(sys, 0, t) == doctest::Approx(1.0 - 2.0 * occ).epsilon(1e-7));
    }
}

TEST_CASE("single-site instability threshold has a closed form") {
    const double w0 = khz(10.0), w = khz(3.0);
    const double expect = std::abs(w0 * w0 - w * w) / (4.0 * std::sqrt(w0 * w));
    const auto th = instability_threshold(single(w0, w, 0.0), 0.0, khz(20.0), 1e-6);
    REQUIRE(th);
    CHECK(*th == doctest::Approx(expect).epsilon(1e-8));
    CHECK(stability(build_A(single(w0, w, 0.9 * expect))).stable);
    CHECK_FALSE(stability(build_A(single(w0, w, 1.1 * expect))).stable);
    CHECK_FALSE(instability_threshold(single(w0, w, 0.0), 0.0, 0.5 * expect, 1e-3));
    CHECK_THROWS_AS(instability_threshold(single(w0, w, 0.0), 1.0, 0.0, 1e-3), DomainError);
}

TEST_CASE("stability map rows shift every site frequency") {
    const RHModel base = single(khz(10.0), khz(3.0), 0.0);
    const StabilityMap map = stability_map(base, {khz(0.5), khz(6.0)}, {0.0, khz(7.0)});
    REQUIRE(map.stable.size() == 2);
    CHECK(map.stable[0][0]);
    CHECK_FALSE(map.stable[0][1]);
    // ω = ω₀ makes the pair resonant and any coupling destabilizes it.
    CHECK_FALSE(map.stable[1][0]);
    CHECK(map.max_real_part[1][0] > 0.0);
}

TEST_CASE("unstable growth is reported") {
    const LinearizedSystem sys = build_A(single(khz(10.0), khz(3.0), khz(8.0)));
    const Propagation p = propagate(sys, ms(50));
    CHECK(p.growth_exponent > 600.0);
    CHECK_FALSE(p.warnings.empty());
    CHECK(total_excitation(propagate(sys, us(10)).b) > 0.0);
    CHECK_THROWS_AS(propagate(sys, -1.0), DomainError);
    CHECK_THROWS_AS(sigma_z_hp(propagate(sys, 0.0).b, 3), DomainError);
}
}
