#include <doctest.h>

#include <cmath>

#include "rhlab/error.hpp"
#include "rhlab/hamiltonian.hpp"
#include "rhlab/quench.hpp"
#include "support/oracles.hpp"

using namespace rhlab;
using cd = std::complex<double>;

namespace {

RHModel one_site() {
    RHModel m;
    m.spin_freq = khz(8.0);
    m.site_freqs = Vec::Constant(1, khz(2.0));
    m.hoppings = Mat::Zero(1, 1);
    return m;
}

}  // namespace

TEST_SUITE("quench") {
TEST_CASE("schedule shapes") {
    const QuenchSchedule e = QuenchSchedule::exponential(2.0, 1e-3);
    CHECK(e.t_total == doctest::Approx(5e-3));
    CHECK(e(0.0) == 0.0);
    CHECK(e(1e-3) == doctest::Approx(2.0 * (1.0 - std::exp(-1.0))));
    CHECK(g_at(e, 1e-2) == doctest::Approx(2.0 * (1.0 - std::exp(-10.0))));

    const QuenchSchedule r = QuenchSchedule::reversed(2.0, 1e-3);
    CHECK(r.t_total == doctest::Approx(10e-3));
    for (double t : {0.0, 1e-3, 2.7e-3, 4.9e-3}) CHECK(r(t) == doctest::Approx(r(r.t_total - t)));
    CHECK(r(5e-3) == doctest::Approx(e(5e-3)));
    CHECK(r(r.t_total) == doctest::Approx(0.0).scale(1.0));

    const QuenchSchedule c = QuenchSchedule::constant(1.5, 2e-3);
    CHECK(c(0.0) == 1.5);
    CHECK(c(1e-3) == 1.5);

    CHECK(sample_times(e, 10).size() == 11);
    CHECK(sample_times(r, 10).size() == 21);
    CHECK(sample_times(r, 10).back() == doctest::Approx(r.t_total));
    CHECK_THROWS_AS(QuenchSchedule::exponential(1.0, 0.0), DomainError);
    CHECK_THROWS_AS(QuenchSchedule::exponential(-1.0, 1.0), DomainError);
    CHECK_THROWS_AS(sample_times(e, 0), DomainError);
}

TEST_CASE("ramp from the spin-down vacuum follows a Runge-Kutta reference") {
    const RHModel m = one_site();
    const QuenchSchedule s = QuenchSchedule::exponential(khz(6.0), us(50));
    const QuenchResult r = run_quench(m, s, BasisSpec::local(1, 10));

    const auto b = r.final_state.basis;
    const Mat h0 = oracle::restrict(oracle::rh_local(m, 10), *b);
    const Mat v = oracle::restrict(oracle::rh_local(m.with_coupling(1.0), 10), *b) - h0;
    const std::function<oracle::CVec(double, const oracle::CVec&)> f = [&](double t, const oracle::CVec& y) {
        return oracle::CVec(cd(0.0, -1.0) * ((h0 + s(t) * v).cast<cd>() * y));
    };
    const oracle::CVec ref = oracle::rk4(f, oracle::CVec(all_down(b).amplitudes), 0.0, s.t_total, 50000);
    CHECK((r.final_state.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-8);
    CHECK(r.samples.size() == 51);
    CHECK(r.samples.front().mean_sigma_z == -1.0);
    CHECK(r.final_sample().coupling == doctest::Approx(s(s.t_total)));
}

TEST_CASE("constant schedule is plain fixed-coupling evolution") {
    RHModel m = one_site();
    const QuenchResult r = run_quench(m, QuenchSchedule::constant(khz(3.0), us(100)), BasisSpec::local(1, 10));
    const auto b = r.final_state.basis;
    const Mat h = oracle::restrict(oracle::rh_local(m.with_coupling(khz(3.0)), 10), *b);
    const oracle::CVec ref = oracle::expm_apply(h, all_down(b).amplitudes, us(100));
    CHECK((r.final_state.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("slow ramps stay close to the instantaneous ground state") {
    QuenchOptions o;
    o.adiabaticity = true;
    o.points_per_ramp = 10;
    const RHModel m = one_site();
    const AdiabaticityReport slow =
        adiabaticity_report(m, QuenchSchedule::exponential(khz(3.0), ms(1.0)), BasisSpec::local(1, 12), o);
    const AdiabaticityReport fast =
        adiabaticity_report(m, QuenchSchedule::exponential(khz(3.0), us(20)), BasisSpec::local(1, 12), o);
    CHECK(slow.fidelity.front() == doctest::Approx(1.0));
    CHECK(slow.fidelity.back() > 0.999);
    CHECK(fast.fidelity.back() < slow.fidelity.back());
    CHECK(fast.excitation_energy.back() > slow.excitation_energy.back());
}

TEST_CASE("quench refuses unsuitable models") {
    RHModel m = one_site();
    m.site_freqs[0] = -khz(1.0);
    CHECK_THROWS_AS(run_quench(m, QuenchSchedule::exponential(1.0, 1e-3), BasisSpec::local(1, 2)), DomainError);
    RHModel five;
    five.spin_freq = khz(2.0);
    five.site_freqs = Vec::Constant(5, khz(2.0));
    five.hoppings = Mat::Zero(5, 5);
    QuenchOptions o;
    o.adiabaticity = true;
    CHECK_THROWS_AS(run_quench(five, QuenchSchedule::exponential(1.0, 1e-3), BasisSpec::local(5, 1), o), ResourceError);
    const QuenchResult plain = run_quench(one_site(), QuenchSchedule::exponential(1.0, 1e-4), BasisSpec::local(1, 2));
    CHECK_THROWS_AS(adiabaticity_report(plain), DomainError);
}

TEST_CASE("finite-size rescaling round-trips and curve crossings interpolate") {
    const std::vector<double> g{0.8, 1.0, 1.2}, c{0.1, 0.2, 0.4};
    const auto pts = rescale_for_crossing(c, 4, g, 1.03, 1.0);
    CHECK(pts[1].y == doctest::Approx(0.2 * std::pow(4.0, 0.25)));
    CHECK(pts[0].x == doctest::Approx(4.0 * (0.8 - 1.03)));
    const auto back = unscale(pts, 4, 1.03, 1.0);
    for (int k = 0; k < 3; ++k) {
        CHECK(back[static_cast<std::size_t>(k)].x == doctest::Approx(g[static_cast<std::size_t>(k)]));
        CHECK(back[static_cast<std::size_t>(k)].y == doctest::Approx(c[static_cast<std::size_t>(k)]));
    }
    const std::vector<double> x{0.0, 1.0, 2.0};
    CHECK(*crossing_point(x, {0.0, 1.0, 2.0}, {1.5, 1.5, 1.5}) == doctest::Approx(1.5));
    CHECK_FALSE(crossing_point(x, {0.0, 0.0, 0.0}, {1.0, 2.0, 3.0}));
    CHECK_THROWS_AS(crossing_point(x, {0.0}, {1.0, 2.0, 3.0}), DomainError);
}
}
