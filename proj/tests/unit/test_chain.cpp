#include <doctest.h>

#include <cmath>

#include "rhlab/chain.hpp"
#include "rhlab/error.hpp"
#include "rhlab/presets.hpp"

using namespace rhlab;

TEST_SUITE("chain") {
TEST_CASE("two-ion chain matches the closed-form local and collective frequencies") {
    const double d = um(5.3);
    const double wx = mhz(2.45);
    const ChainGeometry g = ChainGeometry::uniform(2, d, wx);
    const double k = constants::elementary_charge * constants::elementary_charge /
                     (4.0 * M_PI * constants::vacuum_permittivity * g.mass);
    const double wl = std::sqrt(wx * wx - k / (d * d * d));
    const double t = k / (2.0 * wl * d * d * d);

    const MotionalModel m = motional_model(g);
    CHECK(m.local_freqs[0] == doctest::Approx(wl).epsilon(1e-13));
    CHECK(m.local_freqs[1] == doctest::Approx(wl).epsilon(1e-13));
    CHECK(m.hoppings(0, 1) == doctest::Approx(t).epsilon(1e-13));
    CHECK(m.corrected_freqs[0] == doctest::Approx(wl - t * t / (2.0 * wx)).epsilon(1e-13));
    CHECK(m.corrected_hoppings(0, 1) == doctest::Approx(t).epsilon(1e-13));

    const ModeSpectrum s = collective_modes(m);
    CHECK(s.freqs[0] == doctest::Approx(wl - t * t / (2 * wx) - t).epsilon(1e-13));
    CHECK(s.freqs[1] == doctest::Approx(wl - t * t / (2 * wx) + t).epsilon(1e-13));
    // Antisymmetric mode below the symmetric one; sign convention fixes the first entry positive.
    CHECK(s.vectors(0, 0) > 0.0);
    CHECK(s.vectors(1, 0) == doctest::Approx(-s.vectors(0, 0)));
    CHECK(s.vectors(1, 1) == doctest::Approx(s.vectors(0, 1)));
}

TEST_CASE("center-of-mass mode stays at the trap frequency") {
    for (int n : {2, 3, 5, 8}) {
        const MotionalModel m = motional_model(ChainGeometry::uniform(n, um(5.4), mhz(2.5)));
        const ModeSpectrum s = collective_modes(m);
        CHECK(std::abs(to_hz(s.freqs[n - 1] - mhz(2.5))) < 5.0);
        // All-positive eigenvector.
        CHECK(s.vectors.col(n - 1).minCoeff() > 0.0);
    }
}

TEST_CASE("mode vectors are orthonormal and reproduce the mode matrix") {
    const MotionalModel m = motional_model(ChainGeometry{{um(6.0), um(5.1), um(4.9), um(5.5)}, mhz(2.4)});
    const ModeSpectrum s = collective_modes(m);
    const Mat id = s.vectors.transpose() * s.vectors;
    CHECK((id - Mat::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-13);
    const Mat rebuilt = s.vectors * s.freqs.asDiagonal() * s.vectors.transpose();
    CHECK((rebuilt - m.mode_matrix()).cwiseAbs().maxCoeff() < 1e-6 * m.mode_matrix().cwiseAbs().maxCoeff());
}

TEST_CASE("hoppings fall off as the inverse cube of distance") {
    const MotionalModel m = motional_model(ChainGeometry::uniform(6, um(5.4), mhz(2.5)));
    for (int r = 1; r <= 4; ++r) {
        const double expect = m.hoppings(0, 1) / (r * r * r);
        // Local frequencies differ slightly along the chain.
        CHECK(m.hoppings(1, 1 + r) == doctest::Approx(expect).epsilon(1e-2));
    }
}

TEST_CASE("a chain softer than the trap is refused") {
    ChainGeometry g = ChainGeometry::uniform(4, um(0.2), mhz(0.3));
    CHECK_THROWS_AS(g.validate(), ChainUnstable);
    CHECK_THROWS_AS(motional_model(g), DomainError);
    g.spacings[1] = -1.0;
    CHECK_THROWS_AS(g.validate(), DomainError);
}

TEST_CASE("interaction picture shifts by half-sum and half-difference of the detunings") {
    const MotionalModel m = motional_model(ChainGeometry::uniform(3, um(5.4), mhz(2.5)));
    const RHModel r = interaction_picture(m, khz(31.0), khz(-27.0));
    CHECK(r.spin_freq == doctest::Approx(khz(2.0)));
    for (int i = 0; i < 3; ++i)
        CHECK(r.site_freqs[i] == doctest::Approx(m.corrected_freqs[i] - mhz(2.5) + khz(29.0)));
    CHECK(r.hoppings(0, 2) == doctest::Approx(m.corrected_hoppings(0, 2)));
    CHECK(r.coupling == 0.0);
}

TEST_CASE("laser coupling conversion round-trips") {
    CHECK(coupling_from_laser(0.08, khz(100)) == doctest::Approx(khz(4)));
    CHECK(rabi_from_coupling(khz(4), 0.08) == doctest::Approx(khz(100)));
    CHECK_THROWS_AS(coupling_from_laser(0.0, 1.0), DomainError);
}

TEST_CASE("tuning the lowest mode shifts every site equally") {
    RHModel m;
    m.spin_freq = khz(10);
    m.site_freqs = Vec::Constant(4, khz(3));
    m.hoppings = power_law_hoppings(4, khz(2));
    const RHModel t = tune_lowest_mode(m, khz(2));
    CHECK(t.modes().freqs[0] == doctest::Approx(khz(2)));
    CHECK((t.site_freqs - m.site_freqs).maxCoeff() == doctest::Approx((t.site_freqs - m.site_freqs).minCoeff()));
    CHECK(t.equilibrium());
    CHECK_FALSE(tune_lowest_mode(m, -khz(1)).equilibrium());
}

TEST_CASE("model validation") {
    RHModel m;
    m.site_freqs = Vec::Zero(2);
    m.hoppings = Mat::Zero(3, 3);
    CHECK_THROWS_AS(m.validate(), DomainError);
    m.hoppings = Mat::Zero(2, 2);
    m.hoppings(0, 1) = 1.0;
    CHECK_THROWS_AS(m.validate(), DomainError);
    m.hoppings(1, 0) = 1.0;
    CHECK_NOTHROW(m.validate());
}

TEST_CASE("uniform chain preset puts the lowest mode at the requested frequency") {
    for (int n : {2, 4, 6}) {
        const RHModel m = presets::uniform_chain_model(n);
        CHECK(m.modes().freqs[0] == doctest::Approx(khz(2.0)));
        CHECK(m.hoppings(0, 1) == doctest::Approx(khz(26.0)));
        CHECK(m.spin_freq == doctest::Approx(m.site_freqs[n / 2 - 1]));
    }
}
}
