#include <doctest.h>

#include <cmath>

#include "rhlab/error.hpp"
#include "rhlab/hamiltonian.hpp"
#include "rhlab/estimate.hpp"

using namespace rhlab;

namespace {

// P(X > n) for X ~ Poisson(mean), summed upward from the pmf recursion.
long double poisson_tail(long double mean, int n) {
    long double p = std::exp(-mean), tail = 0.0L;
    for (int m = 1; m <= n + 2000; ++m) {
        p *= mean / m;
        if (m > n) tail += p;
    }
    return tail;
}

int brute_cutoff(double mean, double tail) {
    int n = 0;
    while (poisson_tail(mean, n) > tail) ++n;
    return n;
}

}  // namespace

TEST_SUITE("estimate") {
TEST_CASE("dimension is the product of per-site factors") {
    const DimensionEstimate d = estimate_dimension(3, {4});
    REQUIRE(d.exact);
    CHECK(*d.exact == 10 * 10 * 10);
    CHECK(d.log2 == doctest::Approx(3 * std::log2(10.0)));

    const DimensionEstimate m = estimate_dimension(3, {1, 2, 6});
    REQUIRE(m.exact);
    CHECK(*m.exact == 4 * 6 * 14);

    const DimensionEstimate big = estimate_dimension(16, {6});
    REQUIRE(big.exact);
    CHECK(*big.exact == 2177953337809371136ULL);  // 14^16
    const DimensionEstimate huge = estimate_dimension(30, {9});
    CHECK_FALSE(huge.exact);
    CHECK(huge.log2 == doctest::Approx(30 * std::log2(20.0)));

    CHECK_THROWS_AS(estimate_dimension(0, {1}), DomainError);
    CHECK_THROWS_AS(estimate_dimension(3, {1, 2}), DomainError);
    CHECK_THROWS_AS(estimate_dimension(2, {-1}), DomainError);
}

TEST_CASE("Poisson cutoff matches a brute-force tail sum") {
    for (double mean : {0.01, 0.17, 0.62, 1.0, 5.5, 12.0, 40.0})
        for (double tail : {1e-2, 1e-3, 1e-6}) {
            CAPTURE(mean);
            CAPTURE(tail);
            CHECK(poisson_cutoff(mean, tail) == brute_cutoff(mean, tail));
        }
    CHECK(poisson_cutoff(0.0, 1e-3) == 0);
    CHECK_THROWS_AS(poisson_cutoff(-1.0, 1e-3), DomainError);
    CHECK_THROWS_AS(poisson_cutoff(1.0, 0.0), DomainError);
}

TEST_CASE("suggested cutoffs follow the (sqrt(N) g / delta_k)^2 occupancy") {
    RHModel m;
    m.spin_freq = khz(2.0);
    m.site_freqs = Vec::Constant(3, khz(1.0));
    m.hoppings = power_law_hoppings(3, khz(6.0));
    m.coupling = khz(2.0);
    const ModeSpectrum s = m.modes();
    const auto c = suggest_cutoffs(m);
    for (int k = 0; k < 3; ++k) {
        const double nbar = 3.0 * m.coupling * m.coupling / (s.freqs[k] * s.freqs[k]);
        CHECK(c[static_cast<std::size_t>(k)].mean_occupation == doctest::Approx(nbar));
        REQUIRE(c[static_cast<std::size_t>(k)].cutoff);
        CHECK(*c[static_cast<std::size_t>(k)].cutoff == brute_cutoff(nbar, 1e-3));
    }
}

TEST_CASE("a resonant mode gets no automatic cutoff") {
    RHModel m;
    m.spin_freq = khz(2.0);
    m.site_freqs = Vec::Zero(1);
    m.hoppings = Mat::Zero(1, 1);
    m.coupling = khz(1.0);
    const auto c = suggest_cutoffs(m);
    CHECK_FALSE(c[0].cutoff);
    CHECK(std::isinf(c[0].mean_occupation));
}
}
