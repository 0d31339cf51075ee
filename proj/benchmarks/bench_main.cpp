#include <benchmark/benchmark.h>

#include "rhlab/basis.hpp"
#include "rhlab/calibrate.hpp"
#include "rhlab/evolve.hpp"
#include "rhlab/hamiltonian.hpp"
#include "rhlab/hp.hpp"
#include "rhlab/lanczos.hpp"
#include "rhlab/presets.hpp"

using namespace rhlab;

namespace {

RHModel dynamics_n4(double g_khz) {
    return presets::model_from_measurement(presets::dynamics_set(4)).with_coupling(khz(g_khz));
}

// Sparse H·x on the N = 4 local basis; the argument is the phonon cutoff.
void BM_MatVec(benchmark::State& state) {
    const auto basis = make_basis(BasisSpec::local(4, static_cast<int>(state.range(0)), ParitySector::even));
    const HamiltonianOperator h(dynamics_n4(6.0), basis);
    CVec x = CVec::Random(static_cast<Eigen::Index>(basis->size()));
    CVec y(x.size());
    for (auto _ : state) {
        h.apply(x, y);
        benchmark::DoNotOptimize(y.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.diagonal_part().nonzeros() + h.coupling_part().nonzeros()));
    state.counters["dim"] = static_cast<double>(basis->size());
}
BENCHMARK(BM_MatVec)->Arg(6)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

// Ground state of the uniform N = 4 chain just above the mean-field transition.
void BM_Lanczos(benchmark::State& state) {
    const RHModel model = presets::uniform_chain_model(4);
    const auto basis = make_basis(BasisSpec::local(4, static_cast<int>(state.range(0)), ParitySector::even));
    const HamiltonianOperator h(model.with_coupling(khz(5.0)), basis);
    LanczosOptions opt;
    opt.n_states = 1;
    for (auto _ : state) benchmark::DoNotOptimize(ground_state(h, opt).energy);
    state.counters["dim"] = static_cast<double>(basis->size());
}
BENCHMARK(BM_Lanczos)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

// One 4 μs Krylov step of the strong-coupling dynamics.
void BM_KrylovStep(benchmark::State& state) {
    const auto basis = make_basis(BasisSpec::local(4, static_cast<int>(state.range(0)), ParitySector::even));
    const HamiltonianOperator h(dynamics_n4(6.0), basis);
    const CVec start = all_up(basis).amplitudes;
    for (auto _ : state) {
        CVec psi = start;
        propagate_constant(psi, h, h.coupling(), us(4.0));
        benchmark::DoNotOptimize(psi.data());
    }
}
BENCHMARK(BM_KrylovStep)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

// e^{At} for the 64×64 linearized N = 16 system.
void BM_HpPropagate(benchmark::State& state) {
    const LinearizedSystem sys = build_A(presets::model_from_measurement(presets::dynamics_set(16)).with_coupling(khz(1.0)));
    for (auto _ : state) benchmark::DoNotOptimize(propagate(sys, us(400.0)).b.data());
}
BENCHMARK(BM_HpPropagate)->Unit(benchmark::kMicrosecond);

void BM_SpacingFit(benchmark::State& state) {
    const auto& set = presets::phase_transition_set(6);
    SpectrumMeasurement meas;
    meas.trap_freq = set.trap_freq();
    for (double f : set.measured_modes_mhz) meas.freqs.push_back(mhz(f));
    for (auto _ : state) benchmark::DoNotOptimize(fit_spacings(meas, ChainGeometry{}, true).residual);
}
BENCHMARK(BM_SpacingFit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
