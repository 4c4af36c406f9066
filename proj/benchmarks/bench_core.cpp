#include <benchmark/benchmark.h>

#include <random>

#include "uhlmann/estimation.hpp"
#include "uhlmann/rng.hpp"
#include "uhlmann/transport.hpp"
#include "uhlmann/zoo.hpp"

namespace {

using namespace uhlmann;

void SldSolve(benchmark::State& state) {
    std::mt19937_64 eng(1);
    const Eigen::Index n = state.range(0);
    const DensityMatrix rho = rng::random_density(n, eng);
    const HermitianMatrix drho = rng::random_traceless_hermitian(n, eng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_sld(rho, drho));
    }
}
BENCHMARK(SldSolve)->Arg(2)->Arg(4)->Arg(8);

void FisherAtPoint(benchmark::State& state) {
    const auto model = make_bloch_full();
    RVector theta(3);
    theta << 0.2, 0.1, -0.3;
    for (auto _ : state) {
        benchmark::DoNotOptimize(sld_set(*model, theta));
    }
}
BENCHMARK(FisherAtPoint);

void LoopLift(benchmark::State& state) {
    const auto model = make_bloch_full();
    RVector a(3), b(3), c(3);
    a << 0.3, 0, 0;
    b << 0, 0.3, 0;
    c << 0, 0, 0.3;
    const CurvePath loop(*model, {a, b, c, a});
    const Amplitude w0 = positive_amplitude(model->evaluate(a));
    TransportOptions opts;
    opts.steps = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(relative_phase_factor(loop, w0, opts));
    }
}
BENCHMARK(LoopLift)->Arg(128)->Arg(512);

void OutcomeSampling(benchmark::State& state) {
    const auto model = make_classical_simplex(2);
    const RVector theta = RVector::Constant(1, 0.3);
    const Estimator est = optimal_estimator(*model, theta);
    const DensityMatrix rho = model->evaluate(theta);
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_outcomes(est.povm, rho, state.range(0), 7, 1));
    }
}
BENCHMARK(OutcomeSampling)->Arg(100000);

}  // namespace

BENCHMARK_MAIN();
