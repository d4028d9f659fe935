#include <cmath>

#include <benchmark/benchmark.h>

#include "beurlab/exprlang.hpp"
#include "beurlab/flows.hpp"
#include "beurlab/popa.hpp"
#include "beurlab/quadrature.hpp"
#include "beurlab/tauberian.hpp"

namespace {

void BM_QuadratureSmooth(benchmark::State& state) {
    for (auto _ : state) {
        auto r = beurlab::integrate([](double x) { return std::exp(std::sin(3 * x)); }, 0.0, 10.0);
        benchmark::DoNotOptimize(r.value);
    }
}
BENCHMARK(BM_QuadratureSmooth);

void BM_CircChain(benchmark::State& state) {
    const beurlab::PopaParams p(0.5);
    for (auto _ : state) {
        double acc = 0.0;
        for (int i = 0; i < 1000; ++i) acc = beurlab::circ(p, acc, 1e-3 * i);
        benchmark::DoNotOptimize(acc);
    }
}
BENCHMARK(BM_CircChain);

void BM_OccupationTimeInverse(benchmark::State& state) {
    const auto phi = beurlab::make_function("linear_plus_root", {0.5});
    for (auto _ : state) benchmark::DoNotOptimize(beurlab::tau_phi_inverse(phi, 20.0, 1.0));
}
BENCHMARK(BM_OccupationTimeInverse);

void BM_GaussianConvolution(benchmark::State& state) {
    const auto K = beurlab::gaussian_kernel();
    const auto phi = beurlab::make_function("power", {0.5});
    const beurlab::RealFunc H([](double x) { return 2.0 + std::exp(-x); });
    for (auto _ : state) benchmark::DoNotOptimize(beurlab::convolve(K, H, phi, 1e4));
}
BENCHMARK(BM_GaussianConvolution);

void BM_ParseExpression(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(beurlab::parse("0.5*x + sqrt(x) - log(1+abs(sin(x)))^2"));
}
BENCHMARK(BM_ParseExpression);

void BM_EvalExpression(benchmark::State& state) {
    const beurlab::Expression e("0.5*x + sqrt(x) - log(1+abs(sin(x)))^2");
    double x = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(e(x));
        x += 1e-3;
    }
}
BENCHMARK(BM_EvalExpression);

}  // namespace
BENCHMARK_MAIN();
