#include <benchmark/benchmark.h>

#include <random>
#include <utility>
#include <vector>

#include "selcot/ablation.hpp"

using namespace selcot;

namespace {

std::vector<std::pair<double, double>> noisy_parabola(int n) {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> noise(-0.02, 0.02);
    std::vector<std::pair<double, double>> pts;
    for (int i = 0; i < n; ++i) {
        const double x = 100.0 + 500.0 * i / (n - 1);
        pts.emplace_back(x, -2e-6 * x * x + 1.2e-3 * x + 0.45 + noise(rng));
    }
    return pts;
}

}  // namespace

static void BM_fit_quadratic(benchmark::State& state) {
    const auto pts = noisy_parabola(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(fit_quadratic(pts));
    }
}
BENCHMARK(BM_fit_quadratic)->Arg(6)->Arg(100)->Arg(10000);

static void BM_fit_eval(benchmark::State& state) {
    const auto f = fit_quadratic(noisy_parabola(6));
    double x = 100.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(f.at(x));
        x += 1.0;
        if (x > 600.0) x = 100.0;
    }
}
BENCHMARK(BM_fit_eval);

BENCHMARK_MAIN();
