#include <benchmark/benchmark.h>

#include "rho_lite/ar1.hpp"
#include "rho_lite/complexity.hpp"
#include "rho_lite/estimators.hpp"
#include "rho_lite/fixed_point.hpp"
#include "rho_lite/pwl_fit.hpp"
#include "rho_lite/streaming.hpp"

#include <cmath>
#include <numbers>

namespace {

rho_lite::SampleSeries make_series(std::size_t n) {
    return rho_lite::generate_ar1({0.8, 0.61}, n, 42);
}

void BM_AcfEstimate(benchmark::State& state) {
    const auto series = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho_lite::acf_estimate(series));
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AcfEstimate)->RangeMultiplier(4)->Range(128, 8192)->Complexity();

void BM_KedemEstimate(benchmark::State& state) {
    const auto bits = rho_lite::sign_process(make_series(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho_lite::kedem_rho(rho_lite::lambda_hat(bits).value));
    }
}
BENCHMARK(BM_KedemEstimate)->Arg(512);

void BM_ProposedEstimate(benchmark::State& state) {
    const auto bits = rho_lite::sign_process(make_series(static_cast<std::size_t>(state.range(0))));
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho_lite::piecewise_rho(rho_lite::lambda_hat(bits).value));
    }
}
BENCHMARK(BM_ProposedEstimate)->Arg(512);

void BM_StreamingCorrelatorPush(benchmark::State& state) {
    rho_lite::WindowConfig cfg;
    cfg.window_n = static_cast<std::size_t>(state.range(0));
    rho_lite::SlidingAcfCorrelator correlator(cfg);
    const auto series = make_series(4 * cfg.window_n);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto word = rho_lite::quantize(series[i % series.size()], cfg.input_format);
        benchmark::DoNotOptimize(correlator.push(word));
        ++i;
    }
}
BENCHMARK(BM_StreamingCorrelatorPush)->Arg(512);

void BM_CordicCos(benchmark::State& state) {
    const auto angle = rho_lite::quantize(1.0, rho_lite::QFormat{16, 13});
    for (auto _ : state) {
        benchmark::DoNotOptimize(rho_lite::cordic_cos(angle));
    }
}
BENCHMARK(BM_CordicCos);

void BM_FitFiveSegments(benchmark::State& state) {
    rho_lite::FitConfig cfg;
    cfg.grid_size = 2001;
    cfg.population = 24;
    cfg.max_iterations = 200;
    const rho_lite::TargetFn target = [](double lam) {
        return std::cos(std::numbers::pi * (1.0 - lam));
    };
    for (auto _ : state) {
        try {
            benchmark::DoNotOptimize(rho_lite::fit_piecewise(target, cfg));
        } catch (const rho_lite::FitNotConverged& e) {
            benchmark::DoNotOptimize(e.best.max_error);
        }
    }
}
BENCHMARK(BM_FitFiveSegments)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
