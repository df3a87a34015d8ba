#include "cavity/core.hpp"
#include "cavity/kernels.hpp"
#include "cavity/tmm.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace cavity;

namespace {

CavityConfig lossy_array(std::size_t n) {
    CavityConfig c = build_center_array(n, slab_from_reflectivity(0.5, 2.0, 1e-5, 1064e-9), 1064e-9, 3, 500);
    c.mirror_left = c.mirror_right = MirrorSpec::partial(5e-5);
    return c;
}

std::vector<double> grid(const CavityConfig& c, std::size_t points) {
    const double w0 = c.design_omega(), fsr = free_spectral_range(c);
    std::vector<double> omega(points);
    for (std::size_t i = 0; i < points; ++i)
        omega[i] = w0 - fsr + 2.0 * fsr * static_cast<double>(i) / static_cast<double>(points - 1);
    return omega;
}

template <bool Parallel>
void transmission(benchmark::State& state) {
    const CavityConfig c = lossy_array(static_cast<std::size_t>(state.range(0)));
    const std::vector<double> omega = grid(c, 100000);
    std::vector<double> out(omega.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::transmission_grid(c, omega, out);
        else
            kernels::transmission_grid_serial(c, omega, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(omega.size()));
}

template <bool Parallel>
void residual(benchmark::State& state) {
    const CavityConfig c = lossy_array(static_cast<std::size_t>(state.range(0))).lossless_copy();
    const double fsr = free_spectral_range(c);
    std::vector<long double> offsets(100000);
    for (std::size_t i = 0; i < offsets.size(); ++i)
        offsets[i] = -fsr + 2.0L * fsr * static_cast<long double>(i) / static_cast<long double>(offsets.size() - 1);
    std::vector<double> out(offsets.size());
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::residual_grid(c, c.design_omega(), offsets, out);
        else
            kernels::residual_grid_serial(c, c.design_omega(), offsets, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long long>(offsets.size()));
}

}  // namespace

BENCHMARK(transmission<true>)->Arg(2)->Arg(8)->Arg(16)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(transmission<false>)->Arg(2)->Arg(8)->Arg(16)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(residual<true>)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(residual<false>)->Arg(8)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
