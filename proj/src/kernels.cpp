#include "cavity/kernels.hpp"

#include "chain.hpp"

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cavity::kernels {

double residual_at(const CavityConfig& config, long double base, long double offset) {
    const long double k = (base + offset) / static_cast<long double>(kSpeedOfLight);
    const Amplitudes start{cplx(0.0, 1.0), cplx(0.0, -1.0)};
    const Amplitudes end = detail::walk(config, k, start, [](const Amplitudes&, double, cplx, bool) {});
    const double scale = std::abs(end.forward) + std::abs(end.backward);
    return (end.forward + end.backward).real() / scale;
}

double transmission_at(const CavityConfig& config, double omega) {
    if (config.mirror_left.is_perfect() || config.mirror_right.is_perfect()) return 0.0;
    const long double k = static_cast<long double>(omega) / static_cast<long double>(kSpeedOfLight);
    const TransferMatrix total = detail::partial_mirror(config.mirror_right.transmission) *
                                 detail::chain_matrix(config, k) *
                                 detail::partial_mirror(config.mirror_left.transmission);
    return std::norm(total.transmission_left());
}

void residual_grid(const CavityConfig& config, long double base, std::span<const long double> offsets,
                   std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(offsets.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = residual_at(config, base, offsets[i]);
}

void residual_grid_serial(const CavityConfig& config, long double base, std::span<const long double> offsets,
                          std::span<double> out) {
    for (std::size_t i = 0; i < offsets.size(); ++i) out[i] = residual_at(config, base, offsets[i]);
}

void transmission_grid(const CavityConfig& config, std::span<const double> omega, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(omega.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = transmission_at(config, omega[i]);
}

void transmission_grid_serial(const CavityConfig& config, std::span<const double> omega, std::span<double> out) {
    for (std::size_t i = 0; i < omega.size(); ++i) out[i] = transmission_at(config, omega[i]);
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace cavity::kernels
