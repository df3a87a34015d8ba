/**
 * Grid kernels. Each has an OpenMP version and a serial reference that share
 * the per-point evaluation, so both produce bitwise identical output.
 */
#pragma once

#include "cavity/types.hpp"

#include <span>

namespace cavity::kernels {

/// Resonance residual at omega = base + offsets[i].
void residual_grid(const CavityConfig& config, long double base, std::span<const long double> offsets,
                   std::span<double> out);
void residual_grid_serial(const CavityConfig& config, long double base, std::span<const long double> offsets,
                          std::span<double> out);

/// Transmitted power fraction at each frequency.
void transmission_grid(const CavityConfig& config, std::span<const double> omega, std::span<double> out);
void transmission_grid_serial(const CavityConfig& config, std::span<const double> omega, std::span<double> out);

/// Residual at a single frequency given as base + offset (long double phase accumulation).
double residual_at(const CavityConfig& config, long double base, long double offset);

/// Transmission at one frequency.
double transmission_at(const CavityConfig& config, double omega);

/// Number of OpenMP threads the grid kernels will use (1 without OpenMP).
int max_threads();

}  // namespace cavity::kernels
