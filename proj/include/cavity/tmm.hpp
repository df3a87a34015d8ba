/**
 * Plane-wave transfer-matrix engine.
 *
 * Resonances of a cavity with perfect mirrors are the zeros of a real residual
 * obtained by launching a field with a node at the left mirror and reading the
 * node condition at the right mirror. Lossy systems are characterized only
 * through their transmission spectrum.
 */
#pragma once

#include "cavity/transfer_matrix.hpp"
#include "cavity/types.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace cavity {

struct SolverOptions {
    double scan_density = 64.0;           ///< scan points per free spectral range per (N + 1)
    double mode_residual_tol = 1e-8;      ///< |residual| accepted as a resonance
    double fd_step_fraction = 1e-6;       ///< finite-difference step in units of the wavelength
    double richardson_tol = 1e-4;         ///< relative agreement of the Richardson pair
    double branch_jump_factor = 10.0;     ///< allowed deviation from the predicted shift
};

TransferMatrix propagation_matrix(double length, double omega, cplx index = {1.0, 0.0});
TransferMatrix slab_matrix(const MembraneSpec& spec, double omega);
TransferMatrix thin_scatterer_matrix(const MembraneSpec& spec);
/// Slab or thin-scatterer matrix, absorption included.
TransferMatrix membrane_matrix(const MembraneSpec& spec, double omega);

/// Perfect mirrors impose a node (reflection -1); partial mirrors are lossless two-ports.
struct MirrorBoundary {
    bool perfect = true;
    TransferMatrix matrix;
    cplx reflection{-1.0, 0.0};
};
MirrorBoundary mirror_matrix(const MirrorSpec& spec);

/// Product of all propagation and membrane matrices from the left mirror face to the right one.
TransferMatrix assemble(const CavityConfig& config, double omega);

/// Free spectral range pi c / L.
double free_spectral_range(const CavityConfig& config);
double default_scan_step(const CavityConfig& config, const SolverOptions& options = {});

/// Normalized node mismatch at the right mirror; zeros are the resonances.
double resonance_residual(const CavityConfig& config, double omega);

struct ResonanceSearch {
    std::vector<double> roots;
    std::vector<std::string> warnings;
    double scan_step = 0.0;
};

ResonanceSearch find_resonances(const CavityConfig& config, double omega_min, double omega_max,
                                const SolverOptions& options = {});

/// Resonance closest to a guess.
double nearest_resonance(const CavityConfig& config, double omega_guess, const SolverOptions& options = {});

FieldProfile field_profile(const CavityConfig& config, double omega, const SolverOptions& options = {});

struct Spectrum {
    std::vector<double> omega;
    std::vector<double> transmission;
    std::vector<std::string> warnings;
};

/// Transmitted power fraction on a frequency grid (OpenMP-parallel over the grid).
Spectrum transmission_spectrum(const CavityConfig& config, std::span<const double> omega_grid);
/// Serial reference of transmission_spectrum; bitwise identical results.
Spectrum transmission_spectrum_serial(const CavityConfig& config, std::span<const double> omega_grid);

/// Full width at half maximum of the peak at peak_index, interpolated on both flanks.
double fwhm_linewidth(const Spectrum& spectrum, std::size_t peak_index, std::size_t min_points_above_half = 20);

struct LinewidthMeasurement {
    double omega_peak = 0.0;
    double fwhm = 0.0;
    double peak_transmission = 0.0;
    std::size_t points_above_half = 0;
};

/// Locates the transmission peak nearest the guess by successive zooming and measures its FWHM.
LinewidthMeasurement measure_linewidth(const CavityConfig& config, double omega_guess,
                                       std::size_t grid_points = 2001);

struct FiniteDifference {
    double value = 0.0;      ///< Richardson-extrapolated coupling (rad/s)
    double coarse = 0.0;     ///< central difference with step h
    double fine = 0.0;       ///< central difference with step h/2
    double agreement = 0.0;  ///< |coarse - fine| / max(|fine|, zpf omega / L)
    bool flagged = false;    ///< agreement above SolverOptions::richardson_tol
};

/// g_i = q_zpf d omega / d q_i, tracked along the resonance branch through omega0.
FiniteDifference numeric_coupling(const CavityConfig& config, std::size_t membrane, double omega0, double zpf,
                                  const SolverOptions& options = {});

/// g_u = u_zpf d omega / d u with q_i = a_i u + b_i.
FiniteDifference numeric_collective_coupling(const CavityConfig& config, const CollectiveMode& mode,
                                             double omega0, const SolverOptions& options = {});

}  // namespace cavity
