#pragma once

#include "cavity/types.hpp"

#include <span>
#include <vector>

namespace cavity {

/// Magnitude and phase of a membrane's amplitude reflectivity r exp(i theta_r).
struct Reflectivity {
    double magnitude = 0.0;
    double phase = 0.0;  ///< in (-pi, pi]

    /// Extremal intensity ratio (1 + r) / (1 - r).
    [[nodiscard]] double gamma_max() const { return (1.0 + magnitude) / (1.0 - magnitude); }
};

/// Lossless effective reflectivity of a slab; the extinction is ignored.
Reflectivity slab_reflectivity(const MembraneSpec& spec, double omega);

/// Lossless effective reflectivity of either membrane kind.
Reflectivity membrane_reflectivity(const MembraneSpec& spec, double omega);

/// Thin scatterer whose reflectivity magnitude is r (zeta = r / sqrt(1 - r^2)).
MembraneSpec thin_from_reflectivity(double r, double zpf = 1e-15);

/// Thinnest slab of the given index reaching reflectivity r at the wavelength.
MembraneSpec slab_from_reflectivity(double r, double index, double extinction, double wavelength,
                                    double zpf = 1e-15);

/// Thin scatterer with reflection coefficient R = r^2 and absorption A (lowest order in zeta_imag).
MembraneSpec thin_from_reflection_absorption(double reflection, double absorption, double zpf = 1e-15);

// Optimal array geometries. Spacing l is the vacuum gap between the faces of
// adjacent membranes; for thin scatterers it is the center spacing.

double center_array_spacing(const Reflectivity& refl, double wavelength, int spacing_index);
double center_array_length(std::size_t n, const Reflectivity& refl, double spacing, double thickness,
                           double wavelength, int length_index);
double mirror_array_spacing(const Reflectivity& refl, double wavelength, int spacing_index);
double mirror_array_length(std::size_t n, const Reflectivity& refl, double spacing, double thickness,
                           double wavelength, int length_index);

/**
 * Symmetric array of N (even) identical membranes about the cavity center.
 * Adjacent membranes are separated by l = (lambda/2)(3/2 - theta_r/pi + n_s),
 * the innermost pair by l + lambda/4, so the intensity grows by Gamma across
 * every membrane toward the center and the design wavelength is resonant.
 */
CavityConfig build_center_array(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                int spacing_index, int length_index);

/**
 * N membranes next to the right mirror with gap l = lambda(3/4 - theta_r/(2 pi) + n_s);
 * intensity grows by Gamma per element toward the mirror-side region.
 */
CavityConfig build_mirror_array(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                int spacing_index, int length_index);

/// Smallest non-negative length index whose L/l is closest to the target ratio.
int center_length_index_for_ratio(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                  int spacing_index, double target_length_over_spacing);
int mirror_length_index_for_ratio(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                  int spacing_index, double target_length_over_spacing);

/// All invariant violations of a configuration; never throws.
std::vector<Violation> validate(const CavityConfig& config);

bool has_errors(std::span<const Violation> violations);

/// Throws InvalidArgument listing every error-severity violation.
void require_valid(const CavityConfig& config);

}  // namespace cavity
