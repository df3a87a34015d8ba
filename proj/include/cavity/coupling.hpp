/**
 * Closed-form coupling strengths.
 *
 * g1 = q_zpf * 2 omega r / L is the reference coupling of one optimally placed
 * membrane at the cavity center and normalizes every reported ratio. A
 * positive g means the frequency rises when the element moves toward +z.
 */
#pragma once

#include "cavity/core.hpp"
#include "cavity/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cavity {

/// gamma = I_+ / I_- across a membrane whose left-side field has phase phi_minus.
double intensity_ratio(double r, double theta_r, double phase_left);

/// A = [sum I_i L_i / L]^{-1}.
double absolute_intensity(std::span<const double> intensities, std::span<const double> lengths, double length);
/// Same over profile regions; thin = true skips intra-membrane regions.
double absolute_intensity(std::span<const Region> regions, double length, bool thin);

/// Copy of the profile with A recomputed in the thin approximation.
FieldProfile thin_normalized(const FieldProfile& profile);

/// g = q_zpf A (omega / L) (I_+ - I_-).
double coupling_from_profile(const FieldProfile& profile, std::size_t membrane, double zpf);

double reference_coupling(double r, double omega, double length, double zpf);

/// g0(q) = g1 / (1 - 2 r q / L).
double coupling_general_position(double q_over_l, double r, double omega, double length, double zpf);

/// sum a_i g_i for normalized weights.
double collective_coupling(std::span<const double> couplings, std::span<const double> weights);

/// sqrt(sum g_i^2), the largest collective coupling over all normalized modes.
double maximal_collective_coupling(std::span<const double> couplings);

struct CenterArrayAnalytics {
    std::size_t n = 0;
    double r = 0.0;
    double theta_r = 0.0;
    double spacing = 0.0;
    double length = 0.0;
    double wavelength = 0.0;
    double zpf = 0.0;
    double gamma = 1.0;
    double g1 = 0.0;
    std::vector<double> individual;
    double collective = 0.0;
    double saturated = 0.0;
};

struct MirrorArrayAnalytics {
    std::size_t n = 0;
    double r = 0.0;
    double theta_r = 0.0;
    double spacing = 0.0;
    double length = 0.0;
    double wavelength = 0.0;
    double zpf = 0.0;
    double gamma = 1.0;
    double g1 = 0.0;
    std::vector<double> individual;
    double collective = 0.0;
    double saturated = 0.0;
};

/// Denominator r + (Gamma^{N/2} - (rN + 1)) l / L shared by the center-array results.
double center_array_denominator(std::size_t n, double r, double spacing_over_length);

/**
 * Center-array couplings. The geometry is checked against the builder's
 * allowed values (spacing and length modulo a wavelength, within 1e-9 lambda);
 * thickness is the slab thickness added to L by the builder.
 */
CenterArrayAnalytics center_config_analytics(std::size_t n, const Reflectivity& refl, double spacing, double length,
                                             double wavelength, double zpf, double thickness = 0.0,
                                             bool check_geometry = true);

MirrorArrayAnalytics mirror_config_analytics(std::size_t n, const Reflectivity& refl, double spacing, double length,
                                             double wavelength, double zpf, double thickness = 0.0,
                                             bool check_geometry = true);

/**
 * Ideal thin-approximation profile of a center array: intensities grow by Gamma
 * across each membrane toward the center, regions carry the builder lengths
 * without the quarter-wave center extension. Matches the closed forms exactly.
 */
FieldProfile ideal_center_profile(std::size_t n, double r, double spacing, double length, double omega);

}  // namespace cavity
