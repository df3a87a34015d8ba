/**
 * Photon decay rates, coupling efficiency and cooperativity in the weak-loss
 * limit: every rate is an expectation value over the lossless mode profile.
 */
#pragma once

#include "cavity/core.hpp"
#include "cavity/types.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace cavity {

/// kappa_T = T (c / 2L) A (I_first + I_last).
double mirror_decay(const FieldProfile& profile, double transmission);
/// Mirrors with different transmissions.
double mirror_decay(const FieldProfile& profile, double transmission_left, double transmission_right);

/// kappa_T = (c/L) r T / (r + (Gamma^{N/2} - (rN+1)) l/L); N = 0 gives T c / L.
double center_config_mirror_decay(std::size_t n, double r, double spacing, double length, double transmission);

/// xi(phi, theta) = (phi + sin(phi) cos(2 theta + phi)) / 2.
double absorption_geometric_factor(double phi, double theta);

/// chi = phi [(1 + n^-2) + r (1 - n^-2) cos(theta_r)] + (2r/n) sin(theta_r).
double slab_chi(double index, const Reflectivity& refl, double phi);

/// kappa_sigma of slab i: 4 (n_imag c / (n^2 L)) A I_0 xi(phi, theta_0).
double absorption_decay(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec);

/// kappa_sigma of thin scatterer i: A I_- (c/L) 4 zeta_imag cos^2(phi_-).
double thin_scatterer_absorption(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec);

/// Either of the two above depending on the membrane kind.
double membrane_absorption_decay(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec);

/// Loss strength entering the center-array closed forms: n_imag chi for slabs, 2 zeta_imag/(1 + zeta^2) for thin scatterers.
double absorption_factor(const MembraneSpec& spec, double omega);

/// kappa_sigma = (c/L) loss (Gamma^{N/2} - 1) / (r + (Gamma^{N/2} - (rN+1)) l/L).
double center_config_absorption_decay(std::size_t n, double r, double spacing, double length, double loss_factor);
double center_config_absorption_decay(std::size_t n, const MembraneSpec& membrane, double omega, double spacing,
                                      double length);

/// eta of a slab with internal phase theta_0 at its left face.
double coupling_efficiency(double index, double extinction, double thickness, double wavelength, double theta0,
                           double zpf);

struct MaxEfficiency {
    double eta_max = 0.0;
    bool strong_coupling_possible = false;  ///< eta_max > 1
};

MaxEfficiency max_coupling_efficiency(double index, double extinction, double thickness, double wavelength,
                                      double zpf);

/// Internal phases theta_0 in [0, pi) at which eta peaks.
std::array<double, 2> peak_efficiency_phases(double index, double thickness, double wavelength);

/// Coupling, absorption and efficiency versus internal phase at fixed outside intensity I_- (arbitrary units).
struct PhaseResponse {
    double coupling = 0.0;
    double absorption = 0.0;
    double efficiency = 0.0;
};
PhaseResponse efficiency_phase_response(double index, double thickness, double wavelength, double theta0);

/// C0 = 4 g^2 / (kappa Gamma_m).
double cooperativity(double g_collective, double kappa_total, double mechanical_damping);

struct CooperativityEnhancement {
    double finite = 0.0;      ///< C0 / C1 at the given N
    double saturation = 0.0;  ///< N -> infinity value (r/2)(T/loss)(L/l)
};

CooperativityEnhancement cooperativity_enhancement(std::size_t n, double r, double spacing, double length,
                                                   double transmission, double loss_factor);

struct ThinScattererFigures {
    double g0 = 0.0;
    double kappa_absorption = 0.0;
    std::optional<double> eta;  ///< empty at a field node or without absorption
    double reflection = 0.0;
    double absorption = 0.0;
    bool strong_coupling_possible = false;
    bool at_node = false;  ///< vanishing decay rate is unphysical here
};

ThinScattererFigures thin_scatterer_figures(double zeta, double zeta_imag, double phase_left, double zpf,
                                            double wavelength, double omega, double length,
                                            double weighted_intensity);

/// Strong-coupling condition A/R < 4 pi q_zpf / lambda.
bool thin_strong_coupling_possible(double reflection, double absorption, double zpf, double wavelength);

struct DecayBreakdown {
    double kappa_mirror = 0.0;
    std::vector<double> kappa_absorption;
    double kappa_total = 0.0;
    double kappa_empty = 0.0;  ///< T c / L with T the mean mirror transmission
};

/// Decay rates of config evaluated on the profile of its lossless copy.
DecayBreakdown decay_breakdown(const FieldProfile& profile, const CavityConfig& config);

struct EfficiencyReport {
    std::vector<double> eta;
    double eta_max = 0.0;
    bool strong_coupling_possible = false;
};

/// Per-membrane |g| / kappa_sigma and the slab bound; all membranes must be absorptive slabs.
EfficiencyReport efficiency_report(const FieldProfile& profile, const CavityConfig& config);

}  // namespace cavity
