#include "cavity/loss.hpp"

#include "cavity/constants.hpp"
#include "cavity/coupling.hpp"
#include "cavity/errors.hpp"

#include <cmath>
#include <limits>

namespace cavity {

namespace {

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

double gamma_of(double r) { return (1.0 + r) / (1.0 - r); }

// Phase of the standing wave at the right end of region idx.
double phase_at_end(const FieldProfile& p, std::size_t idx) {
    const Region& reg = p.regions.at(idx);
    return reg.phase + reg.index * p.omega * reg.length / kSpeedOfLight;
}

}  // namespace

double mirror_decay(const FieldProfile& profile, double transmission) {
    return mirror_decay(profile, transmission, transmission);
}

double mirror_decay(const FieldProfile& profile, double transmission_left, double transmission_right) {
    const double first = profile.regions.front().intensity;
    const double last = profile.regions.back().intensity;
    return kSpeedOfLight / (2.0 * profile.cavity_length) * profile.absolute_intensity *
           (transmission_left * first + transmission_right * last);
}

double center_config_mirror_decay(std::size_t n, double r, double spacing, double length, double transmission) {
    return kSpeedOfLight / length * r * transmission / center_array_denominator(n, r, spacing / length);
}

double absorption_geometric_factor(double phi, double theta) {
    return 0.5 * (phi + std::sin(phi) * std::cos(2.0 * theta + phi));
}

double slab_chi(double index, const Reflectivity& refl, double phi) {
    const double inv2 = 1.0 / (index * index);
    return phi * ((1.0 + inv2) + refl.magnitude * (1.0 - inv2) * std::cos(refl.phase)) +
           2.0 * refl.magnitude / index * std::sin(refl.phase);
}

double absorption_decay(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec) {
    const Slab& s = spec.as_slab();
    if (membrane >= profile.membranes.size()) throw InvalidArgument("membrane index out of range");
    const auto interior = profile.membranes[membrane].interior;
    if (!interior) throw InvalidArgument("profile has no interior region for this membrane");
    const Region& in = profile.regions[*interior];
    const double phi = s.index * profile.omega * s.thickness / kSpeedOfLight;
    return 4.0 * s.extinction * kSpeedOfLight / (s.index * s.index * profile.cavity_length) *
           profile.absolute_intensity * in.intensity * absorption_geometric_factor(phi, in.phase);
}

double thin_scatterer_absorption(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec) {
    const ThinScatterer& t = spec.as_thin();
    if (membrane >= profile.membranes.size()) throw InvalidArgument("membrane index out of range");
    const std::size_t left = profile.membranes[membrane].left;
    const double c = std::cos(phase_at_end(profile, left));
    return profile.absolute_intensity * profile.regions[left].intensity * (kSpeedOfLight / profile.cavity_length) *
           4.0 * t.polarizability_imag * c * c;
}

double membrane_absorption_decay(const FieldProfile& profile, std::size_t membrane, const MembraneSpec& spec) {
    return spec.is_slab() ? absorption_decay(profile, membrane, spec)
                          : thin_scatterer_absorption(profile, membrane, spec);
}

double absorption_factor(const MembraneSpec& spec, double omega) {
    if (spec.is_thin()) {
        const ThinScatterer& t = spec.as_thin();
        return 2.0 * t.polarizability_imag / (1.0 + t.polarizability * t.polarizability);
    }
    const Slab& s = spec.as_slab();
    const double phi = s.index * omega * s.thickness / kSpeedOfLight;
    return s.extinction * slab_chi(s.index, slab_reflectivity(spec, omega), phi);
}

double center_config_absorption_decay(std::size_t n, double r, double spacing, double length, double loss_factor) {
    const double rise = std::pow(gamma_of(r), 0.5 * static_cast<double>(n)) - 1.0;
    return kSpeedOfLight / length * loss_factor * rise / center_array_denominator(n, r, spacing / length);
}

double center_config_absorption_decay(std::size_t n, const MembraneSpec& membrane, double omega, double spacing,
                                      double length) {
    const double r = membrane_reflectivity(membrane, omega).magnitude;
    return center_config_absorption_decay(n, r, spacing, length, absorption_factor(membrane, omega));
}

double coupling_efficiency(double index, double extinction, double thickness, double wavelength, double theta0,
                           double zpf) {
    if (!(extinction > 0.0)) throw InvalidArgument("coupling efficiency is infinite without absorption");
    const double phi = kTwoPi * index * thickness / wavelength;
    const double s = sinc(phi);
    const double x = 2.0 * theta0 + phi;
    return (zpf / wavelength) * kPi * (index * index - 1.0) / extinction * std::fabs(s * std::sin(x)) /
           (1.0 + s * std::cos(x));
}

MaxEfficiency max_coupling_efficiency(double index, double extinction, double thickness, double wavelength,
                                      double zpf) {
    if (!(extinction > 0.0)) throw InvalidArgument("coupling efficiency is infinite without absorption");
    if (!(thickness > 0.0)) throw InvalidArgument("maximal efficiency is singular at zero thickness");
    const double s = sinc(kTwoPi * index * thickness / wavelength);
    MaxEfficiency m;
    m.eta_max = (zpf / wavelength) * kPi * (index * index - 1.0) / extinction * std::fabs(s) / std::sqrt(1.0 - s * s);
    m.strong_coupling_possible = m.eta_max > 1.0;
    return m;
}

std::array<double, 2> peak_efficiency_phases(double index, double thickness, double wavelength) {
    const double phi = kTwoPi * index * thickness / wavelength;
    const double x = std::acos(-sinc(phi));
    std::array<double, 2> out{0.5 * (x - phi), 0.5 * (-x - phi)};
    for (double& t : out) t -= kPi * std::floor(t / kPi);
    if (out[0] > out[1]) std::swap(out[0], out[1]);
    return out;
}

PhaseResponse efficiency_phase_response(double index, double thickness, double wavelength, double theta0) {
    const double phi = kTwoPi * index * thickness / wavelength;
    const double c = std::cos(theta0), s = std::sin(theta0);
    // I_0 relative to the outside intensity I_- on the left face.
    const double inside = 1.0 / (c * c / (index * index) + s * s);
    PhaseResponse p;
    p.coupling = inside * (1.0 - 1.0 / (index * index)) * std::fabs(std::sin(phi) * std::sin(2.0 * theta0 + phi));
    p.absorption = inside * absorption_geometric_factor(phi, theta0);
    p.efficiency = p.coupling / p.absorption;
    return p;
}

double cooperativity(double g_collective, double kappa_total, double mechanical_damping) {
    if (!(kappa_total > 0.0 && mechanical_damping > 0.0))
        throw InvalidArgument("cooperativity needs positive decay and damping rates");
    return 4.0 * g_collective * g_collective / (kappa_total * mechanical_damping);
}

CooperativityEnhancement cooperativity_enhancement(std::size_t n, double r, double spacing, double length,
                                                   double transmission, double loss_factor) {
    const double gamma = gamma_of(r);
    const double nn = static_cast<double>(n);
    const double den = center_array_denominator(n, r, spacing / length);
    CooperativityEnhancement e;
    e.finite = 0.5 * r * transmission / (r * transmission + loss_factor * (std::pow(gamma, 0.5 * nn) - 1.0)) *
               (std::pow(gamma, nn) - 1.0) / den;
    e.saturation = loss_factor > 0.0 ? 0.5 * r * (transmission / loss_factor) * (length / spacing)
                                     : std::numeric_limits<double>::infinity();
    return e;
}

bool thin_strong_coupling_possible(double reflection, double absorption, double zpf, double wavelength) {
    if (!(reflection > 0.0)) return false;
    return absorption / reflection < 4.0 * kPi * zpf / wavelength;
}

ThinScattererFigures thin_scatterer_figures(double zeta, double zeta_imag, double phase_left, double zpf,
                                            double wavelength, double omega, double length,
                                            double weighted_intensity) {
    ThinScattererFigures f;
    const double c = std::cos(phase_left), s = std::sin(phase_left);
    f.g0 = zpf * weighted_intensity * (omega / length) * 4.0 * zeta * (zeta * c * c + s * c);
    f.kappa_absorption = weighted_intensity * (kSpeedOfLight / length) * 4.0 * zeta_imag * c * c;
    f.reflection = zeta * zeta / (1.0 + zeta * zeta);
    f.absorption = 2.0 * zeta_imag / (1.0 + zeta * zeta);
    f.strong_coupling_possible = thin_strong_coupling_possible(f.reflection, f.absorption, zpf, wavelength);
    f.at_node = std::fabs(c) < 1e-12;
    if (!f.at_node && zeta_imag > 0.0)
        f.eta = kTwoPi * (zpf / wavelength) * std::fabs(zeta * (zeta + s / c)) / zeta_imag;
    return f;
}

DecayBreakdown decay_breakdown(const FieldProfile& profile, const CavityConfig& config) {
    if (profile.membranes.size() != config.size()) throw InvalidArgument("profile and configuration differ");
    DecayBreakdown d;
    const double tl = config.mirror_left.transmission, tr = config.mirror_right.transmission;
    d.kappa_mirror = mirror_decay(profile, tl, tr);
    d.kappa_total = d.kappa_mirror;
    for (std::size_t i = 0; i < config.size(); ++i) {
        const double k = membrane_absorption_decay(profile, i, config.membranes[i].spec);
        d.kappa_absorption.push_back(k);
        d.kappa_total += k;
    }
    d.kappa_empty = 0.5 * (tl + tr) * kSpeedOfLight / config.length;
    return d;
}

EfficiencyReport efficiency_report(const FieldProfile& profile, const CavityConfig& config) {
    if (profile.membranes.size() != config.size() || config.size() == 0)
        throw InvalidArgument("profile and configuration differ");
    EfficiencyReport rep;
    const double wavelength = kTwoPi * kSpeedOfLight / profile.omega;
    const MembraneSpec& first = config.membranes.front().spec;
    const Slab& s0 = first.as_slab();
    const MaxEfficiency m = max_coupling_efficiency(s0.index, s0.extinction, s0.thickness, wavelength, first.zpf);
    rep.eta_max = m.eta_max;
    rep.strong_coupling_possible = m.strong_coupling_possible;
    for (std::size_t i = 0; i < config.size(); ++i) {
        const MembraneSpec& spec = config.membranes[i].spec;
        const double g = std::fabs(coupling_from_profile(profile, i, spec.zpf));
        rep.eta.push_back(g / absorption_decay(profile, i, spec));
    }
    return rep;
}

}  // namespace cavity
