#include "cavity/coupling.hpp"

#include "cavity/constants.hpp"
#include "cavity/errors.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace cavity {

double intensity_ratio(double r, double theta_r, double phase_left) {
    if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("reflectivity must lie in [0, 1)");
    return (1.0 - 2.0 * r * std::cos(2.0 * phase_left + theta_r) + r * r) / (1.0 - r * r);
}

double absolute_intensity(std::span<const double> intensities, std::span<const double> lengths, double length) {
    if (intensities.size() != lengths.size()) throw InvalidArgument("intensity and length lists differ in size");
    double weighted = 0.0, total = 0.0;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        if (!(lengths[i] >= 0.0)) throw InvalidArgument("region lengths must be >= 0");
        weighted += intensities[i] * lengths[i];
        total += lengths[i];
    }
    if (total == 0.0) throw InvalidArgument("all region lengths are zero");
    return length / weighted;
}

double absolute_intensity(std::span<const Region> regions, double length, bool thin) {
    std::vector<double> intensities, lengths;
    for (const auto& r : regions) {
        intensities.push_back(r.intensity);
        lengths.push_back(thin && r.interior ? 0.0 : r.length);
    }
    return absolute_intensity(intensities, lengths, length);
}

FieldProfile thin_normalized(const FieldProfile& profile) {
    FieldProfile out = profile;
    out.thin_normalized = true;
    out.absolute_intensity = absolute_intensity(profile.regions, profile.cavity_length, true);
    return out;
}

double coupling_from_profile(const FieldProfile& profile, std::size_t membrane, double zpf) {
    if (membrane >= profile.membranes.size()) throw InvalidArgument("membrane index out of range");
    return zpf * profile.absolute_intensity * (profile.omega / profile.cavity_length) *
           (profile.intensity_right(membrane) - profile.intensity_left(membrane));
}

double reference_coupling(double r, double omega, double length, double zpf) {
    return zpf * 2.0 * omega * r / length;
}

double coupling_general_position(double q_over_l, double r, double omega, double length, double zpf) {
    if (!(std::fabs(q_over_l) < 0.5)) throw InvalidArgument("|q/L| must be below 1/2");
    if (!(r < 1.0)) throw InvalidArgument("reflectivity must be below 1");
    return reference_coupling(r, omega, length, zpf) / (1.0 - 2.0 * r * q_over_l);
}

double collective_coupling(std::span<const double> couplings, std::span<const double> weights) {
    if (couplings.size() != weights.size()) throw InvalidArgument("coupling and weight lists differ in size");
    const double norm = std::inner_product(weights.begin(), weights.end(), weights.begin(), 0.0);
    if (std::fabs(norm - 1.0) > 1e-12) throw InvalidArgument("weights must satisfy sum a_i^2 = 1");
    return std::inner_product(couplings.begin(), couplings.end(), weights.begin(), 0.0);
}

double maximal_collective_coupling(std::span<const double> couplings) {
    return std::sqrt(std::inner_product(couplings.begin(), couplings.end(), couplings.begin(), 0.0));
}

double center_array_denominator(std::size_t n, double r, double spacing_over_length) {
    const double gamma = (1.0 + r) / (1.0 - r);
    const double nn = static_cast<double>(n);
    return r + (std::pow(gamma, 0.5 * nn) - (r * nn + 1.0)) * spacing_over_length;
}

namespace {

// Distance of x from the nearest multiple of period.
double off_grid(double x, double period) { return std::fabs(x - period * std::round(x / period)); }

void check(double residual, double wavelength, const char* what) {
    if (residual > 1e-9 * wavelength) {
        std::ostringstream os;
        os << what << " inconsistent with the optimal geometry (off by " << residual / wavelength
           << " wavelengths)";
        throw InvalidArgument(os.str());
    }
}

void check_common(std::size_t n, const Reflectivity& refl, double spacing, double length) {
    if (!(refl.magnitude >= 0.0 && refl.magnitude < 1.0)) throw InvalidArgument("reflectivity must lie in [0, 1)");
    if (!(spacing > 0.0 && length > 0.0)) throw InvalidArgument("spacing and length must be > 0");
    if (n < 1) throw InvalidArgument("array needs at least one membrane");
}

}  // namespace

CenterArrayAnalytics center_config_analytics(std::size_t n, const Reflectivity& refl, double spacing, double length,
                                             double wavelength, double zpf, double thickness, bool check_geometry) {
    check_common(n, refl, spacing, length);
    if (n % 2 != 0) throw InvalidArgument("center array needs an even N");
    const double lam = wavelength;
    const double nn = static_cast<double>(n);
    if (check_geometry) {
        check(off_grid(spacing - 0.5 * lam * (1.5 - refl.phase / kPi), 0.5 * lam), lam, "spacing");
        check(off_grid(length - (nn - 1.0) * spacing - nn * thickness - lam * (1.25 - refl.phase / kTwoPi), lam), lam,
              "cavity length");
    }
    CenterArrayAnalytics a;
    a.n = n;
    a.r = refl.magnitude;
    a.theta_r = refl.phase;
    a.spacing = spacing;
    a.length = length;
    a.wavelength = lam;
    a.zpf = zpf;
    a.gamma = refl.gamma_max();
    const double omega = angular_frequency(lam);
    a.g1 = reference_coupling(a.r, omega, length, zpf);
    const double den = center_array_denominator(n, a.r, spacing / length);
    const double unit = 0.5 * a.g1 * (a.gamma - 1.0) / den;
    a.individual.resize(n);
    for (std::size_t i = 1; i <= n; ++i) {
        a.individual[i - 1] = i <= n / 2 ? unit * std::pow(a.gamma, static_cast<double>(i - 1))
                                         : -unit * std::pow(a.gamma, static_cast<double>(n - i));
    }
    a.collective = a.g1 * std::sqrt(0.5 * a.r) * std::sqrt(std::pow(a.gamma, nn) - 1.0) / den;
    a.saturated = std::sqrt(2.0 * a.r * a.r * a.r) * (zpf / spacing) * omega;
    return a;
}

MirrorArrayAnalytics mirror_config_analytics(std::size_t n, const Reflectivity& refl, double spacing, double length,
                                             double wavelength, double zpf, double thickness, bool check_geometry) {
    check_common(n, refl, spacing, length);
    const double lam = wavelength;
    const double nn = static_cast<double>(n);
    if (check_geometry) {
        check(off_grid(spacing - lam * (0.75 - refl.phase / kTwoPi), lam), lam, "spacing");
        check(off_grid(length - (nn - 0.5) * spacing - nn * thickness - 0.5 * lam * (1.75 - refl.phase / kTwoPi),
                       0.5 * lam),
              lam, "cavity length");
    }
    MirrorArrayAnalytics a;
    a.n = n;
    a.r = refl.magnitude;
    a.theta_r = refl.phase;
    a.spacing = spacing;
    a.length = length;
    a.wavelength = lam;
    a.zpf = zpf;
    a.gamma = refl.gamma_max();
    const double omega = angular_frequency(lam);
    a.g1 = reference_coupling(a.r, omega, length, zpf);
    const double den = a.r + 0.5 * (std::pow(a.gamma, nn) - (2.0 * a.r * nn + 1.0)) * spacing / length;
    const double unit = 0.5 * a.g1 * (a.gamma - 1.0) / den;
    a.individual.resize(n);
    for (std::size_t i = 1; i <= n; ++i) a.individual[i - 1] = unit * std::pow(a.gamma, static_cast<double>(i - 1));
    a.collective = a.g1 * 0.5 * std::sqrt(a.r) * std::sqrt(std::pow(a.gamma, 2.0 * nn) - 1.0) / den;
    a.saturated = 2.0 * std::sqrt(a.r * a.r * a.r) * (zpf / spacing) * omega;
    return a;
}

FieldProfile ideal_center_profile(std::size_t n, double r, double spacing, double length, double omega) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("center array needs an even N >= 2");
    const double gamma = (1.0 + r) / (1.0 - r);
    const double outer = 0.5 * (length - static_cast<double>(n - 1) * spacing);
    if (!(outer > 0.0)) throw InvalidArgument("array does not fit inside the cavity");
    FieldProfile p;
    p.omega = omega;
    p.cavity_length = length;
    p.thin_normalized = true;
    const std::size_t half = n / 2;
    for (std::size_t j = 0; j <= n; ++j) {
        const std::size_t level = j <= half ? j : n - j;
        Region reg;
        reg.length = (j == 0 || j == n) ? outer : spacing;
        reg.intensity = std::pow(gamma, static_cast<double>(level));
        p.regions.push_back(reg);
    }
    double sum = 0.0;
    for (const auto& reg : p.regions) sum += reg.intensity;
    for (auto& reg : p.regions) reg.intensity /= sum;
    for (std::size_t i = 0; i < n; ++i) p.membranes.push_back({i, i + 1, std::nullopt});
    p.absolute_intensity = absolute_intensity(p.regions, length, true);
    return p;
}

}  // namespace cavity
