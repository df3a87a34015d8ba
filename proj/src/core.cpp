#include "cavity/core.hpp"

#include "cavity/constants.hpp"
#include "cavity/errors.hpp"
#include "cavity/tmm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cavity {

Reflectivity slab_reflectivity(const MembraneSpec& spec, double omega) {
    const MembraneSpec lossless = MembraneSpec::slab(spec.as_slab().index, 0.0, spec.as_slab().thickness, spec.zpf);
    const cplx rc = slab_matrix(lossless, omega).reflection_left();
    return {std::abs(rc), std::arg(rc)};
}

Reflectivity membrane_reflectivity(const MembraneSpec& spec, double omega) {
    if (spec.is_slab()) return slab_reflectivity(spec, omega);
    const double zeta = spec.as_thin().polarizability;
    const cplx rc = cplx(0.0, zeta) / cplx(1.0, -zeta);
    return {std::abs(rc), std::arg(rc)};
}

MembraneSpec thin_from_reflectivity(double r, double zpf) {
    if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("reflectivity must lie in [0, 1)");
    return MembraneSpec::thin(r / std::sqrt(1.0 - r * r), 0.0, zpf);
}

MembraneSpec slab_from_reflectivity(double r, double index, double extinction, double wavelength, double zpf) {
    if (!(index > 1.0)) throw InvalidArgument("slab index must exceed 1");
    if (!(r >= 0.0 && r < 1.0)) throw InvalidArgument("reflectivity must lie in [0, 1)");
    const double r_face = (index - 1.0) / (index + 1.0);
    const double big_r = r_face * r_face;
    const double finesse = 4.0 * big_r / ((1.0 - big_r) * (1.0 - big_r));
    const double s2 = r * r / (finesse * (1.0 - r * r));
    if (s2 > 1.0) {
        std::ostringstream os;
        os << "reflectivity " << r << " unreachable with index " << index << " (maximum "
           << (index * index - 1.0) / (index * index + 1.0) << ")";
        throw InvalidArgument(os.str());
    }
    const double phi = std::asin(std::sqrt(s2));
    return MembraneSpec::slab(index, extinction, phi * wavelength / (kTwoPi * index), zpf);
}

MembraneSpec thin_from_reflection_absorption(double reflection, double absorption, double zpf) {
    if (!(reflection >= 0.0 && reflection < 1.0)) throw InvalidArgument("reflection must lie in [0, 1)");
    if (!(absorption >= 0.0)) throw InvalidArgument("absorption must be non-negative");
    const double zeta = std::sqrt(reflection / (1.0 - reflection));
    return MembraneSpec::thin(zeta, 0.5 * absorption * (1.0 + zeta * zeta), zpf);
}

double center_array_spacing(const Reflectivity& refl, double wavelength, int spacing_index) {
    return 0.5 * wavelength * (1.5 - refl.phase / kPi + spacing_index);
}

double center_array_length(std::size_t n, const Reflectivity& refl, double spacing, double thickness,
                           double wavelength, int length_index) {
    const double nn = static_cast<double>(n);
    return (nn - 1.0) * spacing + wavelength * (1.25 - refl.phase / kTwoPi + length_index) + nn * thickness;
}

double mirror_array_spacing(const Reflectivity& refl, double wavelength, int spacing_index) {
    return wavelength * (0.75 - refl.phase / kTwoPi + spacing_index);
}

namespace {

// Vacuum region between the last membrane and the right mirror.
double mirror_side_gap(double spacing, double wavelength) {
    double gap = 0.5 * spacing - 0.125 * wavelength;
    if (gap <= 1e-3 * wavelength) gap += 0.5 * wavelength;
    return gap;
}

void check_indices(int spacing_index, int length_index) {
    if (spacing_index < 0 || length_index < 0) throw InvalidArgument("spacing and length indices must be >= 0");
}

}  // namespace

double mirror_array_length(std::size_t n, const Reflectivity& refl, double spacing, double thickness,
                           double wavelength, int length_index) {
    const double nn = static_cast<double>(n);
    const double bump = mirror_side_gap(spacing, wavelength) - (0.5 * spacing - 0.125 * wavelength);
    return (nn - 0.5) * spacing + 0.5 * wavelength * (1.75 - refl.phase / kTwoPi + length_index) +
           nn * thickness + bump;
}

CavityConfig build_center_array(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                int spacing_index, int length_index) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("center array needs an even N >= 2");
    check_indices(spacing_index, length_index);
    const Reflectivity refl = membrane_reflectivity(membrane, angular_frequency(wavelength));
    const double d = membrane.thickness();
    const double l = center_array_spacing(refl, wavelength, spacing_index);
    const double center_gap = l + 0.25 * wavelength;

    CavityConfig cfg;
    cfg.wavelength = wavelength;
    cfg.length = center_array_length(n, refl, l, d, wavelength, length_index);
    const std::size_t half = n / 2;
    std::vector<double> right(half);
    for (std::size_t j = 0; j < half; ++j)
        right[j] = 0.5 * center_gap + 0.5 * d + static_cast<double>(j) * (l + d);
    for (std::size_t j = half; j-- > 0;) cfg.membranes.push_back({membrane, -right[j]});
    for (std::size_t j = 0; j < half; ++j) cfg.membranes.push_back({membrane, right[j]});
    return cfg;
}

CavityConfig build_mirror_array(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                int spacing_index, int length_index) {
    if (n < 1) throw InvalidArgument("mirror array needs N >= 1");
    check_indices(spacing_index, length_index);
    const Reflectivity refl = membrane_reflectivity(membrane, angular_frequency(wavelength));
    const double d = membrane.thickness();
    const double l = mirror_array_spacing(refl, wavelength, spacing_index);

    CavityConfig cfg;
    cfg.wavelength = wavelength;
    cfg.length = mirror_array_length(n, refl, l, d, wavelength, length_index);
    const double last = 0.5 * cfg.length - mirror_side_gap(l, wavelength) - 0.5 * d;
    for (std::size_t j = 0; j < n; ++j)
        cfg.membranes.push_back({membrane, last - static_cast<double>(n - 1 - j) * (l + d)});
    return cfg;
}

int center_length_index_for_ratio(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                  int spacing_index, double target) {
    const Reflectivity refl = membrane_reflectivity(membrane, angular_frequency(wavelength));
    const double l = center_array_spacing(refl, wavelength, spacing_index);
    const double base = center_array_length(n, refl, l, membrane.thickness(), wavelength, 0);
    return std::max(0, static_cast<int>(std::lround((target * l - base) / wavelength)));
}

int mirror_length_index_for_ratio(std::size_t n, const MembraneSpec& membrane, double wavelength,
                                  int spacing_index, double target) {
    const Reflectivity refl = membrane_reflectivity(membrane, angular_frequency(wavelength));
    const double l = mirror_array_spacing(refl, wavelength, spacing_index);
    const double base = mirror_array_length(n, refl, l, membrane.thickness(), wavelength, 0);
    return std::max(0, static_cast<int>(std::lround((target * l - base) / (0.5 * wavelength))));
}

std::vector<Violation> validate(const CavityConfig& config) {
    std::vector<Violation> out;
    auto error = [&](std::string field, std::string message) {
        out.push_back({std::move(field), std::move(message), Violation::Severity::error});
    };
    auto name = [](std::size_t i) { return "membranes[" + std::to_string(i) + "]"; };

    if (!(config.wavelength > 0.0)) error("wavelength", "must be > 0");
    if (!(config.length > 0.0)) error("length", "must be > 0");
    if (config.wavelength > 0.0 && config.length > 0.0 && config.length < 100.0 * config.wavelength)
        out.push_back({"length", "L < 100 wavelengths; single-mode plane-wave picture is marginal",
                       Violation::Severity::warning});

    auto check_mirror = [&](const MirrorSpec& m, const std::string& field) {
        if (m.is_perfect()) {
            if (m.transmission != 0.0) error(field + ".transmission", "perfect mirror requires transmission 0");
        } else if (!(m.transmission > 0.0 && m.transmission < 0.01)) {
            error(field + ".transmission", "partial mirror requires 0 < T < 0.01");
        }
    };
    check_mirror(config.mirror_left, "mirror_left");
    check_mirror(config.mirror_right, "mirror_right");

    const double half = 0.5 * config.length;
    for (std::size_t i = 0; i < config.membranes.size(); ++i) {
        const auto& m = config.membranes[i];
        if (!(m.spec.zpf > 0.0)) error(name(i) + ".zpf", "must be > 0");
        if (m.spec.is_slab()) {
            const Slab& s = m.spec.as_slab();
            if (!(s.index > 1.0)) error(name(i) + ".index", "slab index must be > 1");
            if (!(s.thickness > 0.0)) error(name(i) + ".thickness", "must be > 0");
            if (!(s.extinction >= 0.0)) error(name(i) + ".extinction", "must be >= 0");
        } else {
            const ThinScatterer& t = m.spec.as_thin();
            if (!(t.polarizability_imag >= 0.0)) error(name(i) + ".polarizability_imag", "must be >= 0");
            if (!std::isfinite(t.polarizability)) error(name(i) + ".polarizability", "must be finite");
        }
        const double hd = 0.5 * m.spec.thickness();
        if (!(m.position - hd > -half && m.position + hd < half))
            error(name(i) + ".position", "membrane lies outside the mirrors");
        if (i + 1 < config.membranes.size()) {
            const auto& next = config.membranes[i + 1];
            if (!(next.position > m.position))
                error(name(i) + "," + name(i + 1), "positions must be strictly increasing");
            else if (m.position + hd > next.position - 0.5 * next.spec.thickness())
                error(name(i) + "," + name(i + 1), "membranes overlap");
        }
    }
    return out;
}

bool has_errors(std::span<const Violation> violations) {
    return std::any_of(violations.begin(), violations.end(),
                       [](const Violation& v) { return v.severity == Violation::Severity::error; });
}

void require_valid(const CavityConfig& config) {
    const auto violations = validate(config);
    if (!has_errors(violations)) return;
    std::ostringstream os;
    os << "invalid cavity configuration:";
    for (const auto& v : violations)
        if (v.severity == Violation::Severity::error) os << "\n  " << v.field << ": " << v.message;
    throw InvalidArgument(os.str());
}

}  // namespace cavity
