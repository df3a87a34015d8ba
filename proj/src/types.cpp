#include "cavity/types.hpp"

#include "cavity/constants.hpp"
#include "cavity/errors.hpp"

#include <cmath>

namespace cavity {

const Slab& MembraneSpec::as_slab() const {
    if (const auto* s = std::get_if<Slab>(&body)) return *s;
    throw KindMismatch("membrane is a thin scatterer, slab expected");
}

const ThinScatterer& MembraneSpec::as_thin() const {
    if (const auto* t = std::get_if<ThinScatterer>(&body)) return *t;
    throw KindMismatch("membrane is a slab, thin scatterer expected");
}

bool MembraneSpec::lossless() const {
    return is_slab() ? as_slab().extinction == 0.0 : as_thin().polarizability_imag == 0.0;
}

MembraneSpec MembraneSpec::without_loss() const {
    MembraneSpec out = *this;
    if (auto* s = std::get_if<Slab>(&out.body)) s->extinction = 0.0;
    if (auto* t = std::get_if<ThinScatterer>(&out.body)) t->polarizability_imag = 0.0;
    return out;
}

double CavityConfig::design_omega() const { return angular_frequency(wavelength); }

bool CavityConfig::lossless() const {
    if (!mirror_left.is_perfect() || !mirror_right.is_perfect()) return false;
    for (const auto& m : membranes)
        if (!m.spec.lossless()) return false;
    return true;
}

CavityConfig CavityConfig::lossless_copy() const {
    CavityConfig out = *this;
    out.mirror_left = MirrorSpec::perfect();
    out.mirror_right = MirrorSpec::perfect();
    for (auto& m : out.membranes) m.spec = m.spec.without_loss();
    return out;
}

double FieldProfile::intensity_sum() const {
    double s = 0.0;
    for (const auto& r : regions) s += r.intensity;
    return s;
}

double FieldProfile::normalization_residual() const {
    double s = 0.0;
    for (const auto& r : regions)
        if (!(thin_normalized && r.interior)) s += r.intensity * r.length;
    return absolute_intensity * s / cavity_length;
}

double CollectiveMode::weight_norm_squared() const {
    double s = 0.0;
    for (double a : weights) s += a * a;
    return s;
}

}  // namespace cavity
