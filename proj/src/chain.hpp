// Walks a cavity from the left mirror to the right mirror one region at a time.
// Vacuum phases are accumulated in long double and reduced mod 2 pi before the
// complex exponential, so frequency offsets far below ulp(omega) stay visible.
#pragma once

#include "cavity/constants.hpp"
#include "cavity/transfer_matrix.hpp"
#include "cavity/types.hpp"

#include <cmath>
#include <numbers>

namespace cavity::detail {

inline constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

inline TransferMatrix vacuum_step(long double k, long double length) {
    const long double phase = std::fmod(k * length, kTwoPiL);
    const double c = static_cast<double>(std::cos(phase));
    const double s = static_cast<double>(std::sin(phase));
    return {cplx(c, s), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(c, -s)};
}

inline TransferMatrix interface_step(cplx n1, cplx n2) {
    const cplx inv = 1.0 / (2.0 * n2);
    return {(n2 + n1) * inv, (n2 - n1) * inv, (n2 - n1) * inv, (n2 + n1) * inv};
}

inline TransferMatrix medium_step(cplx index, double omega, double length) {
    const cplx phase = index * (omega * length / kSpeedOfLight);
    const cplx e = std::exp(cplx(0.0, 1.0) * phase);
    const cplx einv = std::exp(cplx(0.0, -1.0) * phase);
    return {e, cplx(0.0, 0.0), cplx(0.0, 0.0), einv};
}

inline TransferMatrix thin_step(const ThinScatterer& t) {
    const double z = t.polarizability;
    const double zi = t.polarizability_imag;
    return {cplx(1.0 - zi, z), cplx(-zi, z), cplx(zi, -z), cplx(1.0 + zi, -z)};
}

/// Parts of a slab: entry interface, interior propagation, exit interface.
struct SlabSteps {
    TransferMatrix enter;
    TransferMatrix inside;
    TransferMatrix leave;
    cplx index;
};

inline SlabSteps slab_steps(const Slab& s, double omega) {
    const cplx m(s.index, s.extinction);
    const cplx one(1.0, 0.0);
    return {interface_step(one, m), medium_step(m, omega, s.thickness), interface_step(m, one), m};
}

/// Calls on_region(start_amplitudes, length, index, interior) for every region
/// and returns the amplitudes at the right mirror.
template <class OnRegion>
Amplitudes walk(const CavityConfig& cfg, long double k, Amplitudes v, OnRegion&& on_region) {
    const double omega = static_cast<double>(k * static_cast<long double>(kSpeedOfLight));
    long double z = -0.5L * static_cast<long double>(cfg.length);
    for (const auto& m : cfg.membranes) {
        const long double hd = 0.5L * static_cast<long double>(m.spec.thickness());
        const long double face = static_cast<long double>(m.position) - hd;
        on_region(v, static_cast<double>(face - z), cplx(1.0, 0.0), false);
        v = vacuum_step(k, face - z) * v;
        if (m.spec.is_slab()) {
            const SlabSteps st = slab_steps(m.spec.as_slab(), omega);
            v = st.enter * v;
            on_region(v, m.spec.thickness(), st.index, true);
            v = st.leave * (st.inside * v);
        } else {
            v = thin_step(m.spec.as_thin()) * v;
        }
        z = static_cast<long double>(m.position) + hd;
    }
    const long double tail = 0.5L * static_cast<long double>(cfg.length) - z;
    on_region(v, static_cast<double>(tail), cplx(1.0, 0.0), false);
    return vacuum_step(k, tail) * v;
}

/// Product of every region and element matrix between the mirrors.
inline TransferMatrix chain_matrix(const CavityConfig& cfg, long double k) {
    const double omega = static_cast<double>(k * static_cast<long double>(kSpeedOfLight));
    TransferMatrix total;
    long double z = -0.5L * static_cast<long double>(cfg.length);
    for (const auto& m : cfg.membranes) {
        const long double hd = 0.5L * static_cast<long double>(m.spec.thickness());
        const long double face = static_cast<long double>(m.position) - hd;
        total = vacuum_step(k, face - z) * total;
        if (m.spec.is_slab()) {
            const SlabSteps st = slab_steps(m.spec.as_slab(), omega);
            total = st.leave * (st.inside * (st.enter * total));
        } else {
            total = thin_step(m.spec.as_thin()) * total;
        }
        z = static_cast<long double>(m.position) + hd;
    }
    return vacuum_step(k, 0.5L * static_cast<long double>(cfg.length) - z) * total;
}

inline TransferMatrix partial_mirror(double transmission) {
    const double st = std::sqrt(transmission);
    const double sr = std::sqrt(1.0 - transmission);
    return {cplx(0.0, 1.0 / st), cplx(0.0, sr / st), cplx(0.0, -sr / st), cplx(0.0, -1.0 / st)};
}

}  // namespace cavity::detail
