#pragma once

#include <complex>

namespace cavity {

using cplx = std::complex<double>;

/// Right- and left-moving plane-wave amplitudes at one reference plane.
struct Amplitudes {
    cplx forward;
    cplx backward;
};

/**
 * 2x2 complex matrix mapping amplitudes at the left plane of an element to the
 * amplitudes at its right plane:
 *
 *   (a_R, b_R)^T = [[m11, m12], [m21, m22]] (a_L, b_L)^T
 *
 * For a lossless symmetric element, m22 = 1/t, m12 = r/t, m21 = -r/t and
 * m11 = conj(m22), with r, t the reflection and transmission amplitudes.
 */
struct TransferMatrix {
    cplx m11{1.0, 0.0};
    cplx m12{0.0, 0.0};
    cplx m21{0.0, 0.0};
    cplx m22{1.0, 0.0};

    static constexpr TransferMatrix identity() { return {}; }

    [[nodiscard]] cplx det() const { return m11 * m22 - m12 * m21; }
    /// Reflection amplitude for incidence from the left.
    [[nodiscard]] cplx reflection_left() const { return -m21 / m22; }
    /// Transmission amplitude left to right (same medium on both sides).
    [[nodiscard]] cplx transmission_left() const { return det() / m22; }

    friend TransferMatrix operator*(const TransferMatrix& x, const TransferMatrix& y) {
        return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
                x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
    }
    friend Amplitudes operator*(const TransferMatrix& m, const Amplitudes& v) {
        return {m.m11 * v.forward + m.m12 * v.backward, m.m21 * v.forward + m.m22 * v.backward};
    }
};

}  // namespace cavity
