/**
 * Domain value types for a one-dimensional cavity holding an ordered array of
 * dielectric membranes.
 *
 * Conventions used throughout the library:
 *   - SI units (meters, rad/s). The z axis runs along the cavity with the
 *     origin at the cavity center; mirrors sit at z = -L/2 and z = +L/2.
 *   - Time dependence exp(-i omega t). A field in a uniform region is written
 *     E(z) = a exp(+i k z') + b exp(-i k z'), z' measured from a reference
 *     plane; (a, b) are the right- and left-moving amplitudes at that plane.
 *   - A membrane's amplitude reflectivity r exp(i theta_r) is the reflection
 *     for incidence from the left, referenced to the membrane's left face.
 */
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cavity {

/// Homogeneous dielectric slab with complex index n + i n_imag.
struct Slab {
    double index = 2.0;
    double extinction = 0.0;
    double thickness = 50e-9;
};

/// Zero-thickness scatterer with complex polarizability zeta + i zeta_imag.
struct ThinScatterer {
    double polarizability = 0.0;
    double polarizability_imag = 0.0;
};

/// One optical element of the array.
struct MembraneSpec {
    std::variant<Slab, ThinScatterer> body;
    double zpf = 1e-15;  ///< zero-point fluctuation amplitude (m)

    static MembraneSpec slab(double index, double extinction, double thickness, double zpf = 1e-15) {
        return {Slab{index, extinction, thickness}, zpf};
    }
    static MembraneSpec thin(double zeta, double zeta_imag = 0.0, double zpf = 1e-15) {
        return {ThinScatterer{zeta, zeta_imag}, zpf};
    }

    [[nodiscard]] bool is_slab() const { return std::holds_alternative<Slab>(body); }
    [[nodiscard]] bool is_thin() const { return std::holds_alternative<ThinScatterer>(body); }
    [[nodiscard]] const Slab& as_slab() const;
    [[nodiscard]] const ThinScatterer& as_thin() const;
    [[nodiscard]] double thickness() const { return is_slab() ? as_slab().thickness : 0.0; }
    [[nodiscard]] bool lossless() const;
    /// Same element with absorption removed.
    [[nodiscard]] MembraneSpec without_loss() const;
};

struct MirrorSpec {
    enum class Model { perfect, partial };
    Model model = Model::perfect;
    double transmission = 0.0;

    static MirrorSpec perfect() { return {}; }
    static MirrorSpec partial(double transmission) { return {Model::partial, transmission}; }
    [[nodiscard]] bool is_perfect() const { return model == Model::perfect; }
};

struct PlacedMembrane {
    MembraneSpec spec;
    double position = 0.0;  ///< center-of-mass coordinate (m)
};

struct CavityConfig {
    double wavelength = 1064e-9;  ///< design wavelength (m)
    double length = 0.0;          ///< mirror-to-mirror distance L (m)
    MirrorSpec mirror_left;
    MirrorSpec mirror_right;
    std::vector<PlacedMembrane> membranes;

    [[nodiscard]] double design_omega() const;
    [[nodiscard]] std::size_t size() const { return membranes.size(); }
    [[nodiscard]] bool lossless() const;
    /// Perfect mirrors and absorption-free membranes at the same positions.
    [[nodiscard]] CavityConfig lossless_copy() const;
};

struct Violation {
    enum class Severity { error, warning };
    std::string field;
    std::string message;
    Severity severity = Severity::error;
};

/// One uniform region of a resonant mode, left to right.
struct Region {
    double length = 0.0;
    double intensity = 0.0;  ///< dimensionless regional intensity I_i
    double phase = 0.0;      ///< standing-wave phase theta_i at the region's left boundary
    double index = 1.0;      ///< real refractive index of the region
    bool interior = false;   ///< true inside a slab membrane
};

/// Region indices bordering membrane i.
struct MembraneRegions {
    std::size_t left = 0;
    std::size_t right = 0;
    std::optional<std::size_t> interior;
};

/**
 * Regional intensities, phases and absolute intensity of one resonant mode.
 *
 * Within region i the field is sqrt(A I_i) cos(n k (z - z_i) + theta_i) / n,
 * so I_i is the energy-weighted intensity. Intensities sum to one and
 * A = [sum I_i L_i / L]^{-1}.
 */
struct FieldProfile {
    double omega = 0.0;
    double cavity_length = 0.0;
    double absolute_intensity = 0.0;
    bool thin_normalized = false;  ///< A excludes intra-membrane regions
    std::vector<Region> regions;
    std::vector<MembraneRegions> membranes;

    [[nodiscard]] double intensity_left(std::size_t i) const { return regions.at(membranes.at(i).left).intensity; }
    [[nodiscard]] double intensity_right(std::size_t i) const { return regions.at(membranes.at(i).right).intensity; }
    [[nodiscard]] double intensity_sum() const;
    /// A * sum(I_i L_i)/L over the regions counted by the normalization.
    [[nodiscard]] double normalization_residual() const;
};

/// Collective displacement q_i = a_i u + b_i.
struct CollectiveMode {
    std::vector<double> weights;
    std::vector<double> offsets;
    double zpf = 1e-15;

    [[nodiscard]] double weight_norm_squared() const;
};

enum class Provenance { analytic, numeric };

struct FiguresOfMerit {
    std::vector<double> g_individual;
    double g_collective = 0.0;
    double kappa_mirror = 0.0;
    double kappa_absorption = 0.0;
    double eta = 0.0;
    std::optional<double> cooperativity;
    Provenance provenance = Provenance::analytic;
};

}  // namespace cavity
