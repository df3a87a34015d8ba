#include "cavity/constants.hpp"
#include "cavity/core.hpp"
#include "cavity/coupling.hpp"
#include "cavity/errors.hpp"
#include "cavity/loss.hpp"
#include "cavity/tmm.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

using namespace cavity;

namespace {

constexpr double kLambda = 1064e-9;
constexpr double kZpf = 1e-15;

double left_phase(const FieldProfile& p, std::size_t membrane) {
    const Region& reg = p.regions[p.membranes[membrane].left];
    return reg.phase + reg.index * p.omega * reg.length / kSpeedOfLight;
}

}  // namespace

TEST_CASE("mirror decay") {
    const double t = 5e-5;
    SUBCASE("empty cavity") {
        CavityConfig c;
        c.length = 0.01;
        const FieldProfile p = field_profile(c, 7.0 * kPi * kSpeedOfLight / c.length);
        CHECK(mirror_decay(p, t) == doctest::Approx(t * kSpeedOfLight / c.length).epsilon(1e-14));
        CHECK(mirror_decay(p, t, 0.0) == doctest::Approx(0.5 * t * kSpeedOfLight / c.length).epsilon(1e-14));
        CHECK(center_config_mirror_decay(0, 0.5, 1e-6, c.length, t) ==
              doctest::Approx(t * kSpeedOfLight / c.length).epsilon(1e-14));
    }
    SUBCASE("closed form equals the profile expression") {
        for (std::size_t n : {2u, 4u, 8u}) {
            const double l = 0.4e-6, len = 1e3 * l;
            const FieldProfile p = ideal_center_profile(n, 0.5, l, len, angular_frequency(kLambda));
            CHECK(std::fabs(mirror_decay(p, t) / center_config_mirror_decay(n, 0.5, l, len, t) - 1.0) <= 1e-12);
        }
    }
    SUBCASE("monotone suppression") {
        double previous = center_config_mirror_decay(0, 0.5, 1.0, 1e3, t);
        for (std::size_t n = 2; n <= 30; n += 2) {
            const double k = center_config_mirror_decay(n, 0.5, 1.0, 1e3, t);
            CHECK(k < previous);
            previous = k;
        }
    }
}

TEST_CASE("absorption") {
    SUBCASE("geometric factor") {
        CHECK(absorption_geometric_factor(0.0, 0.7) == 0.0);
        for (double th : {0.0, 0.3, 1.9}) CHECK(absorption_geometric_factor(kPi, th) == doctest::Approx(kPi / 2));
    }
    SUBCASE("slab absorption is the integrated intra-membrane intensity") {
        // Direct quadrature of n^2 |E|^2 inside the slab for a field cos(n k z + theta) / n.
        const double n = 2.0, w = angular_frequency(kLambda), d = 80e-9;
        const double phi = n * w * d / kSpeedOfLight;
        for (double th : {0.0, 0.8, 2.2}) {
            const int steps = 20000;
            double sum = 0.0;
            for (int j = 0; j < steps; ++j) {
                const double x = phi * (j + 0.5) / steps;
                sum += std::cos(x + th) * std::cos(x + th);
            }
            CHECK(absorption_geometric_factor(phi, th) == doctest::Approx(sum * phi / steps).epsilon(1e-7));
        }
    }
    SUBCASE("zero extinction gives zero rate and thin kinds are rejected") {
        const CavityConfig c = build_center_array(2, slab_from_reflectivity(0.5, 2.0, 0.0, kLambda), kLambda, 2, 50);
        const FieldProfile p = field_profile(c, c.design_omega());
        CHECK(absorption_decay(p, 0, c.membranes[0].spec) == 0.0);
        CHECK_THROWS_AS(absorption_decay(p, 0, MembraneSpec::thin(1.0, 1e-6)), KindMismatch);
        CHECK(center_config_absorption_decay(4, 0.5, 1e-6, 1e-3, 0.0) == 0.0);
    }
    SUBCASE("center closed form against the transfer-matrix profile") {
        for (bool slab : {true, false}) {
            const MembraneSpec m = slab ? slab_from_reflectivity(0.5, 2.0, 1e-5, kLambda)
                                        : MembraneSpec::thin(thin_from_reflectivity(0.5).as_thin().polarizability, 1e-6);
            for (std::size_t n : {2u, 6u}) {
                const CavityConfig c = build_center_array(n, m, kLambda, 0, 2000);
                const double w = c.design_omega();
                const FieldProfile p = field_profile(c.lossless_copy(), w);
                double total = 0.0;
                for (std::size_t i = 0; i < n; ++i) total += membrane_absorption_decay(p, i, c.membranes[i].spec);
                const double l = c.membranes[1].position - c.membranes[0].position - m.thickness();
                const double closed = center_config_absorption_decay(n, m, w, l, c.length);
                const double gamma_half = std::pow(3.0, 0.5 * static_cast<double>(n));
                CHECK(total == doctest::Approx(closed).epsilon(gamma_half * kLambda / c.length));
            }
        }
    }
}

TEST_CASE("coupling efficiency") {
    const double n = 2.0, nt = 1e-5, d = 50e-9;
    const MaxEfficiency best = max_coupling_efficiency(n, nt, d, kLambda, kZpf);
    SUBCASE("bounded by the maximum and attained at the peak phases") {
        std::mt19937_64 rng(4);
        std::uniform_real_distribution<double> u(0.0, kPi);
        for (int k = 0; k < 1000; ++k)
            CHECK(coupling_efficiency(n, nt, d, kLambda, u(rng), kZpf) <= best.eta_max * (1 + 1e-12));
        for (double th : peak_efficiency_phases(n, d, kLambda))
            CHECK(coupling_efficiency(n, nt, d, kLambda, th, kZpf) == doctest::Approx(best.eta_max).epsilon(1e-12));
    }
    SUBCASE("zero-coupling phase") {
        const double phi = kTwoPi * n * d / kLambda;
        CHECK(coupling_efficiency(n, nt, d, kLambda, -0.5 * phi + kPi, kZpf) < 1e-12 * best.eta_max);
    }
    SUBCASE("scaling") {
        CHECK(max_coupling_efficiency(n, nt, d, kLambda, 2 * kZpf).eta_max ==
              doctest::Approx(2 * best.eta_max).epsilon(1e-14));
        CHECK(max_coupling_efficiency(n, nt / 4, d, kLambda, kZpf).eta_max ==
              doctest::Approx(4 * best.eta_max).epsilon(1e-14));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(coupling_efficiency(n, 0.0, d, kLambda, 0.3, kZpf), InvalidArgument);
        CHECK_THROWS_AS(max_coupling_efficiency(n, 1e-5, 0.0, kLambda, kZpf), InvalidArgument);
    }
    SUBCASE("phase response is proportional to the efficiency") {
        for (double th : {0.1, 0.9, 1.7, 2.8}) {
            const PhaseResponse r = efficiency_phase_response(n, d, kLambda, th);
            const double eta = coupling_efficiency(n, nt, d, kLambda, th, kZpf);
            CHECK(r.efficiency * (kZpf / kLambda) * kPi * n * n / (2.0 * nt) == doctest::Approx(eta).epsilon(1e-12));
        }
    }
    SUBCASE("silicon nitride membrane") {
        CHECK(best.eta_max >= 1.5e-3);
        CHECK(best.eta_max <= 6e-3);
        CHECK_FALSE(best.strong_coupling_possible);
        double cmax = 0.0;
        for (int k = 0; k < 100000; ++k)
            cmax = std::max(cmax, efficiency_phase_response(n, d, kLambda, kPi * k / 100000.0).coupling);
        for (double th : peak_efficiency_phases(n, d, kLambda)) {
            const double frac = efficiency_phase_response(n, d, kLambda, th).coupling / cmax;
            CHECK(frac == doctest::Approx(0.125).epsilon(0.02 / 0.125));
        }
    }
}

TEST_CASE("efficiency bound holds for arrays") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const MembraneSpec m = MembraneSpec::slab(2.0, 1e-5, 50e-9);
    const double eta_max = max_coupling_efficiency(2.0, 1e-5, 50e-9, kLambda, kZpf).eta_max;
    for (int k = 0; k < 20; ++k) {
        CavityConfig c;
        c.length = (300 + 500 * u(rng)) * kLambda;
        const std::size_t n = 1 + k % 8;
        double z = -0.45 * c.length;
        for (std::size_t i = 0; i < n; ++i) {
            z += (0.2 + 3.0 * u(rng)) * kLambda;
            c.membranes.push_back({m, z});
        }
        const double w = nearest_resonance(c.lossless_copy(), c.design_omega());
        const FieldProfile p = field_profile(c.lossless_copy(), w);
        const EfficiencyReport rep = efficiency_report(p, c);
        CHECK(rep.eta_max ==
              doctest::Approx(max_coupling_efficiency(2.0, 1e-5, 50e-9, wavelength_of(w), kZpf).eta_max).epsilon(1e-12));
        for (double e : rep.eta) CHECK(e <= rep.eta_max * (1 + 1e-9));
        std::vector<double> g;
        for (std::size_t i = 0; i < n; ++i) g.push_back(coupling_from_profile(p, i, kZpf));
        const DecayBreakdown b = decay_breakdown(p, c);
        CHECK(maximal_collective_coupling(g) / b.kappa_total <= rep.eta_max * (1 + 1e-9));
        CHECK(rep.eta_max == doctest::Approx(eta_max).epsilon(1e-3));
    }
}

TEST_CASE("decay breakdown") {
    CavityConfig c = build_center_array(4, slab_from_reflectivity(0.5, 2.0, 1e-5, kLambda), kLambda, 2, 300);
    c.mirror_left = c.mirror_right = MirrorSpec::partial(5e-5);
    const FieldProfile p = field_profile(c.lossless_copy(), c.design_omega());
    const DecayBreakdown b = decay_breakdown(p, c);
    double sum = b.kappa_mirror;
    for (double k : b.kappa_absorption) {
        CHECK(k > 0.0);
        sum += k;
    }
    CHECK(std::fabs(b.kappa_total - sum) <= 1e-12 * b.kappa_total);
    CHECK(b.kappa_empty == doctest::Approx(5e-5 * kSpeedOfLight / c.length).epsilon(1e-14));
    CHECK(b.kappa_mirror < b.kappa_empty);
    // Weak-loss rates reproduce the width of the transmission peak.
    const LinewidthMeasurement m = measure_linewidth(c, c.design_omega());
    CHECK(m.fwhm == doctest::Approx(b.kappa_total).epsilon(0.01));
}

TEST_CASE("cooperativity") {
    CHECK(cooperativity(0.0, 1.0, 1.0) == 0.0);
    CHECK(cooperativity(2.0, 3.0, 5.0) == doctest::Approx(4.0 * cooperativity(1.0, 3.0, 5.0)));
    CHECK_THROWS_AS(cooperativity(1.0, 0.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(cooperativity(1.0, 1.0, -1.0), InvalidArgument);

    SUBCASE("lossless limit is the coupling ratio squared over the mirror suppression") {
        const double l = 1.0, len = 1e3, t = 5e-5;
        for (std::size_t n : {2u, 6u}) {
            const CooperativityEnhancement e = cooperativity_enhancement(n, 0.5, l, len, t, 0.0);
            const CenterArrayAnalytics a = center_config_analytics(n, Reflectivity{0.5, 2.0}, 0.3e-6, 0.3e-3, kLambda,
                                                                   kZpf, 0.0, false);
            const double g_ratio = a.collective / a.g1;
            const double k_ratio = center_config_mirror_decay(n, 0.5, l, len, t) / (t * kSpeedOfLight / len);
            CHECK(e.finite == doctest::Approx(g_ratio * g_ratio / k_ratio).epsilon(1e-12));
            CHECK(std::isinf(e.saturation));
        }
    }
    SUBCASE("finite N approaches saturation") {
        const double loss = 1e-5 * 1.3;
        const CooperativityEnhancement big = cooperativity_enhancement(40, 0.5, 1.0, 1e3, 5e-5, loss);
        CHECK(big.finite == doctest::Approx(big.saturation).epsilon(1e-6));
        CHECK(big.saturation == doctest::Approx(0.25 * (5e-5 / loss) * 1e3).epsilon(1e-14));
    }
}

TEST_CASE("thin scatterer figures") {
    SUBCASE("reflection and absorption") {
        const ThinScattererFigures f = thin_scatterer_figures(1.0, 0.0, 0.3, kZpf, kLambda, 1e15, 0.01, 1.0);
        CHECK(f.reflection == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(f.absorption == 0.0);
        CHECK_FALSE(f.eta.has_value());
        const ThinScattererFigures node = thin_scatterer_figures(1.0, 1e-6, kPi / 2, kZpf, kLambda, 1e15, 0.01, 1.0);
        CHECK(node.at_node);
        CHECK_FALSE(node.eta.has_value());
    }
    SUBCASE("strong-coupling condition") {
        const MembraneSpec m = thin_from_reflection_absorption(0.994, 1e-7);
        const ThinScatterer& t = m.as_thin();
        const ThinScattererFigures f =
            thin_scatterer_figures(t.polarizability, t.polarizability_imag, 0.2, kZpf, kLambda, 1e15, 0.01, 1.0);
        CHECK(f.reflection == doctest::Approx(0.994).epsilon(1e-14));
        CHECK(f.absorption == doctest::Approx(1e-7).epsilon(1e-14));
        CHECK_FALSE(f.strong_coupling_possible);
        const double bound = 4.0 * kPi * kZpf / kLambda;
        CHECK(thin_strong_coupling_possible(0.9, 0.5 * bound * 0.9, kZpf, kLambda));
        CHECK_FALSE(thin_strong_coupling_possible(0.9, 1.5 * bound * 0.9, kZpf, kLambda));
    }
    SUBCASE("figures agree with the transfer-matrix profile") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int k = 0; k < 20; ++k) {
            const double zeta = -3.0 + 6.0 * u(rng), zeta_imag = 1e-6;
            CavityConfig c;
            c.length = (400 + 400 * u(rng)) * kLambda;
            c.membranes = {{MembraneSpec::thin(zeta, zeta_imag), (u(rng) - 0.5) * 0.8 * c.length}};
            const double w = nearest_resonance(c.lossless_copy(), c.design_omega());
            const FieldProfile p = field_profile(c.lossless_copy(), w);
            const double ai = p.absolute_intensity * p.intensity_left(0);
            const ThinScattererFigures f =
                thin_scatterer_figures(zeta, zeta_imag, left_phase(p, 0), kZpf, wavelength_of(w), w, c.length, ai);
            const double g = coupling_from_profile(p, 0, kZpf);
            CHECK(f.g0 == doctest::Approx(g).epsilon(1e-9));
            CHECK(f.kappa_absorption == doctest::Approx(thin_scatterer_absorption(p, 0, c.membranes[0].spec)));
            if (f.eta) CHECK(*f.eta == doctest::Approx(std::fabs(f.g0) / f.kappa_absorption).epsilon(1e-9));
        }
    }
    SUBCASE("absorption rate against the transmission linewidth") {
        CavityConfig c;
        c.length = 3000 * kLambda;
        c.mirror_left = c.mirror_right = MirrorSpec::partial(5e-5);
        c.membranes = {{MembraneSpec::thin(0.8, 1e-5), 0.1234 * c.length}};
        const double w = nearest_resonance(c.lossless_copy(), c.design_omega());
        const FieldProfile p = field_profile(c.lossless_copy(), w);
        const DecayBreakdown b = decay_breakdown(p, c);
        CHECK(b.kappa_absorption[0] > 0.1 * b.kappa_mirror);
        CHECK(measure_linewidth(c, w).fwhm == doctest::Approx(b.kappa_total).epsilon(0.01));
    }
}
