#include "cavity/tmm.hpp"

#include "cavity/constants.hpp"
#include "cavity/core.hpp"
#include "cavity/errors.hpp"
#include "cavity/kernels.hpp"
#include "chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cavity {

TransferMatrix propagation_matrix(double length, double omega, cplx index) {
    if (!(length >= 0.0)) throw InvalidArgument("propagation length must be >= 0");
    return detail::medium_step(index, omega, length);
}

TransferMatrix slab_matrix(const MembraneSpec& spec, double omega) {
    const detail::SlabSteps st = detail::slab_steps(spec.as_slab(), omega);
    return st.leave * st.inside * st.enter;
}

TransferMatrix thin_scatterer_matrix(const MembraneSpec& spec) { return detail::thin_step(spec.as_thin()); }

TransferMatrix membrane_matrix(const MembraneSpec& spec, double omega) {
    return spec.is_slab() ? slab_matrix(spec, omega) : thin_scatterer_matrix(spec);
}

MirrorBoundary mirror_matrix(const MirrorSpec& spec) {
    if (spec.is_perfect()) return {};
    const double t = spec.transmission;
    if (!(t > 0.0 && t < 1.0)) throw InvalidArgument("mirror transmission must lie in (0, 1)");
    return {false, detail::partial_mirror(t), cplx(-std::sqrt(1.0 - t), 0.0)};
}

TransferMatrix assemble(const CavityConfig& config, double omega) {
    require_valid(config);
    return detail::chain_matrix(config, static_cast<long double>(omega) / static_cast<long double>(kSpeedOfLight));
}

double free_spectral_range(const CavityConfig& config) { return kPi * kSpeedOfLight / config.length; }

double default_scan_step(const CavityConfig& config, const SolverOptions& options) {
    return free_spectral_range(config) / (options.scan_density * static_cast<double>(config.size() + 1));
}

namespace {

void require_lossless(const CavityConfig& config) {
    if (!config.lossless())
        throw InvalidArgument(
            "resonance solver needs perfect mirrors and lossless membranes; use transmission_spectrum for lossy "
            "systems");
}

long double bisect(const CavityConfig& cfg, long double base, long double lo, long double hi, double flo) {
    for (int it = 0; it < 200; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = kernels::residual_at(cfg, base, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5L * (lo + hi);
}

// Roots of the residual in [lo, hi] (offsets from base), scanned with at most the given step.
std::vector<long double> roots_in(const CavityConfig& cfg, long double base, long double lo, long double hi,
                                  long double step) {
    const auto cells = static_cast<std::size_t>(std::max(1.0L, std::ceil((hi - lo) / step)));
    std::vector<long double> offsets(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i)
        offsets[i] = lo + (hi - lo) * static_cast<long double>(i) / static_cast<long double>(cells);
    std::vector<double> f(cells + 1);
    kernels::residual_grid(cfg, base, offsets, f);

    std::vector<std::size_t> brackets;
    std::vector<long double> roots(cells + 1, std::numeric_limits<long double>::quiet_NaN());
    for (std::size_t i = 0; i <= cells; ++i) {
        if (f[i] == 0.0) roots[i] = offsets[i];
        else if (i < cells && (f[i] < 0.0) != (f[i + 1] < 0.0) && f[i + 1] != 0.0) brackets.push_back(i);
    }
    const auto nb = static_cast<std::ptrdiff_t>(brackets.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t b = 0; b < nb; ++b) {
        const std::size_t i = brackets[b];
        roots[i] = bisect(cfg, base, offsets[i], offsets[i + 1], f[i]);
    }
    std::vector<long double> out;
    for (long double r : roots)
        if (!std::isnan(r)) out.push_back(r);
    return out;
}

// Root offset nearest to `center`, searching outward from a small window.
long double nearest_root(const CavityConfig& cfg, long double base, long double center, long double window,
                         long double step, long double limit) {
    for (long double w = window;; w *= 4.0L) {
        const auto roots = roots_in(cfg, base, center - w, center + w, std::min(step, w / 8.0L));
        if (!roots.empty()) {
            return *std::min_element(roots.begin(), roots.end(), [&](long double a, long double b) {
                return std::fabs(a - center) < std::fabs(b - center);
            });
        }
        if (w > limit) throw SolverFailure("no resonance found near the requested frequency");
    }
}

}  // namespace

double resonance_residual(const CavityConfig& config, double omega) {
    require_lossless(config);
    return kernels::residual_at(config, static_cast<long double>(omega), 0.0L);
}

ResonanceSearch find_resonances(const CavityConfig& config, double omega_min, double omega_max,
                                const SolverOptions& options) {
    require_valid(config);
    require_lossless(config);
    if (!(omega_min < omega_max)) throw InvalidArgument("empty frequency window");
    ResonanceSearch out;
    out.scan_step = default_scan_step(config, options);
    const long double base = omega_min;
    const auto roots =
        roots_in(config, base, 0.0L, static_cast<long double>(omega_max) - base, out.scan_step);
    for (long double r : roots) out.roots.push_back(static_cast<double>(base + r));
    for (std::size_t i = 1; i < out.roots.size(); ++i) {
        if (out.roots[i] - out.roots[i - 1] < 4.0 * out.scan_step) {
            std::ostringstream os;
            os << "scan too coarse: resonances at " << out.roots[i - 1] << " and " << out.roots[i]
               << " rad/s are closer than 4 scan steps";
            out.warnings.push_back(os.str());
        }
    }
    return out;
}

namespace {

// A frequency is a mode when the residual is below tolerance or changes sign within a few ulps:
// in high-finesse arrays the residual slope is so steep that the nearest double misses the tolerance.
void require_mode(const CavityConfig& config, double omega, const SolverOptions& options) {
    const long double base = omega;
    const double residual = kernels::residual_at(config, base, 0.0L);
    if (std::fabs(residual) <= options.mode_residual_tol) return;
    const long double ulps = 4.0L * (std::nextafter(omega, std::numeric_limits<double>::infinity()) - omega);
    const double below = kernels::residual_at(config, base, -ulps);
    const double above = kernels::residual_at(config, base, ulps);
    if ((below <= 0.0) != (above <= 0.0)) return;
    std::ostringstream os;
    os << "omega = " << omega << " rad/s is not a resonance (residual " << residual << ")";
    throw NotAMode(os.str());
}

}  // namespace

double nearest_resonance(const CavityConfig& config, double omega_guess, const SolverOptions& options) {
    require_lossless(config);
    const long double step = default_scan_step(config, options);
    const long double base = omega_guess;
    return static_cast<double>(base + nearest_root(config, base, 0.0L, step / 8.0L, step,
                                                   static_cast<long double>(free_spectral_range(config))));
}

FieldProfile field_profile(const CavityConfig& config, double omega, const SolverOptions& options) {
    require_valid(config);
    require_lossless(config);
    require_mode(config, omega, options);

    FieldProfile p;
    p.omega = omega;
    p.cavity_length = config.length;
    const long double k = static_cast<long double>(omega) / static_cast<long double>(kSpeedOfLight);
    detail::walk(config, k, Amplitudes{cplx(0.0, 1.0), cplx(0.0, -1.0)},
                 [&](const Amplitudes& v, double length, cplx index, bool interior) {
                     const double n = index.real();
                     Region r;
                     r.length = length;
                     r.intensity = n * n * (std::norm(v.forward) + std::norm(v.backward));
                     r.phase = 0.5 * std::arg(v.forward * std::conj(v.backward));
                     r.index = n;
                     r.interior = interior;
                     p.regions.push_back(r);
                 });

    double sum = 0.0;
    for (const auto& r : p.regions) sum += r.intensity;
    double weighted = 0.0;
    for (auto& r : p.regions) {
        r.intensity /= sum;
        weighted += r.intensity * r.length;
    }
    p.absolute_intensity = config.length / weighted;

    std::size_t idx = 0;
    for (const auto& m : config.membranes) {
        MembraneRegions mr;
        mr.left = idx++;
        if (m.spec.is_slab()) mr.interior = idx++;
        mr.right = idx;
        p.membranes.push_back(mr);
    }
    return p;
}

namespace {

Spectrum spectrum_common(const CavityConfig& config, std::span<const double> grid, bool parallel) {
    require_valid(config);
    Spectrum s;
    s.omega.assign(grid.begin(), grid.end());
    s.transmission.assign(grid.size(), 0.0);
    if (config.mirror_left.is_perfect() || config.mirror_right.is_perfect())
        s.warnings.emplace_back("perfect mirror present: transmission is zero everywhere");
    if (parallel) kernels::transmission_grid(config, grid, s.transmission);
    else kernels::transmission_grid_serial(config, grid, s.transmission);
    return s;
}

// Tangent at point k for monotone cubic interpolation, before interval limiting.
double raw_tangent(const std::vector<double>& x, const std::vector<double>& y, std::size_t k) {
    const std::size_t n = x.size();
    auto secant = [&](std::size_t j) { return (y[j + 1] - y[j]) / (x[j + 1] - x[j]); };
    if (k == 0) return secant(0);
    if (k + 1 == n) return secant(n - 2);
    const double a = secant(k - 1), b = secant(k);
    if (a * b <= 0.0) return 0.0;
    return 0.5 * (a + b);
}

// Location of y = level inside interval [j, j+1] using a Fritsch-Carlson limited Hermite cubic.
double cross_level(const std::vector<double>& x, const std::vector<double>& y, std::size_t j, double level) {
    const double h = x[j + 1] - x[j];
    const double delta = (y[j + 1] - y[j]) / h;
    double m0 = raw_tangent(x, y, j), m1 = raw_tangent(x, y, j + 1);
    if (delta == 0.0) {
        m0 = m1 = 0.0;
    } else {
        const double a = m0 / delta, b = m1 / delta;
        if (a < 0.0) m0 = 0.0;
        if (b < 0.0) m1 = 0.0;
        const double s = a * a + b * b;
        if (s > 9.0) {
            const double tau = 3.0 / std::sqrt(s);
            m0 = tau * a * delta;
            m1 = tau * b * delta;
        }
    }
    auto hermite = [&](double t) {
        const double t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * y[j] + (t3 - 2 * t2 + t) * h * m0 + (-2 * t3 + 3 * t2) * y[j + 1] +
               (t3 - t2) * h * m1;
    };
    double lo = 0.0, hi = 1.0;
    const bool rising = y[j + 1] > y[j];
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((hermite(mid) < level) == rising) lo = mid;
        else hi = mid;
    }
    return x[j] + 0.5 * (lo + hi) * h;
}

struct HalfCrossings {
    bool clipped = true;
    std::size_t left = 0;   // last index below half on the left flank
    std::size_t right = 0;  // first index below half on the right flank
};

HalfCrossings half_crossings(const std::vector<double>& y, std::size_t peak) {
    const double half = 0.5 * y[peak];
    HalfCrossings c;
    std::size_t l = peak;
    while (l > 0 && y[l] >= half) --l;
    std::size_t r = peak;
    while (r + 1 < y.size() && y[r] >= half) ++r;
    if (y[l] >= half || y[r] >= half) return c;
    c.clipped = false;
    c.left = l;
    c.right = r;
    return c;
}

}  // namespace

Spectrum transmission_spectrum(const CavityConfig& config, std::span<const double> omega_grid) {
    return spectrum_common(config, omega_grid, true);
}

Spectrum transmission_spectrum_serial(const CavityConfig& config, std::span<const double> omega_grid) {
    return spectrum_common(config, omega_grid, false);
}

double fwhm_linewidth(const Spectrum& spectrum, std::size_t peak_index, std::size_t min_points_above_half) {
    const auto& x = spectrum.omega;
    const auto& y = spectrum.transmission;
    if (peak_index >= y.size() || x.size() != y.size()) throw InvalidArgument("peak index outside spectrum");
    if (!(y[peak_index] > 0.0)) throw SolverFailure("no transmission peak at the given index");
    const HalfCrossings c = half_crossings(y, peak_index);
    if (c.clipped) throw SolverFailure("peak clipped by the grid edge");
    const std::size_t above = c.right - c.left - 1;
    if (above < min_points_above_half) {
        std::ostringstream os;
        os << "peak under-resolved: " << above << " points above half maximum, " << min_points_above_half
           << " required";
        throw SolverFailure(os.str());
    }
    const double half = 0.5 * y[peak_index];
    return cross_level(x, y, c.right - 1, half) - cross_level(x, y, c.left, half);
}

LinewidthMeasurement measure_linewidth(const CavityConfig& config, double omega_guess, std::size_t grid_points) {
    require_valid(config);
    if (config.mirror_left.is_perfect() || config.mirror_right.is_perfect())
        throw InvalidArgument("linewidth measurement needs two transmissive mirrors");
    if (grid_points < 101) throw InvalidArgument("linewidth grid needs at least 101 points");

    const double fsr = free_spectral_range(config);
    double center = omega_guess;
    double w = fsr / (64.0 * static_cast<double>(config.size() + 1));
    const std::size_t target = grid_points / 10;
    std::vector<double> grid(grid_points);
    for (int iter = 0; iter < 60; ++iter) {
        for (std::size_t i = 0; i < grid_points; ++i)
            grid[i] = center - w + 2.0 * w * static_cast<double>(i) / static_cast<double>(grid_points - 1);
        const Spectrum s = transmission_spectrum(config, grid);
        const auto peak = static_cast<std::size_t>(
            std::max_element(s.transmission.begin(), s.transmission.end()) - s.transmission.begin());
        const HalfCrossings c = half_crossings(s.transmission, peak);
        if (c.clipped) {
            center = s.omega[peak];
            w *= 3.0;
            if (w > fsr) break;
            continue;
        }
        const std::size_t above = c.right - c.left - 1;
        const double width = s.omega[c.right] - s.omega[c.left];
        if (above < target || above > grid_points / 2) {
            center = s.omega[peak];
            w = 3.0 * width;
            continue;
        }
        LinewidthMeasurement m;
        m.omega_peak = s.omega[peak];
        m.peak_transmission = s.transmission[peak];
        m.points_above_half = above;
        m.fwhm = fwhm_linewidth(s, peak);
        return m;
    }
    throw SolverFailure("could not resolve a transmission peak near the requested frequency");
}

namespace {

template <class Displace>
FiniteDifference finite_difference(const CavityConfig& config, double omega0, double h, double zpf,
                                   const SolverOptions& options, Displace&& displace) {
    require_valid(config);
    require_lossless(config);
    const long double base = omega0;
    const long double step = default_scan_step(config, options);
    const long double limit = free_spectral_range(config);
    require_mode(config, omega0, options);
    const long double root0 = nearest_root(config, base, 0.0L, step / 64.0L, step, limit);

    // Returns (frequency shift, actual displacement parameter).
    auto shift = [&](double s, long double predicted, long double window) {
        CavityConfig moved = config;
        const double actual = displace(moved, s);
        const long double root = nearest_root(moved, base, root0 + predicted, window, step, limit);
        return std::pair<long double, double>{root - root0, actual};
    };

    const long double w0 = step / 64.0L;
    const auto [dp_half, sp_half] = shift(0.5 * h, 0.0L, w0);
    const auto [dm_half, sm_half] = shift(-0.5 * h, 0.0L, w0);
    const long double slope = (dp_half - dm_half) / static_cast<long double>(sp_half - sm_half);

    // Second-order term from the half-step pair; it dominates the shift where the slope vanishes.
    const long double curvature = (dp_half + dm_half) /
                                  (static_cast<long double>(sp_half) * static_cast<long double>(sp_half) +
                                   static_cast<long double>(sm_half) * static_cast<long double>(sm_half));
    const long double floor = 1e-9L * step;
    auto tracked = [&](double s) {
        const long double ls = s;
        const long double predicted = slope * ls + curvature * ls * ls;
        const long double window = std::max(std::fabs(predicted), w0);
        const auto [d, actual] = shift(s, predicted, window);
        const long double la = actual;
        const long double expected = slope * la + curvature * la * la;
        const long double scale = std::fabs(slope * la) + std::fabs(curvature * la * la);
        if (std::fabs(d - expected) > static_cast<long double>(options.branch_jump_factor) * scale + floor) {
            std::ostringstream os;
            os << "branch tracking failed: shift " << static_cast<double>(d) << " rad/s vs predicted "
               << static_cast<double>(expected) << " rad/s";
            throw BranchTrackingFailure(os.str());
        }
        return std::pair<long double, double>{d, actual};
    };
    const auto [dp, sp] = tracked(h);
    const auto [dm, sm] = tracked(-h);

    FiniteDifference fd;
    fd.coarse = static_cast<double>((dp - dm) / static_cast<long double>(sp - sm));
    fd.fine = static_cast<double>(slope);
    const double richardson = (4.0 * fd.fine - fd.coarse) / 3.0;
    fd.value = zpf * richardson;
    const double unit = (omega0 + static_cast<double>(root0)) / config.length;
    fd.agreement = std::fabs(fd.coarse - fd.fine) / std::max(std::fabs(fd.fine), unit);
    fd.flagged = fd.agreement > options.richardson_tol;
    return fd;
}

}  // namespace

FiniteDifference numeric_coupling(const CavityConfig& config, std::size_t membrane, double omega0, double zpf,
                                  const SolverOptions& options) {
    if (membrane >= config.size()) throw InvalidArgument("membrane index out of range");
    const double h = options.fd_step_fraction * config.wavelength;
    return finite_difference(config, omega0, h, zpf, options, [&](CavityConfig& moved, double s) {
        const double q = config.membranes[membrane].position;
        moved.membranes[membrane].position = q + s;
        return (q + s) - q;
    });
}

FiniteDifference numeric_collective_coupling(const CavityConfig& config, const CollectiveMode& mode,
                                             double omega0, const SolverOptions& options) {
    if (mode.weights.size() != config.size()) throw InvalidArgument("collective mode size differs from array");
    if (std::fabs(mode.weight_norm_squared() - 1.0) > 1e-12)
        throw InvalidArgument("collective mode weights must satisfy sum a_i^2 = 1");
    if (!mode.offsets.empty() && mode.offsets.size() != config.size())
        throw InvalidArgument("collective mode offsets must match the array size");
    CavityConfig rest = config;
    for (std::size_t i = 0; i < mode.offsets.size(); ++i) rest.membranes[i].position = mode.offsets[i];
    const double h = options.fd_step_fraction * config.wavelength;
    return finite_difference(rest, omega0, h, mode.zpf, options, [&](CavityConfig& moved, double s) {
        for (std::size_t i = 0; i < rest.size(); ++i)
            moved.membranes[i].position = rest.membranes[i].position + mode.weights[i] * s;
        return s;
    });
}

}  // namespace cavity
