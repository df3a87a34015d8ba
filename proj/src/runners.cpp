#include "cavity/runners.hpp"

#include "cavity/constants.hpp"
#include "cavity/core.hpp"
#include "cavity/coupling.hpp"
#include "cavity/loss.hpp"
#include "cavity/tmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace cavity::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Cell = ResultTable::Cell;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ojson membrane_json(const MembraneSpec& m) {
    if (m.is_slab()) {
        const Slab& s = m.as_slab();
        return {{"kind", "slab"}, {"n", s.index}, {"n_imag", s.extinction}, {"thickness_m", s.thickness}};
    }
    const ThinScatterer& t = m.as_thin();
    return {{"kind", "thin-scatterer"}, {"zeta", t.polarizability}, {"zeta_imag", t.polarizability_imag}};
}

void base_metadata(ResultTable& t, const ScenarioConfig& s, std::string_view command) {
    t.metadata["artifact_version"] = std::string(artifact_version());
    t.metadata["scenario"] = s.name;
    t.metadata["command"] = std::string(command);
    t.metadata["assumptions"] = {{"wavelength_m", s.wavelength},
                                 {"q_zpf_m", s.zpf},
                                 {"mirror_transmission", s.transmission},
                                 {"weak_loss_profile", "decay rates evaluated on the lossless mode"}};
    if (s.mechanical_damping) t.metadata["assumptions"]["gamma_m_rad_s"] = *s.mechanical_damping;
    t.metadata["solver"] = {{"scan_density", s.solver.scan_density},
                            {"fd_step_lambda_fraction", s.solver.fd_step_fraction},
                            {"mode_residual_tol", s.solver.mode_residual_tol},
                            {"richardson_tol", s.solver.richardson_tol},
                            {"branch_jump_factor", s.solver.branch_jump_factor}};
    t.metadata["cases"] = ojson::array();
}

void record_case(ResultTable& t, const BuiltCavity& b, std::optional<double> r, std::size_t n) {
    ojson c = {{"N", n}, {"layout", b.layout}, {"length_m", b.config.length}};
    if (r) c["r"] = *r;
    if (b.layout == "center-array" || b.layout == "mirror-array") {
        c["spacing_index"] = b.spacing_index;
        c["length_index"] = b.length_index;
        c["spacing_m"] = b.spacing;
        c["L_over_l"] = b.config.length / b.spacing;
    }
    if (n > 0 || b.layout != "explicit") c["membrane"] = membrane_json(b.membrane);
    t.metadata["cases"].push_back(c);
}

std::vector<std::size_t> n_list(const ScenarioConfig& s) {
    if (!s.sweep.n_values.empty()) return s.sweep.n_values;
    if (s.builder) return {s.builder->n};
    return {0};
}

std::vector<std::optional<double>> r_list(const ScenarioConfig& s) {
    std::vector<std::optional<double>> out;
    for (double r : s.sweep.r_values) out.emplace_back(r);
    if (out.empty()) out.emplace_back(std::nullopt);
    return out;
}

void require_array_builder(const ScenarioConfig& s, std::string_view command) {
    if (!s.builder || s.builder->type == "random")
        throw ConfigError({"builder.type: " + std::string(command) + " needs center-array or mirror-array"});
}

// Deviation relative to the analytic value, or to the natural coupling unit when that vanishes.
double relative_deviation(double numeric, double analytic, double unit) {
    return std::fabs(numeric - analytic) / (analytic != 0.0 ? std::fabs(analytic) : unit);
}

void check_tolerance(RunResult& res, const ScenarioConfig& s, double deviation, const std::string& what) {
    if (s.max_relative_deviation && !(deviation <= *s.max_relative_deviation)) {
        res.messages.push_back(what + ": deviation " + format_number(deviation) + " exceeds " +
                               format_number(*s.max_relative_deviation));
        if (res.status == kExitOk) res.status = kExitTolerance;
    }
}

void solver_failed(RunResult& res, const std::string& what, const std::exception& e) {
    res.messages.push_back(what + ": " + e.what());
    res.status = kExitSolver;
}

// Collective coupling of an evenly spaced array with the same gap and cavity length.
double evenly_spaced_collective(const BuiltCavity& b, std::size_t n, const SolverOptions& opt) {
    CavityConfig even = b.config.lossless_copy();
    const double d = b.membrane.thickness();
    for (std::size_t i = 0; i < n; ++i)
        even.membranes[i].position = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * (b.spacing + d);
    const double omega = nearest_resonance(even, even.design_omega(), opt);
    const FieldProfile p = field_profile(even, omega, opt);
    std::vector<double> g;
    for (std::size_t i = 0; i < n; ++i) g.push_back(coupling_from_profile(p, i, b.membrane.zpf));
    return maximal_collective_coupling(g);
}

double empty_length(const BuiltCavity& reference) {
    const double half = 0.5 * reference.config.wavelength;
    return half * std::round(reference.config.length / half);
}

struct DecayPair {
    double mirror = 0.0;
    double absorption = 0.0;
};

// Analytic decay rates: closed forms for center arrays, profile expectation values otherwise.
DecayPair analytic_decay(const BuiltCavity& b, std::size_t n, double transmission, const SolverOptions& opt) {
    const CavityConfig& cfg = b.config;
    if (n == 0) return {transmission * kSpeedOfLight / cfg.length, 0.0};
    const double omega = cfg.design_omega();
    if (b.layout == "center-array") {
        const double r = membrane_reflectivity(b.membrane, omega).magnitude;
        return {center_config_mirror_decay(n, r, b.spacing, cfg.length, transmission),
                center_config_absorption_decay(n, b.membrane, omega, b.spacing, cfg.length)};
    }
    const CavityConfig lossless = cfg.lossless_copy();
    const FieldProfile p = field_profile(lossless, nearest_resonance(lossless, omega, opt), opt);
    const DecayBreakdown d = decay_breakdown(p, cfg);
    DecayPair out{d.kappa_mirror, 0.0};
    for (double k : d.kappa_absorption) out.absorption += k;
    return out;
}

BuiltCavity linewidth_cavity(const ScenarioConfig& s, std::size_t n, std::uint64_t seed) {
    if (n > 0) return build_cavity(s, n, std::nullopt, seed);
    BuiltCavity ref = build_cavity(s, s.builder && s.builder->type == "center-array" ? 2 : 1, std::nullopt, seed);
    ref.config.length = empty_length(ref);
    ref.config.membranes.clear();
    return ref;
}

}  // namespace

std::string_view artifact_version() { return "1.0.0"; }

RunResult run_mode(const ScenarioConfig& s, std::uint64_t seed) {
    RunResult res;
    ResultTable& t = res.table;
    base_metadata(t, s, "mode");
    const BuiltCavity b = build_cavity(s, std::nullopt, std::nullopt, seed);
    require_valid(b.config);
    record_case(t, b, std::nullopt, b.config.size());
    const CavityConfig cfg = b.config.lossless_copy();
    if (!b.config.lossless()) t.metadata["note"] = "mirror transmission and absorption ignored for mode shapes";

    const double omega0 = cfg.design_omega();
    const double fsr = free_spectral_range(cfg);
    const auto window = s.sweep.omega_window.value_or(std::array<double, 2>{omega0 - 2.0 * fsr, omega0 + 2.0 * fsr});
    t.metadata["omega_window_rad_s"] = {window[0], window[1]};

    t.add_column("resonance", "index");
    t.add_column("omega", "rad/s");
    t.add_column("detuning_from_design", "rad/s");
    t.add_column("region", "index");
    t.add_column("region_kind", "text");
    t.add_column("length", "m");
    t.add_column("intensity", "dimensionless");
    t.add_column("phase", "rad");
    t.add_column("absolute_intensity", "dimensionless");

    const ResonanceSearch search = find_resonances(cfg, window[0], window[1], s.solver);
    for (const auto& w : search.warnings) res.messages.push_back("warning: " + w);
    for (std::size_t m = 0; m < search.roots.size(); ++m) {
        const double omega = search.roots[m];
        FieldProfile p;
        try {
            p = field_profile(cfg, omega, s.solver);
        } catch (const NotAMode& e) {
            solver_failed(res, "resonance " + std::to_string(m), e);
            continue;
        }
        for (std::size_t i = 0; i < p.regions.size(); ++i) {
            const Region& reg = p.regions[i];
            t.add_row({static_cast<long long>(m), omega, omega - omega0, static_cast<long long>(i),
                       std::string(reg.interior ? "interior" : "vacuum"), reg.length, reg.intensity, reg.phase,
                       p.absolute_intensity});
        }
    }
    return res;
}

RunResult run_couplings(const ScenarioConfig& s, std::uint64_t seed) {
    if (!s.builder) throw ConfigError({"builder: couplings needs a builder"});
    RunResult res;
    ResultTable& t = res.table;
    base_metadata(t, s, "couplings");
    t.metadata["columns_note"] =
        "membrane = 0 marks the collective row; relative_deviation is taken against the analytic value, or "
        "against q_zpf*omega/L when the analytic value is zero";
    t.add_column("r", "dimensionless");
    t.add_column("N", "count");
    t.add_column("kind", "text");
    t.add_column("membrane", "index");
    t.add_column("L_over_l", "dimensionless");
    t.add_column("g_analytic", "rad/s");
    t.add_column("g_numeric", "rad/s");
    t.add_column("g_analytic_over_g1", "dimensionless");
    t.add_column("g_numeric_over_g1", "dimensionless");
    t.add_column("relative_deviation", "dimensionless");
    t.add_column("richardson_agreement", "dimensionless");
    t.add_column("evenly_spaced_over_g1", "dimensionless");
    t.add_column("status", "text");

    const bool center = s.builder->type == "center-array";
    const bool random = s.builder->type == "random";
    // Random layouts draw one placement per sample; their reference is the profile expectation value.
    const std::size_t samples = random ? s.builder->samples : 1;
    const std::uint64_t base_seed = s.builder->seed.value_or(seed);
    for (const auto& r : r_list(s)) {
        for (std::size_t n : n_list(s)) {
            for (std::size_t k = 0; k < samples; ++k) {
                ScenarioConfig sample = s;
                sample.builder->seed = base_seed + k;
                const BuiltCavity b = build_cavity(sample, n, r, seed);
                require_valid(b.config);
                record_case(t, b, r, n);
                if (random) t.metadata["cases"].back()["seed"] = base_seed + k;
                const CavityConfig cfg = b.config.lossless_copy();
                // The design frequency is resonant only up to rounding; refine it before differentiating.
                const double omega0 = nearest_resonance(cfg, cfg.design_omega(), s.solver);
                const Reflectivity refl = membrane_reflectivity(b.membrane, omega0);
                const double zpf = b.membrane.zpf;
                const double d = b.membrane.thickness();
                std::vector<double> analytic;
                double g1 = 0.0, gc_analytic = 0.0;
                if (random) {
                    const FieldProfile p = field_profile(cfg, omega0, s.solver);
                    for (std::size_t i = 0; i < n; ++i) analytic.push_back(coupling_from_profile(p, i, zpf));
                    g1 = reference_coupling(refl.magnitude, omega0, cfg.length, zpf);
                    gc_analytic = maximal_collective_coupling(analytic);
                } else if (center) {
                    const auto a = center_config_analytics(n, refl, b.spacing, cfg.length, cfg.wavelength, zpf, d);
                    analytic = a.individual;
                    g1 = a.g1;
                    gc_analytic = a.collective;
                } else {
                    const auto a = mirror_config_analytics(n, refl, b.spacing, cfg.length, cfg.wavelength, zpf, d);
                    analytic = a.individual;
                    g1 = a.g1;
                    gc_analytic = a.collective;
                }
                const double unit = zpf * omega0 / cfg.length;
                const double ratio = random ? kNaN : cfg.length / b.spacing;
                auto over_g1 = [&](double g) { return g1 != 0.0 ? g / g1 : kNaN; };

                std::vector<double> numeric(n, kNaN);
                bool failed = false;
                for (std::size_t i = 0; i < n; ++i) {
                    std::string status = "ok";
                    double agreement = kNaN;
                    try {
                        const FiniteDifference fd = numeric_coupling(cfg, i, omega0, zpf, s.solver);
                        numeric[i] = fd.value;
                        agreement = fd.agreement;
                        if (fd.flagged) status = "richardson-flagged";
                    } catch (const SolverFailure& e) {
                        status = dynamic_cast<const BranchTrackingFailure*>(&e) ? "branch-tracking-failure"
                                                                                : "solver-failure";
                        solver_failed(res, "r=" + format_number(refl.magnitude) + " N=" + std::to_string(n) +
                                               " membrane " + std::to_string(i + 1),
                                      e);
                        failed = true;
                    }
                    const double dev = relative_deviation(numeric[i], analytic[i], unit);
                    if (!std::isnan(numeric[i]))
                        check_tolerance(res, s, dev,
                                        "N=" + std::to_string(n) + " membrane " + std::to_string(i + 1));
                    t.add_row({refl.magnitude, static_cast<long long>(n), std::string("individual"),
                               static_cast<long long>(i + 1), ratio, analytic[i], numeric[i], over_g1(analytic[i]),
                               over_g1(numeric[i]), std::isnan(numeric[i]) ? kNaN : dev, agreement, std::monostate{},
                               status});
                }

                double gc_numeric = kNaN, agreement = kNaN;
                std::string status = "ok";
                if (!failed) {
                    CollectiveMode mode;
                    mode.zpf = zpf;
                    const double norm = maximal_collective_coupling(numeric);
                    for (double g : numeric)
                        mode.weights.push_back(norm > 0.0 ? g / norm : 1.0 / std::sqrt(static_cast<double>(n)));
                    try {
                        const FiniteDifference fd = numeric_collective_coupling(cfg, mode, omega0, s.solver);
                        gc_numeric = fd.value;
                        agreement = fd.agreement;
                        if (fd.flagged) status = "richardson-flagged";
                    } catch (const SolverFailure& e) {
                        status = dynamic_cast<const BranchTrackingFailure*>(&e) ? "branch-tracking-failure"
                                                                                : "solver-failure";
                        solver_failed(res, "collective N=" + std::to_string(n), e);
                    }
                } else {
                    status = "skipped";
                }
                double even = kNaN;
                if (center && g1 != 0.0) {
                    try {
                        even = evenly_spaced_collective(b, n, s.solver) / g1;
                    } catch (const Error& e) {
                        res.messages.push_back("evenly spaced reference N=" + std::to_string(n) + ": " + e.what());
                    }
                }
                const double dev = relative_deviation(gc_numeric, gc_analytic, unit);
                if (!std::isnan(gc_numeric)) check_tolerance(res, s, dev, "collective N=" + std::to_string(n));
                t.add_row({refl.magnitude, static_cast<long long>(n), std::string("collective"), 0LL, ratio,
                           gc_analytic, gc_numeric, over_g1(gc_analytic), over_g1(gc_numeric),
                           std::isnan(gc_numeric) ? kNaN : dev, agreement, even, status});
            }
        }
    }
    return res;
}

RunResult run_linewidth(const ScenarioConfig& s, std::uint64_t seed) {
    if (!(s.transmission > 0.0)) throw ConfigError({"mirrors.transmission: linewidth needs transmissive mirrors"});
    RunResult res;
    ResultTable& t = res.table;
    base_metadata(t, s, "linewidth");
    t.add_column("N", "count");
    t.add_column("L_over_l", "dimensionless");
    t.add_column("kappa0", "rad/s");
    t.add_column("kappa_T_over_kappa0", "dimensionless");
    t.add_column("kappa_sigma_over_kappa0", "dimensionless");
    t.add_column("kappa_total_over_kappa0", "dimensionless");
    t.add_column("fwhm_over_kappa0", "dimensionless");
    t.add_column("relative_deviation", "dimensionless");
    t.add_column("peak_transmission", "dimensionless");
    t.add_column("status", "text");

    for (std::size_t n : n_list(s)) {
        const BuiltCavity b = linewidth_cavity(s, n, seed);
        require_valid(b.config);
        record_case(t, b, std::nullopt, n);
        const double kappa0 = s.transmission * kSpeedOfLight / b.config.length;
        const double ratio = b.spacing > 0.0 ? b.config.length / b.spacing : kNaN;
        const DecayPair a = analytic_decay(b, n, s.transmission, s.solver);
        const double total = a.mirror + a.absorption;
        double fwhm = kNaN, peak = kNaN;
        std::string status = "ok";
        try {
            const CavityConfig lossless = b.config.lossless_copy();
            const double omega = nearest_resonance(lossless, lossless.design_omega(), s.solver);
            const LinewidthMeasurement m = measure_linewidth(b.config, omega);
            fwhm = m.fwhm;
            peak = m.peak_transmission;
        } catch (const SolverFailure& e) {
            status = "under-resolved";
            solver_failed(res, "N=" + std::to_string(n), e);
        }
        const double dev = std::fabs(fwhm - total) / total;
        if (!std::isnan(fwhm)) check_tolerance(res, s, dev, "N=" + std::to_string(n));
        t.add_row({static_cast<long long>(n), ratio, kappa0, a.mirror / kappa0, a.absorption / kappa0,
                   total / kappa0, fwhm / kappa0, std::isnan(fwhm) ? kNaN : dev, peak, status});
    }
    return res;
}

RunResult run_cooperativity(const ScenarioConfig& s, std::uint64_t seed) {
    require_array_builder(s, "cooperativity");
    if (s.builder->type != "center-array") throw ConfigError({"builder.type: cooperativity needs center-array"});
    if (!s.mechanical_damping) throw ConfigError({"physics.gamma_m_rad_s: required for cooperativity"});
    if (!(s.transmission > 0.0)) throw ConfigError({"mirrors.transmission: cooperativity needs transmissive mirrors"});
    RunResult res;
    ResultTable& t = res.table;
    base_metadata(t, s, "cooperativity");
    t.add_column("N", "count");
    t.add_column("L_over_l", "dimensionless");
    t.add_column("enhancement_analytic", "dimensionless");
    t.add_column("enhancement_numeric", "dimensionless");
    t.add_column("relative_deviation", "dimensionless");
    t.add_column("enhancement_saturation", "dimensionless");
    t.add_column("C0_analytic", "dimensionless");
    t.add_column("C0_numeric", "dimensionless");
    t.add_column("status", "text");

    const double gamma_m = *s.mechanical_damping;
    for (std::size_t n : n_list(s)) {
        const BuiltCavity b = build_cavity(s, n, std::nullopt, seed);
        require_valid(b.config);
        record_case(t, b, std::nullopt, n);
        const CavityConfig lossless = b.config.lossless_copy();
        const double omega0 = nearest_resonance(lossless, lossless.design_omega(), s.solver);
        const double length = b.config.length;
        const Reflectivity refl = membrane_reflectivity(b.membrane, omega0);
        const double loss = absorption_factor(b.membrane, omega0);
        const CooperativityEnhancement e =
            cooperativity_enhancement(n, refl.magnitude, b.spacing, length, s.transmission, loss);
        const double g1 = reference_coupling(refl.magnitude, omega0, length, b.membrane.zpf);
        const double kappa0 = s.transmission * kSpeedOfLight / length;
        const double c1 = cooperativity(g1, kappa0, gamma_m);

        double numeric = kNaN;
        std::string status = "ok";
        try {
            const auto a = center_config_analytics(n, refl, b.spacing, length, b.config.wavelength, b.membrane.zpf,
                                                   b.membrane.thickness());
            CollectiveMode mode;
            mode.zpf = b.membrane.zpf;
            for (double g : a.individual) mode.weights.push_back(g / a.collective);
            const FiniteDifference gc = numeric_collective_coupling(lossless, mode, omega0, s.solver);
            const LinewidthMeasurement m =
                measure_linewidth(b.config, omega0);
            numeric = cooperativity(gc.value, m.fwhm, gamma_m) / c1;
        } catch (const SolverFailure& ex) {
            status = "solver-failure";
            solver_failed(res, "N=" + std::to_string(n), ex);
        }
        const double dev = std::fabs(numeric - e.finite) / e.finite;
        if (!std::isnan(numeric)) check_tolerance(res, s, dev, "N=" + std::to_string(n));
        t.add_row({static_cast<long long>(n), length / b.spacing, e.finite, numeric, std::isnan(numeric) ? kNaN : dev,
                   e.saturation, e.finite * c1, numeric * c1, status});
    }
    return res;
}

RunResult run_efficiency(const ScenarioConfig& s, std::uint64_t seed) {
    (void)seed;
    if (s.membranes.empty() || !s.membranes.front().index)
        throw ConfigError({"membranes[0]: efficiency needs slab parameters n, n_imag, thickness_m"});
    const MembraneSpec m = membrane_from_input(s.membranes.front(), s.wavelength, s.zpf);
    const Slab& slab = m.as_slab();
    if (!(slab.extinction > 0.0)) throw ConfigError({"membranes[0].n_imag: must be > 0 for efficiency"});

    RunResult res;
    ResultTable& t = res.table;
    base_metadata(t, s, "efficiency");
    t.metadata["assumptions"]["membrane"] = membrane_json(m);

    const double lam = s.wavelength;
    const std::size_t points = s.sweep.phase_points;
    std::vector<double> theta(points);
    std::vector<PhaseResponse> resp(points);
    std::vector<double> eta(points);
    for (std::size_t i = 0; i < points; ++i) {
        theta[i] = kPi * static_cast<double>(i) / static_cast<double>(points);
        resp[i] = efficiency_phase_response(slab.index, slab.thickness, lam, theta[i]);
        eta[i] = coupling_efficiency(slab.index, slab.extinction, slab.thickness, lam, theta[i], m.zpf);
    }
    auto column_max = [&](auto get) {
        double mx = 0.0;
        for (const auto& r : resp) mx = std::max(mx, get(r));
        return mx;
    };
    const double gmax = column_max([](const PhaseResponse& r) { return r.coupling; });
    const double kmax = column_max([](const PhaseResponse& r) { return r.absorption; });
    const double emax = *std::max_element(eta.begin(), eta.end());

    t.add_column("theta0", "rad");
    t.add_column("coupling_normalized", "dimensionless");
    t.add_column("absorption_normalized", "dimensionless");
    t.add_column("efficiency_normalized", "dimensionless");
    t.add_column("eta", "dimensionless");
    for (std::size_t i = 0; i < points; ++i)
        t.add_row({theta[i], resp[i].coupling / gmax, resp[i].absorption / kmax, eta[i] / emax, eta[i]});

    // Coupling maximum over theta0 on a fine grid with golden-section refinement.
    auto coupling_at = [&](double th) { return efficiency_phase_response(slab.index, slab.thickness, lam, th).coupling; };
    const std::size_t fine = 20000;
    std::size_t best = 0;
    double best_val = 0.0;
    for (std::size_t i = 0; i < fine; ++i) {
        const double v = coupling_at(kPi * static_cast<double>(i) / fine);
        if (v > best_val) best_val = v, best = i;
    }
    double lo = kPi * (static_cast<double>(best) - 1.0) / fine, hi = kPi * (static_cast<double>(best) + 1.0) / fine;
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100; ++it) {
        const double a = hi - golden * (hi - lo), c = lo + golden * (hi - lo);
        if (coupling_at(a) > coupling_at(c)) hi = c;
        else lo = a;
    }
    const double coupling_max = std::max(best_val, coupling_at(0.5 * (lo + hi)));

    const MaxEfficiency mx = max_coupling_efficiency(slab.index, slab.extinction, slab.thickness, lam, m.zpf);
    const auto peaks = peak_efficiency_phases(slab.index, slab.thickness, lam);
    ojson summary = {{"eta_max", mx.eta_max}, {"strong_coupling_possible", mx.strong_coupling_possible}};
    summary["peak_efficiency_theta0_rad"] = {peaks[0], peaks[1]};
    summary["coupling_at_peak_fraction"] = {coupling_at(peaks[0]) / coupling_max, coupling_at(peaks[1]) / coupling_max};
    summary["eta_at_peaks"] = {
        coupling_efficiency(slab.index, slab.extinction, slab.thickness, lam, peaks[0], m.zpf),
        coupling_efficiency(slab.index, slab.extinction, slab.thickness, lam, peaks[1], m.zpf)};
    t.metadata["summary"] = summary;
    return res;
}

}  // namespace cavity::cli
