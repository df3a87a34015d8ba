#include "cavity/scenario.hpp"

#include "cavity/constants.hpp"
#include "cavity/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace cavity::cli {

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
    std::string out = "invalid scenario:";
    for (const auto& p : problems) out += "\n  " + p;
    return out;
}

using json = nlohmann::json;

// Typed access to one JSON object that remembers which keys were consumed.
class Reader {
public:
    Reader(const json& obj, std::string path, std::vector<std::string>& problems)
        : obj_(obj), path_(std::move(path)), problems_(problems) {
        if (!obj_.is_object()) problem("", "must be an object");
    }

    [[nodiscard]] std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void problem(const std::string& key, const std::string& message) {
        problems_.push_back((key.empty() ? (path_.empty() ? std::string("<root>") : path_) : at(key)) + ": " +
                            message);
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        if (!obj_.is_object()) return nullptr;
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    std::optional<double> number(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_number()) {
            problem(key, "must be a number");
            return std::nullopt;
        }
        const double d = v->get<double>();
        if (!std::isfinite(d)) {
            problem(key, "must be finite");
            return std::nullopt;
        }
        return d;
    }

    std::optional<double> positive(const std::string& key) {
        auto d = number(key);
        if (d && !(*d > 0.0)) {
            problem(key, "must be > 0");
            return std::nullopt;
        }
        return d;
    }

    std::optional<double> non_negative(const std::string& key) {
        auto d = number(key);
        if (d && !(*d >= 0.0)) {
            problem(key, "must be >= 0");
            return std::nullopt;
        }
        return d;
    }

    std::optional<long long> integer(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_number_integer()) {
            problem(key, "must be an integer");
            return std::nullopt;
        }
        return v->get<long long>();
    }

    std::optional<std::string> text(const std::string& key) {
        const json* v = find(key);
        if (!v) return std::nullopt;
        if (!v->is_string()) {
            problem(key, "must be a string");
            return std::nullopt;
        }
        return v->get<std::string>();
    }

    void finish() {
        if (!obj_.is_object()) return;
        for (const auto& [key, value] : obj_.items())
            if (!seen_.count(key)) problem(key, "unknown key");
    }

private:
    const json& obj_;
    std::string path_;
    std::vector<std::string>& problems_;
    std::set<std::string> seen_;
};

MembraneInput parse_membrane(const json& obj, const std::string& path, std::vector<std::string>& problems) {
    Reader r(obj, path, problems);
    MembraneInput m;
    m.index = r.number("n");
    m.extinction = r.non_negative("n_imag");
    m.thickness = r.positive("thickness_m");
    m.zeta = r.number("zeta");
    m.zeta_imag = r.non_negative("zeta_imag");
    m.reflectivity = r.non_negative("r");
    m.reflection = r.non_negative("R");
    m.absorption = r.non_negative("A");
    m.position = r.number("position_m");
    r.finish();

    if (m.reflectivity && !(*m.reflectivity < 1.0)) r.problem("r", "must be < 1");
    if (m.reflection && !(*m.reflection < 1.0)) r.problem("R", "must be < 1");
    if (m.index) {
        if (!(*m.index > 1.0)) r.problem("n", "slab index must be > 1");
        if (m.zeta || m.zeta_imag || m.reflection || m.absorption)
            r.problem("", "slab entries (n) cannot carry thin-scatterer keys zeta, zeta_imag, R, A");
        if (m.thickness && m.reflectivity) r.problem("", "give either thickness_m or r for a slab, not both");
    } else {
        if (m.extinction || m.thickness) r.problem("", "n_imag and thickness_m require the slab index n");
        const int styles = (m.zeta ? 1 : 0) + (m.reflectivity ? 1 : 0) + (m.reflection ? 1 : 0);
        if (styles > 1) r.problem("", "give exactly one of zeta, r, R for a thin scatterer");
        if (m.zeta_imag && m.absorption) r.problem("", "give either zeta_imag or A, not both");
    }
    return m;
}

// Uniform double in [0, 1) from the top 53 bits; portable across standard libraries.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

ScenarioConfig parse_scenario(const nlohmann::json& document) {
    std::vector<std::string> problems;
    ScenarioConfig s;
    Reader root(document, "", problems);
    if (auto name = root.text("name")) s.name = *name;
    root.text("description");

    if (const json* cav = root.find("cavity")) {
        Reader c(*cav, "cavity", problems);
        if (auto w = c.positive("wavelength_m")) s.wavelength = *w;
        s.length = c.positive("length_m");
        c.finish();
    }

    if (const json* b = root.find("builder")) {
        Reader r(*b, "builder", problems);
        BuilderInput bi;
        if (auto t = r.text("type")) {
            bi.type = *t;
            if (bi.type != "center-array" && bi.type != "mirror-array" && bi.type != "random")
                r.problem("type", "must be center-array, mirror-array or random");
        } else {
            r.problem("type", "required");
        }
        if (auto n = r.integer("N")) {
            if (*n < 0) r.problem("N", "must be >= 0");
            else bi.n = static_cast<std::size_t>(*n);
            if (bi.type == "center-array" && *n % 2 != 0) r.problem("N", "center-array needs an even N");
        }
        if (auto v = r.integer("spacing_index")) {
            if (*v < 0) r.problem("spacing_index", "must be >= 0");
            else bi.spacing_index = static_cast<int>(*v);
        }
        if (auto v = r.integer("length_index")) {
            if (*v < 0) r.problem("length_index", "must be >= 0");
            else bi.length_index = static_cast<int>(*v);
        }
        bi.target_length_over_spacing = r.positive("target_L_over_l");
        if (bi.length_index && bi.target_length_over_spacing)
            r.problem("", "give either length_index or target_L_over_l, not both");
        if (auto v = r.integer("seed")) bi.seed = static_cast<std::uint64_t>(*v);
        if (auto v = r.integer("samples")) {
            if (*v < 1) r.problem("samples", "must be >= 1");
            else bi.samples = static_cast<std::size_t>(*v);
        }
        r.finish();
        s.builder = bi;
    }

    if (const json* ms = root.find("membranes")) {
        if (!ms->is_array()) {
            problems.emplace_back("membranes: must be an array");
        } else {
            for (std::size_t i = 0; i < ms->size(); ++i)
                s.membranes.push_back(parse_membrane((*ms)[i], "membranes[" + std::to_string(i) + "]", problems));
        }
    }

    if (const json* m = root.find("mirrors")) {
        Reader r(*m, "mirrors", problems);
        if (auto t = r.non_negative("transmission")) {
            if (!(*t < 0.01)) r.problem("transmission", "must be below 0.01 (weak-loss regime)");
            else s.transmission = *t;
        }
        r.finish();
    }

    if (const json* p = root.find("physics")) {
        Reader r(*p, "physics", problems);
        if (auto z = r.positive("q_zpf_m")) s.zpf = *z;
        s.mechanical_damping = r.positive("gamma_m_rad_s");
        r.finish();
    }

    if (const json* sw = root.find("sweep")) {
        Reader r(*sw, "sweep", problems);
        if (const json* nv = r.find("N_values")) {
            if (!nv->is_array()) r.problem("N_values", "must be an array of integers");
            else
                for (const auto& v : *nv) {
                    if (!v.is_number_integer() || v.get<long long>() < 0) {
                        r.problem("N_values", "entries must be non-negative integers");
                        break;
                    }
                    s.sweep.n_values.push_back(v.get<std::size_t>());
                }
        }
        if (const json* rv = r.find("r_values")) {
            if (!rv->is_array()) r.problem("r_values", "must be an array of numbers");
            else
                for (const auto& v : *rv) {
                    if (!v.is_number() || !(v.get<double>() >= 0.0 && v.get<double>() < 1.0)) {
                        r.problem("r_values", "entries must lie in [0, 1)");
                        break;
                    }
                    s.sweep.r_values.push_back(v.get<double>());
                }
        }
        if (const json* w = r.find("omega_window")) {
            if (!w->is_array() || w->size() != 2 || !(*w)[0].is_number() || !(*w)[1].is_number() ||
                !((*w)[0].get<double>() < (*w)[1].get<double>()))
                r.problem("omega_window", "must be [omega_min, omega_max] with omega_min < omega_max (rad/s)");
            else s.sweep.omega_window = std::array<double, 2>{(*w)[0].get<double>(), (*w)[1].get<double>()};
        }
        if (auto v = r.integer("phase_points")) {
            if (*v < 2) r.problem("phase_points", "must be >= 2");
            else s.sweep.phase_points = static_cast<std::size_t>(*v);
        }
        r.finish();
    }

    if (const json* so = root.find("solver")) {
        Reader r(*so, "solver", problems);
        if (auto v = r.positive("scan_density")) s.solver.scan_density = *v;
        if (auto v = r.positive("fd_step_lambda_fraction")) s.solver.fd_step_fraction = *v;
        if (const json* t = r.find("tolerances")) {
            Reader tr(*t, "solver.tolerances", problems);
            if (auto v = tr.positive("mode_residual")) s.solver.mode_residual_tol = *v;
            if (auto v = tr.positive("richardson")) s.solver.richardson_tol = *v;
            if (auto v = tr.positive("branch_jump_factor")) s.solver.branch_jump_factor = *v;
            tr.finish();
        }
        r.finish();
    }

    if (const json* v = root.find("verify")) {
        Reader r(*v, "verify", problems);
        s.max_relative_deviation = r.positive("max_relative_deviation");
        r.finish();
    }
    root.finish();

    // Cross-field rules.
    if (s.builder) {
        if (s.membranes.size() > 1) problems.emplace_back("membranes: a builder takes at most one template membrane");
        for (std::size_t i = 0; i < s.membranes.size(); ++i)
            if (s.membranes[i].position)
                problems.push_back("membranes[" + std::to_string(i) + "].position_m: not allowed with a builder");
        if (s.membranes.empty() && s.sweep.r_values.empty())
            problems.emplace_back("membranes: a builder needs a template membrane or sweep.r_values");
        if (s.builder->type == "random" && !s.length) problems.emplace_back("cavity.length_m: required for random");
        if (s.builder->type != "random" && s.length)
            problems.emplace_back("cavity.length_m: set by the builder; remove it or use an explicit list");
    } else {
        if (!s.length) problems.emplace_back("cavity.length_m: required without a builder");
        for (std::size_t i = 0; i < s.membranes.size(); ++i)
            if (!s.membranes[i].position)
                problems.push_back("membranes[" + std::to_string(i) + "].position_m: required without a builder");
    }
    if (!problems.empty()) throw ConfigError(problems);
    return s;
}

ScenarioConfig parse_scenario_text(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError({std::string("<root>: not valid JSON: ") + e.what()});
    }
    return parse_scenario(doc);
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError({path.string() + ": cannot open"});
    std::ostringstream os;
    os << in.rdbuf();
    return parse_scenario_text(os.str());
}

MembraneSpec membrane_from_input(const MembraneInput& m, double wavelength, double zpf,
                                 std::optional<double> r_override) {
    const std::optional<double> r = r_override ? r_override : m.reflectivity;
    if (m.index) {
        const double ext = m.extinction.value_or(0.0);
        if (r) return slab_from_reflectivity(*r, *m.index, ext, wavelength, zpf);
        if (!m.thickness) throw ConfigError({"membranes: slab needs thickness_m or r"});
        return MembraneSpec::slab(*m.index, ext, *m.thickness, zpf);
    }
    double zeta = 0.0;
    if (r) zeta = *r / std::sqrt(1.0 - *r * *r);
    else if (m.zeta) zeta = *m.zeta;
    else if (m.reflection) zeta = std::sqrt(*m.reflection / (1.0 - *m.reflection));
    else throw ConfigError({"membranes: thin scatterer needs zeta, r or R"});
    double zeta_imag = m.zeta_imag.value_or(0.0);
    if (m.absorption) zeta_imag = 0.5 * *m.absorption * (1.0 + zeta * zeta);
    return MembraneSpec::thin(zeta, zeta_imag, zpf);
}

BuiltCavity build_cavity(const ScenarioConfig& s, std::optional<std::size_t> n_override,
                         std::optional<double> r_override, std::uint64_t seed) {
    const MembraneInput empty;
    BuiltCavity out;
    if (!s.builder) {
        out.layout = "explicit";
        out.config.wavelength = s.wavelength;
        out.config.length = *s.length;
        for (const auto& m : s.membranes)
            out.config.membranes.push_back({membrane_from_input(m, s.wavelength, s.zpf, r_override), *m.position});
        if (!out.config.membranes.empty()) out.membrane = out.config.membranes.front().spec;
    } else {
        const BuilderInput& b = *s.builder;
        const MembraneInput& tmpl = s.membranes.empty() ? empty : s.membranes.front();
        out.membrane = membrane_from_input(tmpl, s.wavelength, s.zpf, r_override);
        out.layout = b.type;
        const std::size_t n = n_override.value_or(b.n);
        out.spacing_index = b.spacing_index;
        if (b.type == "random") {
            out.config.wavelength = s.wavelength;
            out.config.length = *s.length;
            std::mt19937_64 rng(b.seed.value_or(seed));
            const double d = out.membrane.thickness();
            const double margin = 0.01 * s.wavelength;
            for (int attempt = 0;; ++attempt) {
                if (attempt == 1000) throw ConfigError({"builder: could not place random membranes without overlap"});
                std::vector<double> q(n);
                for (double& x : q) x = (unit_uniform(rng) - 0.5) * (*s.length - d - 2.0 * margin);
                std::sort(q.begin(), q.end());
                bool ok = true;
                for (std::size_t i = 1; i < n; ++i) ok = ok && q[i] - q[i - 1] > d + margin;
                if (!ok) continue;
                out.config.membranes.clear();
                for (double x : q) out.config.membranes.push_back({out.membrane, x});
                break;
            }
        } else {
            const bool center = b.type == "center-array";
            int length_index = b.length_index.value_or(0);
            if (b.target_length_over_spacing) {
                length_index = center ? center_length_index_for_ratio(n, out.membrane, s.wavelength, b.spacing_index,
                                                                      *b.target_length_over_spacing)
                                      : mirror_length_index_for_ratio(n, out.membrane, s.wavelength, b.spacing_index,
                                                                      *b.target_length_over_spacing);
            }
            out.length_index = length_index;
            const Reflectivity refl = membrane_reflectivity(out.membrane, angular_frequency(s.wavelength));
            out.spacing = center ? center_array_spacing(refl, s.wavelength, b.spacing_index)
                                 : mirror_array_spacing(refl, s.wavelength, b.spacing_index);
            out.config = center ? build_center_array(n, out.membrane, s.wavelength, b.spacing_index, length_index)
                                : build_mirror_array(n, out.membrane, s.wavelength, b.spacing_index, length_index);
        }
    }
    if (s.transmission > 0.0) {
        out.config.mirror_left = MirrorSpec::partial(s.transmission);
        out.config.mirror_right = MirrorSpec::partial(s.transmission);
    }
    return out;
}

}  // namespace cavity::cli
