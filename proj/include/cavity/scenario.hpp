/**
 * Scenario files (JSON). Unknown keys are rejected so that a mistyped physics
 * parameter never silently falls back to a default. See README for the schema.
 */
#pragma once

#include "cavity/errors.hpp"
#include "cavity/tmm.hpp"
#include "cavity/types.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cavity::cli {

/// Malformed scenario; problems carry field paths.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    [[nodiscard]] const std::vector<std::string>& problems() const { return problems_; }

private:
    std::vector<std::string> problems_;
};

/// One membrane entry: slab {n, n_imag, thickness_m | r} or thin {zeta, zeta_imag | r | R, A}.
struct MembraneInput {
    std::optional<double> index;
    std::optional<double> extinction;
    std::optional<double> thickness;
    std::optional<double> zeta;
    std::optional<double> zeta_imag;
    std::optional<double> reflectivity;  ///< amplitude r
    std::optional<double> reflection;    ///< power R
    std::optional<double> absorption;    ///< power A
    std::optional<double> position;
};

struct BuilderInput {
    std::string type;  ///< center-array | mirror-array | random
    std::size_t n = 0;
    int spacing_index = 1000;
    std::optional<int> length_index;
    std::optional<double> target_length_over_spacing;
    std::optional<std::uint64_t> seed;
    std::size_t samples = 1;
};

struct SweepInput {
    std::vector<std::size_t> n_values;
    std::vector<double> r_values;
    std::optional<std::array<double, 2>> omega_window;
    std::size_t phase_points = 360;
};

struct ScenarioConfig {
    std::string name = "scenario";
    double wavelength = 1064e-9;
    std::optional<double> length;
    std::optional<BuilderInput> builder;
    std::vector<MembraneInput> membranes;
    double transmission = 0.0;  ///< both mirrors; 0 means perfect
    double zpf = 1e-15;
    std::optional<double> mechanical_damping;
    SweepInput sweep;
    SolverOptions solver;
    std::optional<double> max_relative_deviation;  ///< verification threshold (exit 4 when breached)
};

ScenarioConfig parse_scenario(const nlohmann::json& document);
ScenarioConfig parse_scenario_text(std::string_view text);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Membrane described by an entry; r_override replaces the entry's reflectivity.
MembraneSpec membrane_from_input(const MembraneInput& input, double wavelength, double zpf,
                                 std::optional<double> r_override = std::nullopt);

struct BuiltCavity {
    CavityConfig config;
    MembraneSpec membrane;  ///< template membrane of a builder (first membrane otherwise)
    std::string layout;     ///< center-array | mirror-array | random | explicit
    int spacing_index = 0;
    int length_index = 0;
    double spacing = 0.0;  ///< vacuum gap l for builder layouts
};

/// Cavity of the scenario, optionally with a different N or r than the file states.
BuiltCavity build_cavity(const ScenarioConfig& scenario, std::optional<std::size_t> n_override = std::nullopt,
                         std::optional<double> r_override = std::nullopt, std::uint64_t seed = 0);

}  // namespace cavity::cli
