#pragma once

#include "cavity/result_table.hpp"
#include "cavity/scenario.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cavity::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitTolerance = 4;

std::string_view artifact_version();

struct RunResult {
    ResultTable table;
    int status = kExitOk;
    std::vector<std::string> messages;
};

/// Resonances in the frequency window with their per-region intensities and phases.
RunResult run_mode(const ScenarioConfig& scenario, std::uint64_t seed = 0);

/// Analytic and numeric individual and collective couplings over the N and r sweeps.
RunResult run_couplings(const ScenarioConfig& scenario, std::uint64_t seed = 0);

/// Analytic decay rates versus the FWHM of the computed transmission peak.
RunResult run_linewidth(const ScenarioConfig& scenario, std::uint64_t seed = 0);

/// Cooperativity enhancement C0/C1, analytic and from the numeric pipeline.
RunResult run_cooperativity(const ScenarioConfig& scenario, std::uint64_t seed = 0);

/// Coupling, absorption and efficiency versus the internal field phase of one slab.
RunResult run_efficiency(const ScenarioConfig& scenario, std::uint64_t seed = 0);

}  // namespace cavity::cli
