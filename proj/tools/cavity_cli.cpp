// Command-line front end: cavity-cli <mode|couplings|linewidth|cooperativity|efficiency> --config FILE
#include "cavity/runners.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

namespace fs = std::filesystem;
using namespace cavity::cli;

namespace {

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optomechanical coupling, decay and cooperativity of membrane arrays in a 1D cavity"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string format = "both";
    std::uint64_t seed = 0;
    bool quiet = false;

    using Runner = std::function<RunResult(const ScenarioConfig&, std::uint64_t)>;
    const std::map<std::string, std::pair<std::string, Runner>> commands = {
        {"mode", {"resonances and per-region mode profiles", run_mode}},
        {"couplings", {"analytic vs numeric individual and collective couplings", run_couplings}},
        {"linewidth", {"analytic decay rates vs transmission FWHM", run_linewidth}},
        {"cooperativity", {"cooperativity enhancement, analytic and numeric", run_cooperativity}},
        {"efficiency", {"coupling efficiency versus internal field phase", run_efficiency}},
    };
    for (const auto& [name, entry] : commands) {
        CLI::App* sub = app.add_subcommand(name, entry.first);
        sub->add_option("--config", config_path, "scenario file (JSON)")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", format, "csv, json or both")
            ->check(CLI::IsMember({"csv", "json", "both"}));
        sub->add_option("--seed", seed, "seed for randomized scenarios");
        sub->add_flag("--quiet", quiet, "suppress the summary on stdout");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : kExitConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    RunResult result;
    try {
        const ScenarioConfig scenario = load_scenario(config_path);
        result = commands.at(command).second(scenario, seed);
    } catch (const ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const cavity::InvalidArgument& e) {
        std::cerr << "invalid scenario: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cavity::Error& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kExitSolver;
    }

    try {
        fs::create_directories(out_dir);
        const std::string stem = result.table.metadata.value("scenario", std::string("scenario")) + "_" + command;
        const fs::path base = fs::path(out_dir) / stem;
        if (format == "csv" || format == "both") write_file(base.string() + ".csv", result.table.to_csv());
        if (format == "json" || format == "both") write_file(base.string() + ".json", result.table.to_json());
        if (format == "csv") write_file(base.string() + ".meta.json", result.table.metadata_json());
        if (!quiet) {
            std::cout << command << ": " << result.table.rows().size() << " rows -> " << base.string() << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitSolver;
    }
    for (const auto& m : result.messages) std::cerr << m << "\n";
    return result.status;
}
