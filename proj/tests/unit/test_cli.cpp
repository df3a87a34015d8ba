#include "cavity/constants.hpp"
#include "cavity/core.hpp"
#include "cavity/runners.hpp"

#include <doctest.h>

#include <charconv>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

using namespace cavity;
using namespace cavity::cli;

namespace {

std::string scenario_path(const char* name) { return std::string(CAVITY_SCENARIO_DIR) + "/" + name; }

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

bool mentions(const ConfigError& e, const std::string& needle) {
    for (const auto& p : e.problems())
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

// Returns the problems of a scenario that must fail to parse.
ConfigError parse_failure(const std::string& text) {
    try {
        parse_scenario_text(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("scenario parsed although it should not: " << text);
    return ConfigError({});
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-30.0, 30.0);
    for (int k = 0; k < 2000; ++k) {
        const double x = std::pow(10.0, u(rng)) * (k % 2 ? -1.0 : 1.0);
        const std::string s = format_number(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(back == x);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1e-15) == "1e-15");
}

TEST_CASE("result table") {
    ResultTable t;
    t.add_column("label", "text");
    t.add_column("value", "rad/s");
    t.add_column("count", "count");
    CHECK_THROWS_AS(t.add_column("bad", ""), InvalidArgument);
    t.add_row({std::string("a,b"), 1.25, 3LL});
    t.add_row({std::string("c"), std::numeric_limits<double>::quiet_NaN(), std::monostate{}});
    CHECK_THROWS_AS(t.add_row({1.0}), InvalidArgument);
    CHECK_THROWS_AS(t.add_column("late", "m"), InvalidArgument);

    const std::string csv = t.to_csv();
    CHECK(csv.find('\r') == std::string::npos);
    const auto rows = lines(csv);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "label,value,count");
    CHECK(rows[1] == "text,rad/s,count");
    CHECK(rows[2] == "\"a,b\",1.25,3");
    CHECK(rows[3] == "c,,");

    const auto j = nlohmann::json::parse(t.to_json());
    CHECK(j["columns"][1]["unit"] == "rad/s");
    CHECK(j["rows"][1][1].is_null());
    CHECK(j["rows"][0][2] == 3);
    CHECK(t.number(0, "value") == 1.25);
    CHECK(std::isnan(t.number(0, "label")));
    CHECK_THROWS_AS((void)t.column_index("missing"), InvalidArgument);
}

TEST_CASE("scenario parsing") {
    SUBCASE("full builder scenario") {
        const ScenarioConfig s = load_scenario(scenario_path("center_couplings.json"));
        CHECK(s.name == "center_couplings");
        REQUIRE(s.builder.has_value());
        CHECK(s.builder->type == "center-array");
        CHECK(s.builder->n == 8);
        CHECK(s.builder->spacing_index == 1000);
        REQUIRE(s.max_relative_deviation.has_value());
        CHECK(*s.max_relative_deviation == 1e-3);
        const BuiltCavity b = build_cavity(s);
        CHECK(b.config.size() == 8);
        CHECK(std::fabs(b.config.length / b.spacing - 1000.0) < 10.0);
    }
    SUBCASE("defaults") {
        const ScenarioConfig s =
            parse_scenario_text(R"({"cavity": {"length_m": 0.01}, "membranes": [{"zeta": 1, "position_m": 0}]})");
        CHECK(s.wavelength == 1064e-9);
        CHECK(s.zpf == 1e-15);
        CHECK(s.transmission == 0.0);
        CHECK(s.solver.scan_density == 64.0);
        CHECK(s.sweep.phase_points == 360);
    }
    SUBCASE("unknown keys are rejected with their path") {
        const ConfigError e = parse_failure(R"({"cavity": {"length_m": 0.01, "lenght": 2}, "membranes": []})");
        CHECK(mentions(e, "cavity.lenght"));
        const ConfigError f = parse_failure(R"({"cavity": {"length_m": 0.01}, "membranes": [{"zeta": 1, "position_m": 0, "phase": 1}]})");
        CHECK(mentions(f, "membranes[0].phase"));
    }
    SUBCASE("every problem is reported at once") {
        const ConfigError e = parse_failure(R"({"cavity": {"wavelength_m": -1}, "physics": {"q_zpf_m": "big"}})");
        CHECK(e.problems().size() >= 3);
        CHECK(mentions(e, "cavity.wavelength_m"));
        CHECK(mentions(e, "physics.q_zpf_m"));
        CHECK(mentions(e, "length_m"));
    }
    SUBCASE("cross-field rules") {
        // Builder with explicit positions.
        CHECK(mentions(parse_failure(R"({"builder": {"type": "center-array", "N": 2}, "membranes": [{"r": 0.5, "position_m": 0}]})"),
                       "position"));
        // Center array needs an even N.
        parse_failure(R"({"builder": {"type": "center-array", "N": 3}, "membranes": [{"r": 0.5}]})");
        // Unknown builder type.
        parse_failure(R"({"builder": {"type": "spiral", "N": 2}, "membranes": [{"r": 0.5}]})");
        // Slab and thin keys mixed.
        parse_failure(R"({"cavity": {"length_m": 0.01}, "membranes": [{"n": 2, "zeta": 1, "position_m": 0}]})");
        // Not JSON at all.
        parse_failure("{cavity: 1");
    }
    SUBCASE("membrane inputs") {
        MembraneInput in;
        in.reflectivity = 0.5;
        const MembraneSpec t = membrane_from_input(in, 1064e-9, 1e-15);
        CHECK(t.is_thin());
        CHECK(membrane_reflectivity(t, angular_frequency(1064e-9)).magnitude == doctest::Approx(0.5));
        in.index = 2.0;
        in.extinction = 1e-5;
        const MembraneSpec s = membrane_from_input(in, 1064e-9, 1e-15);
        CHECK(s.is_slab());
        CHECK(membrane_reflectivity(s, angular_frequency(1064e-9)).magnitude == doctest::Approx(0.5).epsilon(1e-9));
        const MembraneSpec o = membrane_from_input(in, 1064e-9, 1e-15, 0.3);
        CHECK(membrane_reflectivity(o, angular_frequency(1064e-9)).magnitude == doctest::Approx(0.3).epsilon(1e-9));
    }
}

TEST_CASE("runners") {
    SUBCASE("empty cavity modes") {
        const ScenarioConfig s = load_scenario(scenario_path("empty_cavity.json"));
        const RunResult r = run_mode(s);
        CHECK(r.status == kExitOk);
        REQUIRE(r.table.rows().size() == 10);
        for (std::size_t m = 0; m < 10; ++m) {
            const double expected = static_cast<double>(m + 1) * kPi * kSpeedOfLight / 0.01;
            CHECK(r.table.number(m, "omega") == doctest::Approx(expected).epsilon(1e-10));
            CHECK(r.table.number(m, "intensity") == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    SUBCASE("couplings are deterministic and within tolerance") {
        const ScenarioConfig s = parse_scenario_text(R"({
            "name": "small",
            "builder": {"type": "center-array", "N": 4, "spacing_index": 10, "target_L_over_l": 300},
            "membranes": [{"r": 0.5}],
            "verify": {"max_relative_deviation": 1e-2}})");
        const RunResult a = run_couplings(s);
        const RunResult b = run_couplings(s);
        CHECK(a.status == kExitOk);
        CHECK(a.table.to_csv() == b.table.to_csv());
        CHECK(a.table.to_json() == b.table.to_json());
        CHECK(a.table.rows().size() == 5);
        CHECK(a.table.metadata.contains("assumptions"));
    }
    SUBCASE("random layouts follow the seed") {
        const ScenarioConfig s = parse_scenario_text(R"({
            "builder": {"type": "random", "N": 3, "samples": 4},
            "cavity": {"length_m": 2e-4},
            "membranes": [{"r": 0.6}],
            "verify": {"max_relative_deviation": 1e-3}})");
        const RunResult a = run_couplings(s, 11);
        CHECK(a.status == kExitOk);
        CHECK(a.table.rows().size() == 16);
        CHECK(a.table.to_csv() == run_couplings(s, 11).table.to_csv());
        CHECK(a.table.to_csv() != run_couplings(s, 12).table.to_csv());
        CHECK(std::isnan(a.table.number(0, "L_over_l")));
        for (std::size_t i = 0; i < a.table.rows().size(); ++i) CHECK(a.table.number(i, "relative_deviation") < 1e-3);
    }
    SUBCASE("tolerance breach sets exit status 4") {
        const ScenarioConfig s = parse_scenario_text(R"({
            "name": "strict",
            "builder": {"type": "center-array", "N": 4, "spacing_index": 0, "length_index": 20},
            "membranes": [{"r": 0.5}],
            "verify": {"max_relative_deviation": 1e-12}})");
        CHECK(run_couplings(s).status == kExitTolerance);
    }
}
