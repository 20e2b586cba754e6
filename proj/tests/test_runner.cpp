#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "starprod/scenario.hpp"

using namespace starprod;
using nlohmann::json;

namespace {
const std::string kData = STARPROD_DATA_DIR;

std::string write_scenario(const std::string& name, const std::string& body) {
    const std::string path = "/tmp/starprod_scn_" + name + ".txt";
    std::ofstream f(path);
    f << body;
    return path;
}
}  // namespace

TEST_CASE("scenario parsing") {
    SUBCASE("a weyl scenario round-trips its fields") {
        const auto path = write_scenario("weyl",
                                         "carrier weyl-system\n"
                                         "N 3\n"
                                         "ordering symmetric\n"
                                         "seed 99\n"
                                         "checks symplectic-dft moyal-kernel\n");
        const Scenario s = parse_scenario(path);
        CHECK(s.carrier == "weyl-system");
        CHECK(s.n == 3);
        CHECK(s.seed == 99);
        CHECK(s.checks.size() == 2);
    }
    SUBCASE("unknown keys are schema errors") {
        const auto path = write_scenario("badkey",
                                         "carrier weyl-system\nN 3\nfrobnicate 1\n");
        CHECK_THROWS_AS(parse_scenario(path), ScenarioError);
    }
    SUBCASE("unknown check names are schema errors") {
        const auto path = write_scenario(
            "badcheck", "carrier weyl-system\nN 3\nchecks not-a-check\n");
        CHECK_THROWS_AS(parse_scenario(path), ScenarioError);
    }
    SUBCASE("checks must match the carrier") {
        const auto path = write_scenario(
            "mismatch", "carrier weyl-system\nN 3\nchecks admissibility\n");
        CHECK_THROWS_AS(parse_scenario(path), ScenarioError);
    }
    SUBCASE("missing carrier is a schema error") {
        const auto path = write_scenario("nocarrier", "N 3\n");
        CHECK_THROWS_AS(parse_scenario(path), ScenarioError);
    }
    SUBCASE("STARPROD_SEED overrides the file seed") {
        const auto path =
            write_scenario("envseed", "carrier weyl-system\nN 3\nseed 7\n");
        setenv("STARPROD_SEED", "123", 1);
        const Scenario s = parse_scenario(path);
        unsetenv("STARPROD_SEED");
        CHECK(s.seed == 123);
    }
}

TEST_CASE("scenario execution and reports") {
    const auto path = write_scenario("run",
                                     "carrier weyl-system\n"
                                     "N 3\n"
                                     "seed 11\n");
    SUBCASE("a full weyl run passes and carries the schema") {
        const json report = run_scenario_json(parse_scenario(path));
        CHECK(report["overall_pass"].get<bool>());
        CHECK(report["checks"].size() >= 12);
        for (const auto& c : report["checks"]) {
            CHECK(c.contains("name"));
            CHECK(c.contains("max_dev"));
            CHECK(c.contains("tol"));
            CHECK(c.contains("pass"));
            CHECK(c.contains("wall_seconds"));
        }
        CHECK(scenario_exit_code(report) == 0);
    }
    SUBCASE("same seed, same numbers — twice") {
        const Scenario s = parse_scenario(path);
        const json a = deterministic_view(run_scenario_json(s));
        const json b = deterministic_view(run_scenario_json(s));
        CHECK(a == b);
    }
    SUBCASE("parallel execution yields the identical report") {
        Scenario s = parse_scenario(path);
        const json a = deterministic_view(run_scenario_json(s));
        s.parallel = true;
        const json b = deterministic_view(run_scenario_json(s));
        CHECK(a == b);
    }
    SUBCASE("a tolerance override can force a failure (exit 1 semantics)") {
        Scenario s = parse_scenario(path);
        s.tol.values["explicit-vs-implicit-star"] = 1e-30;
        const json report = run_scenario_json(s);
        CHECK(!report["overall_pass"].get<bool>());
        CHECK(scenario_exit_code(report) == 1);
    }
    SUBCASE("reports are written atomically to the requested path") {
        Scenario s = parse_scenario(path);
        const std::string out = "/tmp/starprod_report_test.json";
        std::remove(out.c_str());
        run_scenario_json(s, out);
        std::ifstream in(out);
        CHECK(in.good());
        json loaded;
        in >> loaded;
        CHECK(loaded.contains("overall_pass"));
    }
}

TEST_CASE("finite-group scenario end to end") {
    const auto path = write_scenario(
        "s3",
        "carrier finite-group\n"
        "group " + kData + "/groups/s3.grp\n"
        "rep " + kData + "/reps/s3_trivial.rep\n"
        "rep " + kData + "/reps/s3_sign.rep\n"
        "rep " + kData + "/reps/s3_standard.rep\n"
        "seed 5\n");
    const json report = run_scenario_json(parse_scenario(path));
    CHECK(report["overall_pass"].get<bool>());
    // principal defaults to the largest irrep
    CHECK(report["environment"]["principal_dim"].get<int>() == 2);
    // dual-dependent suites were selected automatically
    bool has_decomposition = false;
    for (const auto& c : report["checks"])
        has_decomposition |= c["name"] == "convolution-decomposition";
    CHECK(has_decomposition);
}

TEST_CASE("check catalog") {
    const auto& cat = check_catalog();
    CHECK(cat.size() >= 30);
    bool orth = false, star = false;
    for (const auto& c : cat) {
        orth |= c.name == "orthogonality-relations";
        star |= c.name == "explicit-vs-implicit-star";
        CHECK(!c.description.empty());
        CHECK(!c.reference.empty());
        CHECK(!c.carriers.empty());
    }
    CHECK(orth);
    CHECK(star);
    CHECK(check_supports_carrier("moyal-kernel", "weyl-system"));
    CHECK(!check_supports_carrier("moyal-kernel", "affine"));
}
