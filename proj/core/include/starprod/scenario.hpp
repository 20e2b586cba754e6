#pragma once

#include <string>

#include "starprod/checks.hpp"

#include <json.hpp>

namespace starprod {

/*
 * Scenario files: line-oriented `key value` text, '#' comments. Keys:
 *
 *   carrier   finite-group | weyl-system | affine       (required)
 *   seed      <uint>                                    (default 1; the
 *             STARPROD_SEED environment variable overrides)
 *   checks    all | name [name ...]                     (default all)
 *   out       <path>                                    (report destination)
 *   parallel  true | false
 *   tol       <check-name> <value>                      (repeatable)
 *   principal <index>                                   (finite-group)
 *   group     <path>                                    (finite-group)
 *   rep       <path>                                    (repeatable)
 *   N         <int>,  ordering symmetric|standard       (weyl-system)
 *   sign      plus | minus                              (affine)
 *   L M K     <int>, a_max x_min r_min rho <real>       (affine grid)
 *
 * Reports are JSON. Wall-time fields are measurements and excluded from the
 * determinism contract; every other numeric field is bit-stable for a fixed
 * seed on one platform.
 */

struct ScenarioError : Error {
    using Error::Error;
};

struct Scenario {
    std::string carrier;
    std::uint64_t seed = 1;
    std::vector<std::string> checks;  // empty = all applicable
    std::string out_path;
    bool parallel = false;
    ToleranceOverrides tol;
    // finite-group
    std::string group_path;
    std::vector<std::string> rep_paths;
    std::optional<std::size_t> principal;
    // weyl
    Index n = 3;
    WeylOrdering ordering = WeylOrdering::symmetric;
    // affine
    AffineGridSpec affine;
};

Scenario parse_scenario(const std::string& path);

// Runs the scenario and returns the report; writes it atomically to
// scenario.out (if set) or `out_override` when non-empty.
// Exit-code contract: 0 all checks pass, 1 any failure, 2 schema violation.
nlohmann::json run_scenario_json(const Scenario& s,
                                 const std::string& out_override = "");
int scenario_exit_code(const nlohmann::json& report);

// Strips wall-time fields; the payload two same-seed runs must agree on.
nlohmann::json deterministic_view(const nlohmann::json& report);

void write_report_atomic(const nlohmann::json& report, const std::string& path);

}  // namespace starprod
