#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "starprod/affine.hpp"
#include "starprod/star.hpp"
#include "starprod/weyl_system.hpp"

namespace starprod {

/*
 * Named check suites. Each suite condenses one family of identities into a
 * single deviation measured against a tolerance; suites derive their RNG from
 * seed ^ fnv1a(name), so reports do not depend on execution order.
 *
 * `direction` tells how to read max_dev: "max" passes when dev <= tol (the
 * default), "min" when dev >= tol (used by the properness check), "ratio"
 * when dev < tol strictly (the grid-refinement comparison), and "report"
 * always passes — the number is informational.
 */
struct CheckResult {
    std::string name;
    double max_dev = 0.0;
    double tol = 0.0;
    std::string direction = "max";
    bool pass = false;
    double wall_seconds = 0.0;
};

struct CheckInfo {
    std::string name;
    std::string description;
    std::string reference;              // the classical statement it verifies
    std::vector<std::string> carriers;  // finite-group | weyl-system | affine
};

const std::vector<CheckInfo>& check_catalog();
bool check_supports_carrier(const std::string& check, const std::string& carrier);

struct ToleranceOverrides {
    std::map<std::string, double> values;
    double get(const std::string& name, double fallback) const {
        auto it = values.find(name);
        return it == values.end() ? fallback : it->second;
    }
};

struct FiniteContext {
    FiniteGroupPtr group;
    std::vector<ProjRep> reps;  // shipped irreps; dual complete iff Σδ² = |G|
    std::size_t principal = 0;
    std::uint64_t seed = 0;
    ToleranceOverrides tol;

    bool dual_complete() const;
};

struct WeylContext {
    Index n = 3;
    WeylOrdering ordering = WeylOrdering::symmetric;
    std::uint64_t seed = 0;
    ToleranceOverrides tol;
};

struct AffineContext {
    AffineGridSpec spec;  // the plus carrier; minus mirrors it
    std::uint64_t seed = 0;
    ToleranceOverrides tol;
};

// The three quadrature deviations of the refinement comparison, measured on
// the given grid and on the grid with L and M doubled (L: halved translation
// step at fixed range; M: dilation range extended at the fixed shared ratio).
struct AffineRefinementReport {
    double orthogonality_default = 0.0, orthogonality_refined = 0.0;
    double semi_invariance_default = 0.0, semi_invariance_refined = 0.0;
    double sigma_default = 0.0, sigma_refined = 0.0;
    double worst_ratio() const;
};

AffineRefinementReport measure_affine_refinement(const AffineGridSpec& spec);

// `which` empty ⇒ every check applicable to the carrier (and, for finite
// carriers, dual-dependent checks only when the dual is complete).
std::vector<CheckResult> run_finite_checks(const FiniteContext& ctx,
                                           const std::vector<std::string>& which,
                                           bool parallel = false);
std::vector<CheckResult> run_weyl_checks(const WeylContext& ctx,
                                         const std::vector<std::string>& which,
                                         bool parallel = false);
std::vector<CheckResult> run_affine_checks(const AffineContext& ctx,
                                           const std::vector<std::string>& which,
                                           bool parallel = false,
                                           double* tau_grid_out = nullptr);

}  // namespace starprod
