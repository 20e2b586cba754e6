#include "starprod/scenario.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace starprod {

using nlohmann::json;

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file " + path);
    Scenario s;
    bool have_carrier = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string key;
        if (!(is >> key)) continue;
        auto fail = [&](const std::string& what) {
            throw ScenarioError(path + ":" + std::to_string(lineno) + ": " + what);
        };
        if (key == "carrier") {
            is >> s.carrier;
            if (s.carrier == "weyl") s.carrier = "weyl-system";
            if (s.carrier != "finite-group" && s.carrier != "weyl-system" &&
                s.carrier != "affine")
                fail("unknown carrier `" + s.carrier + "`");
            have_carrier = true;
        } else if (key == "seed") {
            if (!(is >> s.seed)) fail("bad seed");
        } else if (key == "checks") {
            std::string name;
            while (is >> name)
                if (name != "all") s.checks.push_back(name);
        } else if (key == "out") {
            is >> s.out_path;
        } else if (key == "parallel") {
            std::string v;
            is >> v;
            s.parallel = (v == "true" || v == "1");
        } else if (key == "tol") {
            std::string name;
            double v;
            if (!(is >> name >> v)) fail("tol needs `name value`");
            s.tol.values[name] = v;
        } else if (key == "group") {
            is >> s.group_path;
        } else if (key == "rep") {
            std::string p;
            is >> p;
            s.rep_paths.push_back(p);
        } else if (key == "principal") {
            std::size_t p;
            if (!(is >> p)) fail("bad principal index");
            s.principal = p;
        } else if (key == "N") {
            if (!(is >> s.n) || s.n < 1) fail("bad N");
        } else if (key == "ordering") {
            std::string v;
            is >> v;
            if (v == "symmetric")
                s.ordering = WeylOrdering::symmetric;
            else if (v == "standard")
                s.ordering = WeylOrdering::standard;
            else
                fail("unknown ordering `" + v + "`");
        } else if (key == "sign") {
            std::string v;
            is >> v;
            if (v == "plus")
                s.affine.sign = +1;
            else if (v == "minus")
                s.affine.sign = -1;
            else
                fail("unknown sign `" + v + "`");
        } else if (key == "L") {
            if (!(is >> s.affine.L)) fail("bad L");
        } else if (key == "M") {
            if (!(is >> s.affine.M)) fail("bad M");
        } else if (key == "K") {
            if (!(is >> s.affine.K)) fail("bad K");
        } else if (key == "a_max") {
            if (!(is >> s.affine.a_max)) fail("bad a_max");
        } else if (key == "x_min") {
            if (!(is >> s.affine.x_min)) fail("bad x_min");
        } else if (key == "r_min") {
            if (!(is >> s.affine.r_min)) fail("bad r_min");
        } else if (key == "rho") {
            if (!(is >> s.affine.rho)) fail("bad rho");
        } else {
            fail("unknown key `" + key + "`");
        }
    }
    if (!have_carrier) throw ScenarioError(path + ": missing `carrier`");
    // schema-time validation of check names against the carrier
    for (const auto& c : s.checks)
        if (!check_supports_carrier(c, s.carrier))
            throw ScenarioError("check `" + c + "` is not defined for carrier `" +
                                s.carrier + "`");
    if (s.carrier == "finite-group") {
        if (s.group_path.empty()) throw ScenarioError("finite-group needs `group`");
        if (s.rep_paths.empty()) throw ScenarioError("finite-group needs `rep`");
    }
    const char* env = std::getenv("STARPROD_SEED");
    if (env) s.seed = std::strtoull(env, nullptr, 10);
    return s;
}

namespace {

json result_to_json(const CheckResult& r) {
    json j;
    j["name"] = r.name;
    j["max_dev"] = r.max_dev;
    j["tol"] = r.tol;
    if (r.direction != "max") j["direction"] = r.direction;
    j["pass"] = r.pass;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

}  // namespace

json run_scenario_json(const Scenario& s, const std::string& out_override) {
    json report;
    report["carrier"] = s.carrier;
    json env;
    env["seed"] = s.seed;
    env["compiler"] = __VERSION__;
    env["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                   std::to_string(EIGEN_MAJOR_VERSION) + "." +
                   std::to_string(EIGEN_MINOR_VERSION);

    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckResult> results;
    if (s.carrier == "weyl-system") {
        WeylContext ctx{s.n, s.ordering, s.seed, s.tol};
        env["N"] = s.n;
        env["ordering"] =
            s.ordering == WeylOrdering::symmetric ? "symmetric" : "standard";
        results = run_weyl_checks(ctx, s.checks, s.parallel);
    } else if (s.carrier == "finite-group") {
        FiniteContext ctx;
        ctx.group = load_group(s.group_path);
        for (const auto& p : s.rep_paths)
            ctx.reps.push_back(load_rep(p, ctx.group));
        if (s.principal) {
            if (*s.principal >= ctx.reps.size())
                throw ScenarioError("principal index out of range");
            ctx.principal = *s.principal;
        } else {
            // default: the largest-dimensional shipped irrep
            std::size_t best = 0;
            for (std::size_t i = 0; i < ctx.reps.size(); ++i)
                if (ctx.reps[i].dim > ctx.reps[best].dim) best = i;
            ctx.principal = best;
        }
        ctx.seed = s.seed;
        ctx.tol = s.tol;
        env["group"] = s.group_path;
        env["order"] = ctx.group->order;
        env["principal_dim"] = ctx.reps[ctx.principal].dim;
        results = run_finite_checks(ctx, s.checks, s.parallel);
    } else if (s.carrier == "affine") {
        AffineContext ctx{s.affine, s.seed, s.tol};
        double tau = 0.0;
        results = run_affine_checks(ctx, s.checks, s.parallel, &tau);
        env["tau_grid"] = tau;
        json grid;
        grid["sign"] = s.affine.sign;
        grid["L"] = s.affine.L;
        grid["M"] = s.affine.M;
        grid["K"] = s.affine.K;
        grid["a_max"] = s.affine.a_max;
        grid["x_min"] = s.affine.x_min;
        grid["r_min"] = s.affine.r_min;
        grid["rho"] = s.affine.rho;
        env["grid"] = grid;
    } else {
        throw ScenarioError("unknown carrier `" + s.carrier + "`");
    }

    report["environment"] = env;
    bool all_pass = true;
    json checks = json::array();
    for (const auto& r : results) {
        checks.push_back(result_to_json(r));
        all_pass = all_pass && r.pass;
    }
    report["checks"] = checks;
    report["overall_pass"] = all_pass;
    report["total_wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    const std::string out = out_override.empty() ? s.out_path : out_override;
    if (!out.empty()) write_report_atomic(report, out);
    return report;
}

int scenario_exit_code(const json& report) {
    return report.value("overall_pass", false) ? 0 : 1;
}

json deterministic_view(const json& report) {
    json v = report;
    v.erase("total_wall_seconds");
    if (v.contains("checks"))
        for (auto& c : v["checks"]) c.erase("wall_seconds");
    return v;
}

void write_report_atomic(const json& report, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write report to " + tmp);
        out << report.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace starprod
