// starprod — CLI surface for the star-product library.
//
//   starprod run <scenario>         execute a scenario file, write the report
//   starprod list-checks            catalog of named check suites
//   starprod star ...               one star product from files
//   starprod weyl --N 5 ...         Weyl-system invariant suite
//   starprod affine --sign plus ... affine quadrature suite

#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "starprod/scenario.hpp"
#include "starprod/star.hpp"

using nlohmann::json;
using namespace starprod;

namespace {

void print_results(const json& report) {
    for (const auto& c : report["checks"]) {
        const std::string dir = c.value("direction", "max");
        std::cout << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  "
                  << c["name"].get<std::string>() << "  dev="
                  << c["max_dev"].get<double>() << "  tol=" << dir << " "
                  << c["tol"].get<double>() << "\n";
    }
    std::cout << (report["overall_pass"].get<bool>() ? "overall: PASS"
                                                     : "overall: FAIL")
              << "\n";
}

int run_and_report(const Scenario& s, const std::string& out) {
    const json report = run_scenario_json(s, out);
    print_results(report);
    return scenario_exit_code(report);
}

std::uint64_t seed_with_env(std::uint64_t seed) {
    const char* env = std::getenv("STARPROD_SEED");
    return env ? std::strtoull(env, nullptr, 10) : seed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"group-theoretical star products: Wigner/Weyl maps, twisted "
                 "convolutions and their verification suites"};
    app.require_subcommand(1);

    // --- run -----------------------------------------------------------------
    std::string scenario_path, run_out;
    bool run_parallel = false;
    auto* run = app.add_subcommand("run", "execute a scenario file");
    run->add_option("scenario", scenario_path, "scenario file")->required();
    run->add_option("--out", run_out, "report path override");
    run->add_flag("--parallel", run_parallel, "run independent suites concurrently");

    // --- list-checks -----------------------------------------------------------
    bool list_json = false;
    auto* list = app.add_subcommand("list-checks", "catalog of check suites");
    list->add_flag("--json", list_json, "emit the catalog as JSON");

    // --- star ------------------------------------------------------------------
    std::string star_group, star_rep, star_f1, star_f2, star_k, star_out;
    std::string star_method = "implicit", star_dump;
    std::uint64_t star_seed = 1;
    auto* star = app.add_subcommand("star", "star product of two functions");
    star->add_option("--group", star_group)->required();
    star->add_option("--rep", star_rep)->required();
    star->add_option("--f1", star_f1)->required();
    star->add_option("--f2", star_f2)->required();
    star->add_option("--method", star_method)
        ->check(CLI::IsMember({"implicit", "explicit", "twisted", "char"}));
    star->add_option("--K", star_k, "deformation operator file");
    star->add_option("--out", star_out)->required();
    star->add_option("--dump-wigner", star_dump, "write the Wigner matrix");
    star->add_option("--seed", star_seed);

    // --- weyl -------------------------------------------------------------------
    Index weyl_n = 3;
    std::string weyl_ordering = "symmetric", weyl_out;
    std::vector<std::string> weyl_checks_sel;
    std::uint64_t weyl_seed = 1;
    auto* weyl = app.add_subcommand("weyl", "discrete Weyl-system suite");
    weyl->add_option("--N", weyl_n)->required();
    weyl->add_option("--ordering", weyl_ordering)
        ->check(CLI::IsMember({"symmetric", "standard"}));
    weyl->add_option("--check", weyl_checks_sel, "check names (or `all`)");
    weyl->add_option("--seed", weyl_seed);
    weyl->add_option("--out", weyl_out, "report path");

    // --- affine -----------------------------------------------------------------
    std::string aff_sign = "plus", aff_grid = "default", aff_out;
    std::vector<std::string> aff_checks_sel;
    AffineGridSpec aff_spec;
    std::uint64_t aff_seed = 1;
    auto* aff = app.add_subcommand("affine", "affine quadrature suite");
    aff->add_option("--sign", aff_sign)->check(CLI::IsMember({"plus", "minus"}));
    aff->add_option("--grid", aff_grid)->check(CLI::IsMember({"default"}));
    aff->add_option("--check", aff_checks_sel, "check names (or `all`)");
    aff->add_option("--L", aff_spec.L);
    aff->add_option("--M", aff_spec.M);
    aff->add_option("--K", aff_spec.K);
    aff->add_option("--a-max", aff_spec.a_max);
    aff->add_option("--x-min", aff_spec.x_min);
    aff->add_option("--r-min", aff_spec.r_min);
    aff->add_option("--rho", aff_spec.rho);
    aff->add_option("--seed", aff_seed);
    aff->add_option("--out", aff_out, "report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            Scenario s = parse_scenario(scenario_path);
            s.parallel = s.parallel || run_parallel;
            return run_and_report(s, run_out);
        }

        if (*list) {
            const auto& catalog = check_catalog();
            if (list_json) {
                json j = json::array();
                for (const auto& c : catalog) {
                    json e;
                    e["name"] = c.name;
                    e["description"] = c.description;
                    e["reference"] = c.reference;
                    e["carriers"] = c.carriers;
                    j.push_back(e);
                }
                std::cout << j.dump(2) << "\n";
            } else {
                for (const auto& c : catalog) {
                    std::cout << c.name << "\n    " << c.description
                              << "\n    verifies: " << c.reference
                              << "\n    carriers:";
                    for (const auto& cr : c.carriers) std::cout << " " << cr;
                    std::cout << "\n";
                }
                std::cout << catalog.size() << " checks\n";
            }
            return 0;
        }

        if (*star) {
            auto group = load_group(star_group);
            auto rep = load_rep(star_rep, group);
            Rng rng(seed_with_env(star_seed), "cli-star");
            const auto dm = duflo_moore_from_orthogonality(rep, rng);
            const auto w = build_wigner(rep, dm);
            if (!star_dump.empty()) {
                std::ofstream os(star_dump);
                dump_wigner(os, w);
            }
            const GFunction f1 = load_gfunction(star_f1, group);
            const GFunction f2 = load_gfunction(star_f2, group);

            const auto t0 = std::chrono::steady_clock::now();
            const GFunction oracle = star_implicit(w, f1, f2);
            GFunction result = oracle;
            double dev = 0.0;
            bool certified = true;
            if (!star_k.empty()) {
                const auto k = DeformationOperator::make(load_hsoperator(star_k));
                std::vector<CVec> basis;
                for (Index i = 0; i < rep.dim; ++i) {
                    CVec v = CVec::Zero(rep.dim);
                    v(i) = 1.0;
                    basis.push_back(v);
                }
                const auto r = kdeformed_star(w, rep, f1, f2, k, basis);
                result = r.value;
                dev = r.implicit_explicit_dev;
            } else if (star_method == "explicit") {
                std::vector<CVec> basis;
                for (Index i = 0; i < rep.dim; ++i) {
                    CVec v = CVec::Zero(rep.dim);
                    v(i) = 1.0;
                    basis.push_back(v);
                }
                const auto kernel = build_star_kernel(w, rep, basis);
                const auto r = kernel.star(f1, f2);
                result = r.value;
                certified = r.certified;
                dev = (result.values - oracle.values).cwiseAbs().maxCoeff();
            } else if (star_method == "twisted") {
                result = twisted_convolution(w, rep, f1, f2);
                dev = (result.values - oracle.values).cwiseAbs().maxCoeff();
            } else if (star_method == "char") {
                result = star_char_formula(rep, f1, f2);
                dev = (result.values - oracle.values).cwiseAbs().maxCoeff();
            }
            const double seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              t0)
                    .count();

            json rep_json;
            rep_json["method"] = star_k.empty() ? star_method : "kdeformed";
            rep_json["max_dev_vs_oracle"] = dev;
            rep_json["certified"] = certified;
            json norms;
            norms["f1"] = l2_norm(f1);
            norms["f2"] = l2_norm(f2);
            norms["result"] = l2_norm(result);
            rep_json["norms"] = norms;
            json timings;
            timings["star_seconds"] = seconds;
            rep_json["timings"] = timings;
            write_report_atomic(rep_json, star_out);

            std::ofstream fs(star_out + ".values");
            save_gfunction(fs, result);
            std::cout << rep_json.dump(2) << "\n";
            return 0;
        }

        if (*weyl) {
            Scenario s;
            s.carrier = "weyl-system";
            s.n = weyl_n;
            s.ordering = weyl_ordering == "standard" ? WeylOrdering::standard
                                                     : WeylOrdering::symmetric;
            s.seed = seed_with_env(weyl_seed);
            for (const auto& c : weyl_checks_sel)
                if (c != "all") s.checks.push_back(c);
            return run_and_report(s, weyl_out);
        }

        if (*aff) {
            Scenario s;
            s.carrier = "affine";
            s.affine = aff_spec;
            s.affine.sign = aff_sign == "minus" ? -1 : +1;
            s.seed = seed_with_env(aff_seed);
            for (const auto& c : aff_checks_sel)
                if (c != "all") s.checks.push_back(c);
            return run_and_report(s, aff_out);
        }
    } catch (const ScenarioError& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
