#include <doctest.h>

#include <Eigen/SVD>

#include "starprod/affine.hpp"
#include "starprod/star.hpp"

using namespace starprod;

namespace {

// small structural grid: coarse, fast, wide frequency range
AffineGridSpec small_spec() {
    AffineGridSpec s;
    s.L = 16;
    s.M = 6;
    s.K = 32;
    s.a_max = 8.0;
    s.x_min = std::pow(2.0, -8);
    s.rho = std::sqrt(2.0);
    s.r_min = 0.5;
    s.fiducial_count = 3;
    return s;
}

// quantitative grid: the whole frequency range satisfies the translation
// sampling condition (x_max · da < π), so the kernel identities are clean
AffineGridSpec nyquist_spec() {
    AffineGridSpec s;
    s.L = 32;
    s.M = 28;
    s.K = 48;
    s.a_max = 16.0;
    s.x_min = std::pow(2.0, -5);
    s.rho = std::pow(2.0, 0.125);
    s.r_min = std::pow(s.rho, -14.0);
    s.fiducial_count = 4;
    return s;
}

const AffineRep& nyquist_rep() {
    static const AffineRep rep = build_affine(nyquist_spec());
    return rep;
}

CVec log_bump(const AffineGrid& g, double center, double sigma) {
    CVec v(g.spec.K);
    for (Index i = 0; i < g.spec.K; ++i) {
        const double t = std::log(std::abs(g.x_nodes(i)) / center);
        v(i) = std::sqrt(g.x_weight(i)) * std::exp(-t * t / (2 * sigma * sigma));
    }
    return CVec(v / v.norm());
}

}  // namespace

TEST_CASE("affine grid construction") {
    SUBCASE("default spec matches the documented shape") {
        const auto rep = build_affine(AffineGridSpec{});
        const auto& g = rep.grid();
        CHECK(g.spec.L == 64);
        CHECK(g.spec.M == 32);
        CHECK(g.spec.K == 64);
        CHECK(g.da == doctest::Approx(1.0));
        CHECK(g.r_nodes(0) == doctest::Approx(0.25));
        CHECK(g.x_nodes(0) == doctest::Approx(1.0 / 16.0));
        CHECK(g.group->size() == 2048);
        const double cell = std::sqrt(g.spec.rho) - 1.0 / std::sqrt(g.spec.rho);
        const Index pt = g.point(3, 5);
        CHECK(g.group->weight(pt) == doctest::Approx(g.da * cell / g.r_nodes(5)));
        CHECK(g.group->modular(pt) == doctest::Approx(1.0 / g.r_nodes(5)));
    }
    SUBCASE("long-form builder checks ratio compatibility") {
        CHECK_NOTHROW(build_affine(+1, 16, 8, 16, 0.5, 0.5 * std::pow(2.0, 3.5),
                                   8.0, 0.0625, 0.0625 * std::pow(2.0, 7.5)));
        CHECK_THROWS_AS(build_affine(+1, 16, 8, 16, 0.5, 3.0, 8.0, 0.0625,
                                     0.0625 * std::pow(2.0, 7.5)),
                        GridMismatch);
        CHECK_THROWS_AS(build_affine(+1, 16, 8, 16, 0.3, 0.3 * std::pow(2.0, 3.5),
                                     8.0, 0.0625, 0.0625 * std::pow(2.0, 7.5)),
                        GridMismatch);
    }
    SUBCASE("identity row is exact, unit-dilation rows are diagonal phases") {
        const auto rep = build_affine(small_spec());
        const auto& g = rep.grid();
        const Index j1 = -g.shift0;
        Index ia0 = 0;
        for (Index i = 0; i < g.spec.L; ++i)
            if (std::abs(g.a_nodes(i)) < 1e-12) ia0 = i;
        CHECK((rep.matrix(g.point(ia0, j1)) - CMat::Identity(g.spec.K, g.spec.K))
                  .cwiseAbs()
                  .maxCoeff() == 0.0);
        const CMat u = rep.matrix(g.point(2, j1));
        CHECK((u.adjoint() * u - CMat::Identity(g.spec.K, g.spec.K))
                  .cwiseAbs()
                  .maxCoeff() < 1e-15);
    }
    SUBCASE("apply agrees with the dense matrix") {
        const auto rep = build_affine(small_spec());
        Rng rng(61);
        const CVec v = rng.vector(rep.dim());
        for (Index pt : {Index(0), Index(17), Index(55)}) {
            CHECK((rep.apply(pt, v) - rep.matrix(pt) * v).norm() < 1e-13);
            CHECK((rep.apply_adjoint(pt, v) - rep.matrix(pt).adjoint() * v)
                      .norm() < 1e-13);
        }
    }
    SUBCASE("semi-invariance with weight r^{-1/2} is grid-exact") {
        CHECK(affine_semi_invariance_defect(build_affine(small_spec())) < 1e-13);
    }
}

TEST_CASE("Laguerre basis") {
    const auto rep = build_affine(small_spec());
    const auto& g = rep.grid();
    SUBCASE("closed form of the degree-2 polynomial") {
        for (double x : {0.3, 1.7, 4.0})
            CHECK(laguerre_polynomial(2, x) ==
                  doctest::Approx(1.0 - 2.0 * x + x * x / 2.0));
    }
    SUBCASE("first vector is the exponential profile") {
        const auto basis = laguerre_basis(g, 1);
        CVec raw(g.spec.K);
        for (Index i = 0; i < g.spec.K; ++i)
            raw(i) = std::sqrt(g.x_weight(i)) *
                     std::exp(-std::abs(g.x_nodes(i)) / 2.0);
        raw /= raw.norm();
        CHECK((basis[0] - raw).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("Gram matrix is the identity, even past the degenerate tail") {
        const auto basis = laguerre_basis(g, g.spec.K);
        for (std::size_t i = 0; i < basis.size(); ++i)
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const cplx want = i == j ? cplx(1, 0) : cplx(0, 0);
                CHECK(std::abs(basis[i].dot(basis[j]) - want) < 1e-12);
            }
    }
}

TEST_CASE("orthogonality relations by quadrature") {
    SUBCASE("orthogonal analyzed vectors make the cross term vanish") {
        const auto& rep = nyquist_rep();
        const auto& g = rep.grid();
        const CVec b1 = log_bump(g, 0.7, 0.22);
        CVec phi2 = log_bump(g, 0.875, 0.22);
        phi2 -= b1.dot(phi2) * b1;
        phi2 /= phi2.norm();
        const GFunction c1 = affine_coefficient(rep, b1, b1);
        const GFunction c2 = affine_coefficient(rep, b1, phi2);
        const CMat d = rep.duflo_moore().matrix();
        CHECK(std::abs(l2_inner(c1, c2)) / (d * b1).squaredNorm() < 0.05);
    }
    SUBCASE("bump probes satisfy the relations on the default grid") {
        const auto dflt = build_affine(AffineGridSpec{});
        const auto report =
            affine_orthogonality_check(dflt, affine_bump_probes(dflt.grid()));
        CHECK(report.max_rel_dev < 1e-2);
    }
}

TEST_CASE("sigma kernel of the Weyl map") {
    const auto& rep = nyquist_rep();
    const auto& g = rep.grid();
    Rng rng(62);
    SUBCASE("zero in, zero out") {
        CHECK(weyl_kernel_sigma(rep, zero_gfunction(g.group)).norm() == 0.0);
    }
    SUBCASE("matches the direct adjoint and the materialized map") {
        GFunction f{g.group, rng.vector(g.group->size())};
        const CMat direct = affine_weyl_direct(rep, f);
        CHECK((weyl_kernel_sigma(rep, f) - direct).norm() / l2_norm(f) < 1e-12);
        const auto w = build_wigner_unchecked(rep.family(), rep.duflo_moore());
        CHECK((w.weyl(f) - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
    SUBCASE("partial-isometry norm bound on well-sampled inputs") {
        const auto w = build_wigner_unchecked(rep.family(), rep.duflo_moore());
        const GFunction c = affine_coefficient(rep, log_bump(g, 0.7, 0.22),
                                               log_bump(g, 0.875, 0.22));
        CHECK(hs_norm(w.weyl(c)) <= l2_norm(c) * (1.0 + 1e-3));
    }
    SUBCASE("coefficient functions produce near-rank-one kernels") {
        const CVec psi = log_bump(g, 0.7, 0.22), phi = log_bump(g, 0.875, 0.22);
        const GFunction c = affine_coefficient(rep, psi, phi);
        const CMat k = weyl_kernel_sigma(rep, c);
        Eigen::JacobiSVD<CMat> svd(k);
        const auto& sv = svd.singularValues();
        REQUIRE(sv.size() >= 2);
        CHECK(sv(1) / sv(0) < 0.1);
        // the kernel recovers the rank-one structure up to quadrature error
        const CMat expect = rank_one(phi, rep.duflo_moore().matrix() * psi);
        CHECK((k - expect).norm() / expect.norm() < 0.15);
    }
}

TEST_CASE("affine star product") {
    const auto& rep = nyquist_rep();
    const auto& g = rep.grid();
    const auto w = build_wigner_unchecked(rep.family(), rep.duflo_moore());
    const auto basis = laguerre_basis(g, g.spec.K);
    const CVec b1 = log_bump(g, 0.7, 0.22), b2 = log_bump(g, 0.875, 0.22),
               b3 = log_bump(g, 0.56, 0.22);
    const GFunction f1 = w.wigner(rank_one(b1, b2));
    const GFunction f2 = w.wigner(rank_one(b3, b1));

    SUBCASE("zero absorbs") {
        CHECK(l2_norm(affine_star(rep, f1, zero_gfunction(g.group), basis,
                                  g.spec.K)) < 1e-14);
    }
    SUBCASE("factored route tracks the oracle and improves with the basis") {
        const GFunction oracle = star_implicit(w, f1, f2);
        const double d4 = l2_rel_dev(affine_star(rep, f1, f2, basis, 4), oracle);
        const double dfull =
            l2_rel_dev(affine_star(rep, f1, f2, basis, g.spec.K), oracle);
        CHECK(dfull < 1e-2);
        CHECK(dfull <= d4 + 1e-12);
    }
    SUBCASE("dropping the modular factor wrecks the agreement") {
        const GFunction oracle = star_implicit(w, f1, f2);
        const double with_mod =
            l2_rel_dev(affine_star(rep, f1, f2, basis, g.spec.K, true), oracle);
        const double without =
            l2_rel_dev(affine_star(rep, f1, f2, basis, g.spec.K, false), oracle);
        CHECK(without > 10.0 * with_mod);
    }
    SUBCASE("n_max bounds are enforced") {
        CHECK_THROWS_AS(affine_star(rep, f1, f2, basis, 0), InvalidArgument);
        CHECK_THROWS_AS(affine_star(rep, f1, f2, basis, g.spec.K + 1),
                        InvalidArgument);
    }
}

TEST_CASE("plus and minus carriers") {
    auto sp = nyquist_spec();
    const auto& plus = nyquist_rep();
    sp.sign = -1;
    const auto minus = build_affine(sp);
    Rng rng(63);
    SUBCASE("mirrored frequency grids") {
        CHECK(minus.grid().x_nodes(0) == doctest::Approx(-sp.x_min));
        CHECK((plus.grid().x_nodes + minus.grid().x_nodes).cwiseAbs().maxCoeff() <
              1e-15);
    }
    SUBCASE("Wigner ranges are nearly orthogonal") {
        const auto wp = build_wigner_unchecked(plus.family(), plus.duflo_moore());
        const auto wm =
            build_wigner_unchecked(minus.family(), minus.duflo_moore());
        const CMat a = rng.matrix(plus.dim(), plus.dim());
        const CMat b = rng.matrix(minus.dim(), minus.dim());
        GFunction sp_f = wp.wigner(a);
        GFunction sm_f = wm.wigner(b);
        CHECK(std::abs(l2_inner(sm_f, sp_f)) / (hs_norm(a) * hs_norm(b)) < 0.01);
    }
}

TEST_CASE("admissibility report") {
    const auto rep = build_affine(small_spec());
    const auto& g = rep.grid();
    const Index k = g.spec.K;
    SUBCASE("symmetric spectrum away from zero: finite, equal, unflagged") {
        CVec psi_hat(2 * k);
        for (Index i = 0; i < k; ++i) {
            const double t = std::log(std::abs(g.x_nodes(i)));
            const double v = std::exp(-t * t);
            psi_hat(i) = v;
            psi_hat(k + i) = v;
        }
        const auto r = admissibility_check(g, psi_hat);
        CHECK(r.integral_minus == doctest::Approx(r.integral_plus));
        CHECK(!r.flagged_minus);
        CHECK(!r.flagged_plus);
    }
    SUBCASE("spectra that stay finite at zero blow up under refinement") {
        // ψ̂ ≡ 1 below |x| = 1: ∫|x|⁻¹|ψ̂|² grows like log(1/x_min)
        auto fill = [](const AffineGrid& grid, Index dim) {
            CVec v = CVec::Zero(2 * dim);
            for (Index i = 0; i < dim; ++i)
                if (std::abs(grid.x_nodes(i)) < 1.0) {
                    v(i) = 1.0;
                    v(dim + i) = 1.0;
                }
            return v;
        };
        const auto r1 = admissibility_check(g, fill(g, k));
        CHECK(r1.flagged_plus);  // edge cells carry weight: refinement risk
        auto fine = small_spec();
        fine.x_min /= 4.0;
        fine.K += 4;  // extend toward zero at the same ratio
        const auto rep2 = build_affine(fine);
        const auto r2 =
            admissibility_check(rep2.grid(), fill(rep2.grid(), fine.K));
        CHECK(r2.integral_plus > r1.integral_plus + 0.1);
    }
    SUBCASE("rescaling scales the integrals quadratically") {
        CVec psi_hat = CVec::Ones(2 * k) * 0.5;
        const auto r1 = admissibility_check(g, psi_hat);
        const auto r2 = admissibility_check(g, CVec(2.0 * psi_hat));
        CHECK(r2.integral_plus == doctest::Approx(4.0 * r1.integral_plus));
    }
}

TEST_CASE("composition handled through the quadrature group") {
    const auto rep = build_affine(small_spec());
    const auto& qg = *rep.grid().group;
    bool found_on = false, found_off = false;
    for (Index p1 = 0; p1 < qg.size() && !(found_on && found_off); ++p1)
        for (Index p2 = 0; p2 < qg.size(); ++p2) {
            const auto c = qg.compose(p1, p2);
            if (c.index) {
                found_on = true;
                const auto& a = qg.points[p1];
                const auto& b = qg.points[p2];
                const auto& r = qg.points[*c.index];
                CHECK(r[0] == doctest::Approx(a[0] + a[1] * b[0]));
                CHECK(r[1] == doctest::Approx(a[1] * b[1]));
            } else {
                found_off = true;
            }
            if (found_on && found_off) break;
        }
    CHECK(found_on);
    CHECK(found_off);
}
