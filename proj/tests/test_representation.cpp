#include <doctest.h>

#include "starprod/representation.hpp"
#include "starprod/weyl_system.hpp"

using namespace starprod;

namespace {
const std::string kData = STARPROD_DATA_DIR;

ProjRep trivial_rep(FiniteGroupPtr g, Index dim) {
    ProjRep u;
    u.group = g;
    u.dim = dim;
    u.mats.assign(g->order, CMat::Identity(dim, dim));
    u.multiplier = Multiplier::trivial(g->order);
    return u;
}

// U ⊕ U with the same multiplier
ProjRep direct_sum(const ProjRep& u) {
    ProjRep s;
    s.group = u.group;
    s.dim = 2 * u.dim;
    s.multiplier = u.multiplier;
    for (const auto& m : u.mats) {
        CMat b = CMat::Zero(s.dim, s.dim);
        b.topLeftCorner(u.dim, u.dim) = m;
        b.bottomRightCorner(u.dim, u.dim) = m;
        s.mats.push_back(b);
    }
    return s;
}
}  // namespace

TEST_CASE("projective representation validation") {
    SUBCASE("trivial rep of S3 passes") {
        auto g = load_group(kData + "/groups/s3.grp");
        CHECK(validate_projrep(trivial_rep(g, 2)).pass());
    }
    SUBCASE("Weyl system on Z_4xZ_4 passes the exhaustive pair check") {
        auto sys = build_weyl_system(4, WeylOrdering::standard);
        CHECK(validate_projrep(sys.rep).pass());
    }
    SUBCASE("a sign flip breaks the multiplier relation") {
        auto sys = build_weyl_system(3);
        sys.rep.mats[4] *= -1.0;
        const auto rep = validate_projrep(sys.rep);
        CHECK(!rep.pass());
        CHECK(rep.max_multiplier > 0.5);
    }
}

TEST_CASE("coefficient functions") {
    Rng rng(7);
    SUBCASE("value at the identity is the squared norm") {
        auto g = load_group(kData + "/groups/s3.grp");
        auto u = load_rep(kData + "/reps/s3_standard.rep", g);
        const CVec psi = rng.vector(2);
        CHECK(std::abs(coefficient(u, psi, psi).values(g->identity) -
                       cplx(psi.squaredNorm(), 0)) < 1e-14);
    }
    SUBCASE("trivial rep gives a constant") {
        auto g = load_group(kData + "/groups/q8.grp");
        auto u = trivial_rep(g, 3);
        const CVec psi = rng.vector(3), phi = rng.vector(3);
        const GFunction c = coefficient(u, psi, phi);
        for (Index i = 0; i < g->order; ++i)
            CHECK(std::abs(c.values(i) - psi.dot(phi)) < 1e-14);
    }
    SUBCASE("Z_2xZ_2 Weyl system with basis probes: hand-computed values") {
        auto sys = build_weyl_system(2, WeylOrdering::standard);
        CVec e0 = CVec::Zero(2);
        e0(0) = 1.0;
        const GFunction c = coefficient(sys.rep, e0, e0);
        // U(q,p) = X^q Z^p: <U e0, e0> = delta_{q,0}
        CHECK(std::abs(c.values(sys.point(0, 0)) - cplx(1, 0)) < 1e-15);
        CHECK(std::abs(c.values(sys.point(0, 1)) - cplx(1, 0)) < 1e-15);
        CHECK(std::abs(c.values(sys.point(1, 0))) < 1e-15);
        CHECK(std::abs(c.values(sys.point(1, 1))) < 1e-15);
    }
}

TEST_CASE("Duflo-Moore constants from the orthogonality relations") {
    Rng rng(8);
    SUBCASE("compact normalization: d = dim^{-1/2}") {
        auto g = load_group(kData + "/groups/s3.grp");
        auto u = load_rep(kData + "/reps/s3_standard.rep", g);
        const auto dm = duflo_moore_from_orthogonality(u, rng);
        CHECK(dm.diag(0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    }
    SUBCASE("Weyl normalization: d = 1") {
        auto sys = build_weyl_system(4, WeylOrdering::standard);
        const auto dm = duflo_moore_from_orthogonality(sys.rep, rng);
        CHECK(dm.diag(0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("trivial group, dim 1: d = 1") {
        auto g = build_cyclic_product_group(1);
        const auto dm = duflo_moore_from_orthogonality(trivial_rep(g, 1), rng);
        CHECK(dm.diag(0) == doctest::Approx(1.0));
    }
    SUBCASE("reducible representations are rejected") {
        auto g = load_group(kData + "/groups/s3.grp");
        auto u = load_rep(kData + "/reps/s3_standard.rep", g);
        CHECK_THROWS_AS(duflo_moore_from_orthogonality(direct_sum(u), rng),
                        ReducibleRepresentation);
    }
}

TEST_CASE("wavelet transform") {
    Rng rng(9);
    auto g = load_group(kData + "/groups/s3.grp");
    auto u = load_rep(kData + "/reps/s3_standard.rep", g);
    const auto dm = duflo_moore_from_orthogonality(u, rng);
    const CVec psi = rng.unit_vector(2);
    const CMat w = wavelet_matrix(u, dm, psi);
    const auto wd = g->weight.cast<cplx>().asDiagonal();

    SUBCASE("zero vector maps to the zero function") {
        CHECK((w * CVec::Zero(2)).norm() == 0.0);
    }
    SUBCASE("isometry and reconstruction") {
        const CVec phi = rng.vector(2);
        const CVec wf = w * phi;
        const double l2 = std::sqrt((wf.adjoint() * (wd * wf))(0, 0).real());
        CHECK(l2 == doctest::Approx(phi.norm()).epsilon(1e-12));
        CHECK((w.adjoint() * (wd * wf) - phi).norm() < 1e-12);
    }
    SUBCASE("intertwines U with the left regular m-representation (Weyl N=3)") {
        auto sys = build_weyl_system(3);
        Rng r2(10);
        const auto dm3 = duflo_moore_from_orthogonality(sys.rep, r2);
        const CVec psi3 = r2.unit_vector(3);
        const CMat w3 = wavelet_matrix(sys.rep, dm3, psi3);
        for (Index gi = 0; gi < sys.rep.group->order; ++gi) {
            const CMat lhs = w3 * sys.rep.at(gi);
            const CMat rhs =
                left_regular_m(*sys.rep.group, sys.rep.multiplier, gi) * w3;
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("zero analyzing vector is rejected") {
        CHECK_THROWS_AS(wavelet_matrix(u, dm, CVec::Zero(2)), InvalidArgument);
    }
}

TEST_CASE("auxiliary representations") {
    Rng rng(11);
    SUBCASE("left regular with trivial multiplier is plain translation") {
        auto g = load_group(kData + "/groups/s3.grp");
        const Multiplier m = Multiplier::trivial(6);
        CHECK((left_regular_m(*g, m, g->identity) - CMat::Identity(6, 6)).norm() ==
              0.0);
        const CMat r = left_regular_m(*g, m, 2);
        GFunction f{g, rng.vector(6)};
        const CVec rf = r * f.values;
        for (Index gp = 0; gp < 6; ++gp)
            CHECK(std::abs(rf(gp) - f.values(g->mult(g->inv(2), gp))) < 1e-15);
    }
    SUBCASE("two-sided action is the identity on abelian carriers with m == 1") {
        auto g = build_cyclic_product_group(3);
        const Multiplier m = Multiplier::trivial(9);
        for (Index gi = 0; gi < 9; ++gi)
            CHECK((two_sided_Tm(*g, m, gi) - CMat::Identity(9, 9)).norm() < 1e-14);
    }
    SUBCASE("T_m is a representation on S3 with m == 1") {
        auto g = load_group(kData + "/groups/s3.grp");
        const Multiplier m = Multiplier::trivial(6);
        for (Index a = 0; a < 6; ++a)
            for (Index b = 0; b < 6; ++b) {
                const CMat lhs = two_sided_Tm(*g, m, a) * two_sided_Tm(*g, m, b);
                const CMat rhs = two_sided_Tm(*g, m, g->mult(a, b));
                CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
            }
    }
    SUBCASE("T_m is unitary for the Weyl multiplier, N=4") {
        auto sys = build_weyl_system(4, WeylOrdering::standard);
        const auto& g = *sys.rep.group;
        for (Index gi = 0; gi < g.order; ++gi) {
            const CMat t = two_sided_Tm(g, sys.rep.multiplier, gi);
            CHECK((t.adjoint() * t - CMat::Identity(g.order, g.order))
                      .cwiseAbs()
                      .maxCoeff() < 1e-13);
        }
    }
    SUBCASE("U∨U is a plain representation even for projective U (Weyl N=3)") {
        auto sys = build_weyl_system(3);
        const auto& g = *sys.rep.group;
        CHECK((uvee_matrix(sys.rep, g.identity) - CMat::Identity(9, 9)).norm() <
              1e-14);
        const CMat a = rng.matrix(3, 3);
        CHECK(hs_norm(uvee_apply(sys.rep, 5, a)) ==
              doctest::Approx(hs_norm(a)).epsilon(1e-12));
        for (Index x = 0; x < g.order; ++x)
            for (Index y = 0; y < g.order; ++y) {
                const CMat lhs = uvee_matrix(sys.rep, x) * uvee_matrix(sys.rep, y);
                const CMat rhs = uvee_matrix(sys.rep, g.mult(x, y));
                CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
            }
    }
}

TEST_CASE("commutant dimension") {
    Rng rng(12);
    SUBCASE("irreducible Weyl system N=5") {
        auto sys = build_weyl_system(5);
        CHECK(commutant_dimension(sys.rep) == 1);
    }
    SUBCASE("direct sum of two copies has a 4-dimensional commutant") {
        auto g = load_group(kData + "/groups/s3.grp");
        auto u = load_rep(kData + "/reps/s3_standard.rep", g);
        CHECK(commutant_dimension(direct_sum(u)) == 4);
    }
    SUBCASE("trivial rep in dim 2 has the full matrix algebra") {
        auto g = load_group(kData + "/groups/s3.grp");
        CHECK(commutant_dimension(trivial_rep(g, 2)) == 4);
    }
}

TEST_CASE("shipped duals satisfy the Peter-Weyl multiplicity count") {
    struct Entry {
        const char* group;
        std::vector<const char*> reps;
    };
    const std::vector<Entry> duals = {
        {"z4", {"z4_chi0", "z4_chi1", "z4_chi2", "z4_chi3"}},
        {"z5", {"z5_chi0", "z5_chi1", "z5_chi2", "z5_chi3", "z5_chi4"}},
        {"s3", {"s3_trivial", "s3_sign", "s3_standard"}},
        {"d4", {"d4_chi_pp", "d4_chi_pm", "d4_chi_mp", "d4_chi_mm", "d4_standard"}},
        {"q8", {"q8_chi_triv", "q8_chi_i", "q8_chi_j", "q8_chi_k", "q8_spin"}},
    };
    for (const auto& e : duals) {
        auto g = load_group(kData + "/groups/" + e.group + ".grp");
        Index sum = 0;
        for (const auto* r : e.reps) {
            auto u = load_rep(kData + "/reps/" + std::string(r) + ".rep", g);
            CHECK(validate_projrep(u).pass());
            CHECK(commutant_dimension(u) == 1);
            sum += u.dim * u.dim;
        }
        CHECK(sum == g->order);
    }
}

TEST_CASE("semi-invariance holds trivially on unimodular carriers") {
    // U(g) D = Δ^{1/2} D U(g) with Δ ≡ 1 and D scalar
    Rng rng(13);
    auto sys = build_weyl_system(3);
    const auto dm = duflo_moore_from_orthogonality(sys.rep, rng);
    for (Index gi = 0; gi < sys.rep.group->order; ++gi) {
        const CMat lhs = sys.rep.at(gi) * dm.matrix();
        const CMat rhs = dm.matrix() * sys.rep.at(gi);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);
    }
}
