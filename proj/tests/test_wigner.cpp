#include <doctest.h>

#include <sstream>

#include "starprod/star.hpp"
#include "starprod/weyl_system.hpp"

using namespace starprod;

namespace {
const std::string kData = STARPROD_DATA_DIR;

struct Fixture {
    FiniteGroupPtr group;
    ProjRep rep;
    DufloMoore dm;

    explicit Fixture(const std::string& g, const std::string& r, int seed = 21) {
        group = load_group(kData + "/groups/" + g + ".grp");
        rep = load_rep(kData + "/reps/" + r + ".rep", group);
        Rng rng(seed);
        dm = duflo_moore_from_orthogonality(rep, rng);
    }
};
}  // namespace

TEST_CASE("Wigner map construction") {
    SUBCASE("trivial group, dim 1: the map is the 1x1 identity") {
        auto g = build_cyclic_product_group(1);
        ProjRep u;
        u.group = g;
        u.dim = 1;
        u.mats = {CMat::Identity(1, 1)};
        u.multiplier = Multiplier::trivial(1);
        const auto w = build_wigner(u, DufloMoore::scalar(1.0, 1));
        CHECK(w.matrix().rows() == 1);
        CHECK(std::abs(w.matrix()(0, 0) - cplx(1, 0)) < 1e-15);
    }
    SUBCASE("Weyl N=2: image of the identity is supported at the origin") {
        auto sys = build_weyl_system(2, WeylOrdering::standard);
        Rng rng(22);
        const auto dm = duflo_moore_from_orthogonality(sys.rep, rng);
        const auto w = build_wigner(sys.rep, dm);
        const GFunction f = w.wigner(CMat::Identity(2, 2));
        CHECK(std::abs(f.values(sys.point(0, 0)) - cplx(2, 0)) < 1e-14);
        for (Index i = 1; i < 4; ++i) CHECK(std::abs(f.values(i)) < 1e-14);
    }
    SUBCASE("isometry on the standard S3 irrep") {
        Fixture fx("s3", "s3_standard");
        const auto w = build_wigner(fx.rep, fx.dm);
        Rng rng(23);
        for (int t = 0; t < 20; ++t) {
            const CMat a = rng.matrix(2, 2);
            CHECK(l2_norm(w.wigner(a)) ==
                  doctest::Approx(hs_norm(a)).epsilon(1e-11));
        }
        CHECK(w.isometry_defect() < 1e-12);
    }
    SUBCASE("unimodular shortcut S(A)(g) = d^{-1} tr(U(g)* A)") {
        Fixture fx("d4", "d4_standard");
        const auto w = build_wigner(fx.rep, fx.dm);
        Rng rng(24);
        const CMat a = rng.matrix(2, 2);
        const GFunction f = w.wigner(a);
        for (Index g = 0; g < fx.group->order; ++g) {
            const cplx direct =
                (fx.rep.at(g).adjoint() * a).trace() / fx.dm.diag(0);
            CHECK(std::abs(f.values(g) - direct) < 1e-13);
        }
    }
    SUBCASE("reducible input is rejected") {
        Fixture fx("s3", "s3_standard");
        ProjRep sum;
        sum.group = fx.group;
        sum.dim = 4;
        sum.multiplier = fx.rep.multiplier;
        for (const auto& m : fx.rep.mats) {
            CMat b = CMat::Zero(4, 4);
            b.topLeftCorner(2, 2) = m;
            b.bottomRightCorner(2, 2) = m;
            sum.mats.push_back(b);
        }
        CHECK_THROWS_AS(build_wigner(sum, DufloMoore::scalar(1.0, 4)),
                        ReducibleRepresentation);
    }
}

TEST_CASE("Weyl map (adjoint)") {
    Fixture fx("s3", "s3_standard");
    const auto w = build_wigner(fx.rep, fx.dm);
    Rng rng(25);

    SUBCASE("round trip S*S = I") {
        for (int t = 0; t < 10; ++t) {
            const CMat a = rng.matrix(2, 2);
            CHECK((w.weyl(w.wigner(a)) - a).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    SUBCASE("functions orthogonal to the range quantize to zero") {
        GFunction f{fx.group, rng.vector(6)};
        GFunction residual{fx.group, f.values - w.project(f).values};
        CHECK(hs_norm(w.weyl(residual)) < 1e-12);
    }
    SUBCASE("delta at the identity maps to w(e) d^{-1} U(e)") {
        GFunction delta = zero_gfunction(fx.group);
        delta.values(fx.group->identity) = 1.0;
        const CMat expect = (std::sqrt(2.0) / 6.0) * CMat::Identity(2, 2);
        CHECK((w.weyl(delta) - expect).cwiseAbs().maxCoeff() < 1e-13);
    }
    SUBCASE("operator-sum form matches the matrix adjoint") {
        GFunction f{fx.group, rng.vector(6)};
        CMat acc = CMat::Zero(2, 2);
        for (Index g = 0; g < 6; ++g)
            acc += fx.group->weight(g) * f.values(g) * fx.rep.at(g);
        acc /= fx.dm.diag(0);
        CHECK((w.weyl(f) - acc).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("range projection") {
    SUBCASE("Weyl system: the range is everything") {
        auto sys = build_weyl_system(4, WeylOrdering::standard);
        Rng rng(26);
        const auto dm = duflo_moore_from_orthogonality(sys.rep, rng);
        const auto w = build_wigner(sys.rep, dm);
        const auto pr = w.projector_report();
        CHECK(pr.rank == 16);
        CHECK((w.projector_matrix() - CMat::Identity(16, 16))
                  .cwiseAbs()
                  .maxCoeff() < 1e-12);
    }
    SUBCASE("S3 standard irrep: rank and trace are dim^2") {
        Fixture fx("s3", "s3_standard");
        const auto w = build_wigner(fx.rep, fx.dm);
        const auto pr = w.projector_report();
        CHECK(pr.rank == 4);
        CHECK(pr.trace_dev < 1e-12);
        CHECK(pr.idempotent < 1e-12);
        CHECK(pr.self_adjoint < 1e-12);
    }
}

TEST_CASE("intertwining relations") {
    SUBCASE("Weyl N=3: all three identities below 1e-10") {
        auto sys = build_weyl_system(3);
        Rng rng(27);
        const auto dm = duflo_moore_from_orthogonality(sys.rep, rng);
        const auto w = build_wigner(sys.rep, dm);
        const auto rep = check_intertwinings(w, sys.rep, rng);
        CHECK(rep.uvee_vs_Tm < 1e-10);
        CHECK(rep.conj_vs_Jm < 1e-10);
        CHECK(rep.left_vs_Rm < 1e-10);
    }
    SUBCASE("S3 with m == 1: conjugation reduces to f(g^{-1})*") {
        Fixture fx("s3", "s3_standard");
        const auto w = build_wigner(fx.rep, fx.dm);
        Rng rng(28);
        const CMat a = rng.matrix(2, 2);
        const GFunction sa = w.wigner(a);
        const GFunction lhs = w.wigner(a.adjoint());
        for (Index g = 0; g < 6; ++g)
            CHECK(std::abs(lhs.values(g) -
                           std::conj(sa.values(fx.group->inv(g)))) < 1e-12);
    }
}

TEST_CASE("ranges of inequivalent irreps are orthogonal") {
    Fixture s2("s3", "s3_standard");
    Fixture s1("s3", "s3_sign");
    const auto w2 = build_wigner(s2.rep, s2.dm);
    const auto w1 = build_wigner(s1.rep, s1.dm);
    const auto wd = s2.group->weight.cast<cplx>().asDiagonal();
    const CMat cross = w2.matrix().adjoint() * (wd * w1.matrix());
    CHECK(cross.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("wigner matrix dump format") {
    Fixture fx("s3", "s3_sign");
    const auto w = build_wigner(fx.rep, fx.dm);
    std::ostringstream os;
    dump_wigner(os, w);
    const std::string s = os.str();
    CHECK(s.find("rows 6 cols 1") == 0);
    CHECK(s.find("row-major") != std::string::npos);
}
