#include "starprod/representation.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <Eigen/SVD>

namespace starprod {

RepReport validate_projrep(const ProjRep& u) {
    const auto& g = *u.group;
    if (static_cast<Index>(u.mats.size()) != g.order)
        throw InvalidArgument("invalid-argument: matrix count != group order");
    for (const auto& m : u.mats)
        if (m.rows() != u.dim || m.cols() != u.dim)
            throw InvalidArgument("invalid-argument: matrix shape mismatch");
    if (u.multiplier.values.rows() != g.order)
        throw InvalidArgument("invalid-argument: multiplier shape mismatch");

    RepReport r;
    const CMat id = CMat::Identity(u.dim, u.dim);
    for (Index a = 0; a < g.order; ++a)
        r.max_unitarity = std::max(
            r.max_unitarity,
            (u.at(a).adjoint() * u.at(a) - id).cwiseAbs().maxCoeff());
    r.identity_dev = (u.at(g.identity) - id).cwiseAbs().maxCoeff();
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b) {
            CMat lhs = u.at(g.mult(a, b));
            CMat rhs = u.multiplier(a, b) * (u.at(a) * u.at(b));
            r.max_multiplier =
                std::max(r.max_multiplier, (lhs - rhs).cwiseAbs().maxCoeff());
        }
    return r;
}

GFunction coefficient(const ProjRep& u, const CVec& psi, const CVec& phi) {
    if (psi.size() != u.dim || phi.size() != u.dim)
        throw InvalidArgument("invalid-argument: coefficient vector dimension");
    GFunction c = zero_gfunction(u.group);
    for (Index g = 0; g < u.group->order; ++g)
        c.values(g) = (u.at(g) * psi).dot(phi);  // <U(g)ψ, φ>, linear in φ
    return c;
}

DufloMoore duflo_moore_from_orthogonality(const ProjRep& u, Rng& rng, int probes,
                                          double spread_tol) {
    if ((u.group->modular.array() - 1.0).abs().maxCoeff() > 1e-14)
        throw Unsupported(
            "unsupported-here: orthogonality estimate needs a unimodular carrier");
    if (commutant_dimension(u) != 1)
        throw ReducibleRepresentation("reducible-representation");

    double lo = 0.0, hi = 0.0;
    for (int k = 0; k < probes; ++k) {
        const CVec psi = rng.unit_vector(u.dim);
        const CVec phi = rng.unit_vector(u.dim);
        GFunction c = coefficient(u, psi, phi);
        const double d2 = l2_inner(c, c).real() /
                          (phi.squaredNorm() * psi.squaredNorm());
        if (k == 0)
            lo = hi = d2;
        else {
            lo = std::min(lo, d2);
            hi = std::max(hi, d2);
        }
    }
    if ((hi - lo) / std::max(hi, 1e-300) > spread_tol)
        throw NotSquareIntegrable(
            "not-square-integrable-at-this-scale: probe spread " +
            std::to_string(hi - lo));
    return DufloMoore::scalar(std::sqrt(0.5 * (lo + hi)), u.dim);
}

CMat wavelet_matrix(const ProjRep& u, const DufloMoore& dm, const CVec& psi) {
    if (psi.norm() == 0.0)
        throw InvalidArgument("invalid-argument: zero analyzing vector");
    const double scale = 1.0 / (dm.diag.cast<cplx>().asDiagonal() * psi).norm();
    CMat w(u.group->order, u.dim);
    for (Index g = 0; g < u.group->order; ++g)
        w.row(g) = scale * (u.at(g) * psi).adjoint();
    return w;
}

CMat left_regular_m(const FiniteGroup& g, const Multiplier& m, Index gi) {
    CMat r = CMat::Zero(g.order, g.order);
    const Index ginv = g.inv(gi);
    for (Index gp = 0; gp < g.order; ++gp)
        r(gp, g.mult(ginv, gp)) = std::conj(m(gi, ginv)) * m(ginv, gp);
    return r;
}

CMat two_sided_Tm(const FiniteGroup& g, const Multiplier& m, Index gi) {
    CMat t = CMat::Zero(g.order, g.order);
    const Index ginv = g.inv(gi);
    const double dsq = std::sqrt(g.modular(gi));
    for (Index gp = 0; gp < g.order; ++gp) {
        const Index conj_arg = g.mult(g.mult(ginv, gp), gi);
        t(gp, conj_arg) =
            dsq * std::conj(m(gi, g.mult(ginv, gp))) * m(g.mult(ginv, gp), gi);
    }
    return t;
}

CMat uvee_apply(const ProjRep& u, Index g, const CMat& a) {
    return u.at(g) * a * u.at(g).adjoint();
}

CMat uvee_matrix(const ProjRep& u, Index g) {
    const Index d = u.dim;
    const CMat& m = u.at(g);
    CMat out(d * d, d * d);
    for (Index k = 0; k < d; ++k)
        for (Index l = 0; l < d; ++l)
            for (Index i = 0; i < d; ++i)
                for (Index j = 0; j < d; ++j)
                    out(k * d + l, i * d + j) = m(k, i) * std::conj(m(l, j));
    return out;
}

Index commutant_dimension(const ProjRep& u, double threshold) {
    const Index d = u.dim;
    const CMat id = CMat::Identity(d, d);
    CMat stacked(u.group->order * d * d, d * d);
    for (Index g = 0; g < u.group->order; ++g) {
        // vec(UX - XU) in row-major: (U ⊗ I - I ⊗ Uᵀ) vec(X)
        CMat block(d * d, d * d);
        const CMat& m = u.at(g);
        for (Index k = 0; k < d; ++k)
            for (Index l = 0; l < d; ++l)
                for (Index i = 0; i < d; ++i)
                    for (Index j = 0; j < d; ++j)
                        block(k * d + l, i * d + j) =
                            m(k, i) * id(l, j) - id(k, i) * m(j, l);
        stacked.middleRows(g * d * d, d * d) = block;
    }
    Eigen::JacobiSVD<CMat> svd(stacked);
    const auto& sv = svd.singularValues();
    const double gate = threshold * std::max(1.0, sv.size() ? sv(0) : 1.0);
    Index nullity = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) < gate) ++nullity;
    return nullity;
}

// --- file IO ----------------------------------------------------------------

ProjRep load_rep(const std::string& path, FiniteGroupPtr group) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("invalid-argument: cannot open " + path);
    ProjRep u;
    u.group = group;
    u.multiplier = Multiplier::trivial(group->order);
    std::string line;
    Index current = -1, row = 0;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        std::string kw;
        if (!(is >> kw)) continue;
        if (kw == "dim") {
            is >> u.dim;
            if (u.dim < 1)
                throw InvalidArgument("invalid-argument: bad dim in " + path);
            u.mats.assign(group->order, CMat::Zero(u.dim, u.dim));
        } else if (kw == "element") {
            is >> current;
            if (current < 0 || current >= group->order)
                throw InvalidArgument("invalid-argument: element index in " + path);
            row = 0;
        } else if (kw == "multiplier") {
            std::string ref;
            is >> ref;
            auto base = std::filesystem::path(path).parent_path();
            auto m = load_group_multiplier((base / ref).string());
            if (!m)
                throw InvalidArgument("invalid-argument: no multiplier block in " +
                                      ref);
            u.multiplier = *m;
        } else {
            if (current < 0 || u.dim == 0 || row >= u.dim)
                throw InvalidArgument("invalid-argument: stray row in " + path);
            std::istringstream nums(line);
            for (Index j = 0; j < u.dim; ++j) {
                double re, im;
                if (!(nums >> re >> im))
                    throw InvalidArgument("invalid-argument: short matrix row in " +
                                          path);
                u.mats[current](row, j) = cplx(re, im);
            }
            ++row;
        }
    }
    if (u.dim == 0)
        throw InvalidArgument("invalid-argument: missing dim in " + path);
    return u;
}

void save_rep(std::ostream& os, const ProjRep& u) {
    os.precision(17);
    os << "dim " << u.dim << "\n";
    for (Index g = 0; g < u.group->order; ++g) {
        os << "element " << g << "\n";
        for (Index i = 0; i < u.dim; ++i) {
            for (Index j = 0; j < u.dim; ++j)
                os << u.mats[g](i, j).real() << " " << u.mats[g](i, j).imag()
                   << (j + 1 < u.dim ? "  " : "");
            os << "\n";
        }
    }
}

}  // namespace starprod
