#include "starprod/wigner.hpp"

#include <cmath>
#include <ostream>

#include <Eigen/QR>

namespace starprod {

OperatorFamily family_of(const ProjRep& u) {
    OperatorFamily f;
    f.carrier = u.group;
    f.dim = u.dim;
    f.at = [rep = u](Index g) { return rep.at(g); };
    return f;
}

WignerMap::WignerMap(OperatorFamily fam, DufloMoore dm)
    : fam_(std::move(fam)), dm_(std::move(dm)) {
    const Index n = fam_.carrier->size();
    const Index d = fam_.dim;
    const CMat dinv = dm_.inverse_matrix();
    s_.resize(n, d * d);
    for (Index g = 0; g < n; ++g) {
        const CMat m = fam_.at(g) * dinv;
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < d; ++j) s_(g, i * d + j) = std::conj(m(i, j));
    }
}

GFunction WignerMap::wigner(const CMat& a) const {
    if (a.rows() != dim() || a.cols() != dim())
        throw InvalidArgument("invalid-argument: operator dimension mismatch");
    GFunction f;
    f.carrier = fam_.carrier;
    f.values = s_ * vec_rm(a);
    return f;
}

CMat WignerMap::weyl(const GFunction& f) const {
    if (!f.carrier || !same_carrier(*f.carrier, *fam_.carrier))
        throw GroupMismatch("group-mismatch: weyl map input carrier");
    const CVec wf = fam_.carrier->weight.cast<cplx>().asDiagonal() * f.values;
    return unvec_rm(s_.adjoint() * wf, dim());
}

GFunction WignerMap::project(const GFunction& f) const { return wigner(weyl(f)); }

CMat WignerMap::projector_matrix() const {
    const auto& w = fam_.carrier->weight;
    return s_ * (s_.adjoint() * w.cast<cplx>().asDiagonal());
}

double WignerMap::isometry_defect() const {
    const auto& w = fam_.carrier->weight;
    CMat gram = s_.adjoint() * (w.cast<cplx>().asDiagonal() * s_);
    gram -= CMat::Identity(dim() * dim(), dim() * dim());
    return gram.cwiseAbs().maxCoeff();
}

WignerMap::ProjectorReport WignerMap::projector_report() const {
    ProjectorReport r;
    const CMat p = projector_matrix();
    r.idempotent = (p * p - p).cwiseAbs().maxCoeff();
    const auto wd = fam_.carrier->weight.cast<cplx>().asDiagonal();
    r.self_adjoint = (p.adjoint() * wd - wd * p).cwiseAbs().maxCoeff();
    // weighted trace of P equals tr(S†WS) = dim² when S is an isometry
    cplx tr = 0.0;
    for (Index g = 0; g < p.rows(); ++g) tr += p(g, g);
    r.trace_dev = std::abs(tr - cplx(static_cast<double>(dim() * dim()), 0.0));
    Eigen::ColPivHouseholderQR<CMat> qr(p);
    qr.setThreshold(1e-8);
    r.rank = qr.rank();
    return r;
}

WignerMap build_wigner(const ProjRep& u, const DufloMoore& dm) {
    if (commutant_dimension(u) != 1)
        throw ReducibleRepresentation("reducible-representation");
    return WignerMap(family_of(u), dm);
}

WignerMap build_wigner_unchecked(OperatorFamily fam, DufloMoore dm) {
    return WignerMap(std::move(fam), std::move(dm));
}

IntertwiningReport check_intertwinings(const WignerMap& w, const ProjRep& u,
                                       Rng& rng, int batch) {
    IntertwiningReport rep;
    const auto& g = *u.group;
    const CMat& s = w.matrix();
    for (Index gi = 0; gi < g.order; ++gi) {
        CMat lhs = s * uvee_matrix(u, gi);
        CMat rhs = two_sided_Tm(g, u.multiplier, gi) * s;
        rep.uvee_vs_Tm =
            std::max(rep.uvee_vs_Tm, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    for (int k = 0; k < batch; ++k) {
        const CMat a = rng.matrix(u.dim, u.dim);
        const GFunction sa = w.wigner(a);
        // S(A*) = J_m S(A)
        GFunction lhs = w.wigner(a.adjoint());
        GFunction rhs = conj_Jm(sa, g, u.multiplier);
        rep.conj_vs_Jm = std::max(
            rep.conj_vs_Jm, (lhs.values - rhs.values).cwiseAbs().maxCoeff());
        for (Index gi = 0; gi < g.order; ++gi) {
            GFunction l2 = w.wigner(u.at(gi) * a);
            CVec r2 = left_regular_m(g, u.multiplier, gi) * sa.values;
            rep.left_vs_Rm =
                std::max(rep.left_vs_Rm, (l2.values - r2).cwiseAbs().maxCoeff());
        }
    }
    return rep;
}

void dump_wigner(std::ostream& os, const WignerMap& w) {
    os.precision(17);
    os << "rows " << w.points() << " cols " << w.dim() * w.dim() << "\n";
    os << "# vectorization: row-major |e_i><e_j| (i outer, j inner)\n";
    const CMat& s = w.matrix();
    for (Index g = 0; g < s.rows(); ++g) {
        for (Index c = 0; c < s.cols(); ++c)
            os << s(g, c).real() << " " << s(g, c).imag()
               << (c + 1 < s.cols() ? "  " : "");
        os << "\n";
    }
}

}  // namespace starprod
