#include "starprod/star.hpp"

#include <cmath>

#include <Eigen/SVD>

namespace starprod {

GFunction star_implicit(const WignerMap& w, const GFunction& f1,
                        const GFunction& f2) {
    return w.wigner(w.weyl(f1) * w.weyl(f2));
}

// --- explicit kernel ----------------------------------------------------------

namespace {

void check_orthonormal(const std::vector<CVec>& basis, Index dim) {
    if (basis.empty()) throw InvalidArgument("invalid-argument: empty basis");
    for (const auto& v : basis)
        if (v.size() != dim)
            throw InvalidArgument("invalid-argument: basis vector dimension");
    for (std::size_t i = 0; i < basis.size(); ++i)
        for (std::size_t j = 0; j < basis.size(); ++j) {
            const cplx g = basis[i].dot(basis[j]);
            const cplx want = (i == j) ? cplx(1, 0) : cplx(0, 0);
            if (std::abs(g - want) > 1e-12)
                throw InvalidArgument("invalid-argument: basis not orthonormal");
        }
}

}  // namespace

StarKernel build_star_kernel(const WignerMap& w, const ProjRep& u,
                             const std::vector<CVec>& basis,
                             Index materialize_threshold) {
    if (!same_carrier(*w.carrier(), *u.group))
        throw GroupMismatch("group-mismatch: kernel carrier");
    check_orthonormal(basis, w.dim());

    StarKernel k;
    k.group_ = u.group;
    k.mult_ = u.multiplier;
    k.dm_ = w.duflo_moore();
    k.fam_ = w.family();
    k.dim_ = w.dim();
    k.basis_ = basis;

    const Index n = u.group->order;
    const std::size_t nb = basis.size();
    k.a_.resize(nb);
    k.c_.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        const CVec d1 = k.dm_.apply_inv(basis[b], 1);
        const CVec d2 = k.dm_.apply_inv(basis[b], 2);
        k.a_[b].resize(n);
        k.c_[b].resize(n);
        for (Index g = 0; g < n; ++g) {
            k.a_[b][g] = u.at(g) * d1;
            k.c_[b][g] = u.at(g) * d2;
        }
    }

    k.materialized_ = n <= materialize_threshold;
    if (k.materialized_) {
        k.table_.resize(nb);
        for (std::size_t b = 0; b < nb; ++b) {
            k.table_[b].assign(n, CMat(n, n));
            const CMat dinv = k.dm_.inverse_matrix();
            for (Index h = 0; h < n; ++h) {
                for (Index hp = 0; hp < n; ++hp) {
                    const CVec v = u.at(h) * k.dm_.apply_inv(k.a_[b][hp], 1);
                    for (Index g = 0; g < n; ++g)
                        k.table_[b][g](h, hp) = k.a_[b][g].dot(v);
                }
            }
        }
    }
    // ϰ tables drive the factored evaluation and Eq.-level invariants.
    k.vk_.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        k.vk_[b].resize(n, n);
        for (Index uu = 0; uu < n; ++uu)
            for (Index hp = 0; hp < n; ++hp)
                k.vk_[b](uu, hp) = k.c_[b][uu].dot(k.a_[b][hp]);
    }
    return k;
}

cplx StarKernel::kappa_direct(Index n, Index g, Index h, Index hp) const {
    const CVec lhs = fam_.at(g) * dm_.apply_inv(basis_[n], 1);
    const CVec rhs = fam_.at(h) * dm_.apply_inv(fam_.at(hp) *
                                                dm_.apply_inv(basis_[n], 1), 1);
    return lhs.dot(rhs);
}

cplx StarKernel::kappa_stored(Index n, Index g, Index h, Index hp) const {
    if (materialized_) return table_[n][g](h, hp);
    const Index u = group_->mult(group_->inv(h), g);
    return std::conj(mult_(h, u)) * std::sqrt(group_->modular(u)) * vk_[n](u, hp);
}

cplx StarKernel::varkappa(Index n, Index u, Index hp) const {
    return vk_[n](u, hp);
}

ExplicitStar StarKernel::star(const GFunction& f1, const GFunction& f2) const {
    if (!f1.carrier || !same_carrier(*f1.carrier, *group_) ||
        !same_carrier(*f2.carrier, *group_))
        throw GroupMismatch("group-mismatch: star_explicit arguments");
    const Index n = group_->order;
    const RVec& w = group_->weight;
    ExplicitStar out;
    out.value = zero_gfunction(f1.carrier);
    out.certified = complete();

    if (materialized_) {
        for (Index g = 0; g < n; ++g) {
            CompensatedSum acc;
            for (std::size_t b = 0; b < basis_.size(); ++b)
                for (Index h = 0; h < n; ++h)
                    for (Index hp = 0; hp < n; ++hp)
                        acc.add(w(h) * w(hp) * table_[b][g](h, hp) *
                                f1.values(h) * f2.values(hp));
            out.value.values(g) = acc.value();
        }
        return out;
    }

    // Factored path: A(u) = Σ_n Σ_h' w(h') ϰ_n(u,h') f2(h'), then one h-sum.
    CVec a = CVec::Zero(n);
    const CVec wf2 = w.cast<cplx>().asDiagonal() * f2.values;
    for (const auto& vk : vk_) a += vk * wf2;
    for (Index g = 0; g < n; ++g) {
        CompensatedSum acc;
        for (Index h = 0; h < n; ++h) {
            const Index u = group_->mult(group_->inv(h), g);
            acc.add(w(h) * f1.values(h) * std::conj(mult_(h, u)) *
                    std::sqrt(group_->modular(u)) * a(u));
        }
        out.value.values(g) = acc.value();
    }
    return out;
}

// --- unimodular twisted convolution -------------------------------------------

GFunction twisted_convolution(const WignerMap& w, const ProjRep& u,
                              const GFunction& f1, const GFunction& f2,
                              bool assume_in_range) {
    const auto& g = *u.group;
    if ((g.modular.array() - 1.0).abs().maxCoeff() > 1e-14)
        throw Unsupported(
            "unsupported-here: twisted convolution needs a unimodular carrier");
    const double du = w.duflo_moore().diag(0);
    const GFunction p1 = assume_in_range ? f1 : w.project(f1);
    const GFunction p2 = assume_in_range ? f2 : w.project(f2);
    GFunction out = zero_gfunction(p1.carrier);
    for (Index gi = 0; gi < g.order; ++gi) {
        CompensatedSum acc;
        for (Index h = 0; h < g.order; ++h) {
            const Index hg = g.mult(g.inv(h), gi);
            acc.add(g.weight(h) * p1.values(h) * std::conj(u.multiplier(h, hg)) *
                    p2.values(hg));
        }
        out.values(gi) = acc.value() / du;
    }
    return out;
}

// --- K-deformed products --------------------------------------------------------

DeformationOperator DeformationOperator::make(CMat k) {
    DeformationOperator d;
    Eigen::JacobiSVD<CMat> svd(k);
    d.op_norm = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    d.contraction = d.op_norm <= 1.0 + 1e-12;
    d.self_adjoint = (k - k.adjoint()).cwiseAbs().maxCoeff() <= 1e-12;
    d.mat = std::move(k);
    return d;
}

KStarResult kdeformed_star(const WignerMap& w, const ProjRep& u,
                           const GFunction& f1, const GFunction& f2,
                           const DeformationOperator& k,
                           const std::vector<CVec>& basis) {
    if (k.mat.rows() != w.dim() || k.mat.cols() != w.dim())
        throw InvalidArgument("invalid-argument: deformation operator dimension");
    check_orthonormal(basis, w.dim());
    KStarResult res;
    res.value = w.wigner(w.weyl(f1) * k.mat * w.weyl(f2));

    // Explicit route through ϰ(K,χ_n; u, h').
    const auto& g = *u.group;
    const Index n = g.order;
    const RVec& wt = g.weight;
    const auto& dm = w.duflo_moore();
    CVec a = CVec::Zero(n);
    for (const auto& chi : basis) {
        const CVec d1 = dm.apply_inv(chi, 1);
        const CVec d2 = dm.apply_inv(chi, 2);
        std::vector<CVec> lhs(n), rhs(n);
        for (Index i = 0; i < n; ++i) {
            lhs[i] = u.at(i) * d2;
            rhs[i] = k.mat * (u.at(i) * d1);
        }
        CMat vk(n, n);
        for (Index uu = 0; uu < n; ++uu)
            for (Index hp = 0; hp < n; ++hp) vk(uu, hp) = lhs[uu].dot(rhs[hp]);
        a += vk * (wt.cast<cplx>().asDiagonal() * f2.values);
    }
    GFunction expl = zero_gfunction(f1.carrier);
    for (Index gi = 0; gi < n; ++gi) {
        CompensatedSum acc;
        for (Index h = 0; h < n; ++h) {
            const Index uu = g.mult(g.inv(h), gi);
            acc.add(wt(h) * f1.values(h) * std::conj(u.multiplier(h, uu)) *
                    std::sqrt(g.modular(uu)) * a(uu));
        }
        expl.values(gi) = acc.value();
    }
    res.implicit_explicit_dev =
        (res.value.values - expl.values).cwiseAbs().maxCoeff();
    return res;
}

// --- compact-group character formula ---------------------------------------------

GFunction star_char_formula(const ProjRep& u, const GFunction& f1,
                            const GFunction& f2) {
    const auto& g = *u.group;
    if ((u.multiplier.values.array() - cplx(1, 0)).abs().maxCoeff() > 1e-14)
        throw Unsupported("unsupported-here: character formula needs m == 1");
    if (std::abs(g.total_mass() - 1.0) > 1e-12)
        throw InvalidArgument(
            "invalid-argument: character formula needs compact normalization");
    const double delta = static_cast<double>(u.dim);
    CVec chars(g.order);
    for (Index i = 0; i < g.order; ++i) chars(i) = u.at(i).trace();

    GFunction out = zero_gfunction(f1.carrier);
    const double scale = std::pow(delta, 1.5);
    for (Index gi = 0; gi < g.order; ++gi) {
        const Index gin = g.inv(gi);
        CompensatedSum acc;
        for (Index h = 0; h < g.order; ++h) {
            const Index gh = g.mult(gin, h);
            for (Index hp = 0; hp < g.order; ++hp)
                acc.add(g.weight(h) * g.weight(hp) * chars(g.mult(gh, hp)) *
                        f1.values(h) * f2.values(hp));
        }
        out.values(gi) = scale * acc.value();
    }
    return out;
}

// --- convolution decomposition over the dual -------------------------------------

ConvolutionDecomposition convolution_decomposition(
    const FiniteGroup& g, const std::vector<WignerMap>& duals,
    const GFunction& f1, const GFunction& f2) {
    Index dimsq = 0;
    for (const auto& w : duals) dimsq += w.dim() * w.dim();
    if (dimsq != g.order)
        throw InvalidArgument("invalid-argument: incomplete dual (Σδ² != |G|)");

    ConvolutionDecomposition out;
    out.convolution = zero_gfunction(f1.carrier);
    for (Index gi = 0; gi < g.order; ++gi) {
        CompensatedSum acc;
        for (Index h = 0; h < g.order; ++h)
            acc.add(g.weight(h) * f1.values(h) *
                    f2.values(g.mult(g.inv(h), gi)));
        out.convolution.values(gi) = acc.value();
    }
    out.star_sum = zero_gfunction(f1.carrier);
    for (const auto& w : duals) {
        const GFunction s = star_implicit(w, f1, f2);
        out.star_sum.values +=
            s.values / std::sqrt(static_cast<double>(w.dim()));
    }
    out.max_dev =
        (out.convolution.values - out.star_sum.values).cwiseAbs().maxCoeff();
    return out;
}

// --- approximate identities --------------------------------------------------------

cplx approx_identity_gamma(const WignerMap& w, const ProjRep& u, const CMat& k,
                           const CMat& t, Index uu, Index hp) {
    const auto& dm = w.duflo_moore();
    const CMat dinv = dm.inverse_matrix();
    return (t * dinv * dinv * u.at(uu).adjoint() * k * u.at(hp) * dinv).trace();
}

std::vector<GFunction> approx_identity_star(const WignerMap& w, const ProjRep& u,
                                            const GFunction& f1,
                                            const GFunction& f2, const CMat& k,
                                            const std::vector<CMat>& seq) {
    const auto& g = *u.group;
    const Index n = g.order;
    const auto& dm = w.duflo_moore();
    const CMat dinv = dm.inverse_matrix();
    const CMat c2 = w.weyl(f2);

    std::vector<GFunction> out;
    out.reserve(seq.size());
    for (const CMat& t : seq) {
        // A(u) = Σ_h' w(h') γ(K,T; u,h') f2(h') = tr(T D⁻² U(u)* K (S*f2))
        CVec a(n);
        const CMat fixed = k * c2;
        const CMat lead = t * dinv * dinv;
        for (Index uu = 0; uu < n; ++uu)
            a(uu) = (lead * u.at(uu).adjoint() * fixed).trace();
        GFunction r = zero_gfunction(f1.carrier);
        for (Index gi = 0; gi < n; ++gi) {
            CompensatedSum acc;
            for (Index h = 0; h < n; ++h) {
                const Index uu = g.mult(g.inv(h), gi);
                acc.add(g.weight(h) * f1.values(h) *
                        std::conj(u.multiplier(h, uu)) *
                        std::sqrt(g.modular(uu)) * a(uu));
            }
            r.values(gi) = acc.value();
        }
        out.push_back(std::move(r));
    }
    return out;
}

// --- H*-algebra axioms ----------------------------------------------------------------

double HStarReport::max_violation() const {
    double m = associativity;
    m = std::max(m, involution_antihom);
    m = std::max(m, submultiplicativity);
    m = std::max(m, trace_identity_left);
    m = std::max(m, trace_identity_right);
    m = std::max(m, range_containment);
    m = std::max(m, projection_law);
    m = std::max(m, equivariance);
    return m;
}

HStarReport check_hstar_axioms(const WignerMap& w, const ProjRep& u, Rng& rng,
                               int samples) {
    HStarReport rep;
    const auto& g = *u.group;
    auto random_f = [&]() {
        GFunction f;
        f.carrier = u.group;
        f.values = rng.vector(g.order);
        return f;
    };
    auto star = [&](const GFunction& a, const GFunction& b) {
        return star_implicit(w, a, b);
    };
    for (int s = 0; s < samples; ++s) {
        const GFunction f1 = random_f(), f2 = random_f(), f3 = random_f();
        const GFunction p12 = star(f1, f2);

        rep.associativity = std::max(
            rep.associativity,
            (star(p12, f3).values - star(f1, star(f2, f3)).values)
                .cwiseAbs()
                .maxCoeff());

        const GFunction j1 = conj_Jm(f1, g, u.multiplier);
        const GFunction j2 = conj_Jm(f2, g, u.multiplier);
        rep.involution_antihom = std::max(
            rep.involution_antihom,
            (conj_Jm(p12, g, u.multiplier).values - star(j2, j1).values)
                .cwiseAbs()
                .maxCoeff());

        rep.submultiplicativity =
            std::max(rep.submultiplicativity,
                     std::max(0.0, l2_norm(p12) - l2_norm(f1) * l2_norm(f2)));

        rep.trace_identity_left =
            std::max(rep.trace_identity_left,
                     std::abs(l2_inner(p12, f3) - l2_inner(f2, star(j1, f3))));
        rep.trace_identity_right =
            std::max(rep.trace_identity_right,
                     std::abs(l2_inner(p12, f3) - l2_inner(f1, star(f3, j2))));

        GFunction residual = p12;
        residual.values -= w.project(p12).values;
        rep.range_containment = std::max(rep.range_containment, l2_norm(residual));

        rep.projection_law = std::max(
            rep.projection_law,
            (p12.values - star(w.project(f1), w.project(f2)).values)
                .cwiseAbs()
                .maxCoeff());

        for (Index gi = 0; gi < g.order; ++gi) {
            const CMat tm = two_sided_Tm(g, u.multiplier, gi);
            GFunction t1{f1.carrier, tm * f1.values};
            GFunction t2{f2.carrier, tm * f2.values};
            rep.equivariance = std::max(
                rep.equivariance,
                ((tm * p12.values) - star(t1, t2).values).cwiseAbs().maxCoeff());
        }
    }
    return rep;
}

}  // namespace starprod
