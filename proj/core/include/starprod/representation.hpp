#pragma once

#include <functional>
#include <string>
#include <vector>

#include "starprod/group.hpp"
#include "starprod/hilbert.hpp"
#include "starprod/rng.hpp"
#include "starprod/types.hpp"

namespace starprod {

/*
 * Projective unitary representations on finite-dimensional H, their
 * Duflo–Moore operators, coefficient functions, the wavelet transform and the
 * three auxiliary actions R_m, T_m and U∨U.
 *
 * U(gh) = m(g,h) U(g) U(h), each U(g) unitary, U(e) = I.
 */
struct ProjRep {
    FiniteGroupPtr group;
    Index dim = 0;
    std::vector<CMat> mats;  // one unitary per group element
    Multiplier multiplier;

    const CMat& at(Index g) const { return mats.at(static_cast<std::size_t>(g)); }
};

struct RepReport {
    double max_unitarity = 0.0;   // ‖U(g)*U(g) - I‖∞
    double identity_dev = 0.0;    // ‖U(e) - I‖∞
    double max_multiplier = 0.0;  // ‖U(gh) - m(g,h)U(g)U(h)‖∞ over all pairs
    bool pass(double tol = kTolExact) const {
        return max_unitarity <= tol && identity_dev <= tol && max_multiplier <= tol;
    }
    double max_violation() const {
        return std::max(max_unitarity, std::max(identity_dev, max_multiplier));
    }
};

RepReport validate_projrep(const ProjRep& u);

/*
 * Duflo–Moore operator in a declared basis. For all carriers in this artifact
 * the operator is diagonal in the computational basis, so `basis` stays the
 * identity; the field is kept because the file format declares it.
 */
struct DufloMoore {
    RVec diag;
    CMat basis;

    static DufloMoore scalar(double d, Index dim) {
        return DufloMoore{RVec::Constant(dim, d), CMat::Identity(dim, dim)};
    }
    CMat matrix() const { return diag.cast<cplx>().asDiagonal(); }
    CMat inverse_matrix() const {
        return diag.cwiseInverse().cast<cplx>().asDiagonal();
    }
    CVec apply_inv(const CVec& v, int power = 1) const {
        CVec out = v;
        for (int k = 0; k < power; ++k)
            out = out.cwiseQuotient(diag.cast<cplx>());
        return out;
    }
};

// c_{ψ,φ}(g) = <U(g)ψ, φ>
GFunction coefficient(const ProjRep& u, const CVec& psi, const CVec& phi);

/*
 * d_U from the orthogonality relations: on a unimodular carrier D_U = d_U·I
 * with d_U² = <c_{ψ,φ}, c_{ψ,φ}> / (‖φ‖²‖ψ‖²). Estimated over `probes` random
 * pairs and required to agree to `spread_tol` relative; disagreement means the
 * representation is not square integrable at this scale, a nontrivial
 * commutant means it is reducible.
 */
DufloMoore duflo_moore_from_orthogonality(const ProjRep& u, Rng& rng,
                                          int probes = 3,
                                          double spread_tol = 1e-10);

// W_U^ψ: H → L²(G), φ ↦ ‖Dψ‖⁻¹ c_{ψ,φ}. Returned as its |G|×dim matrix
// (an isometry w.r.t. the weighted L² inner product).
CMat wavelet_matrix(const ProjRep& u, const DufloMoore& dm, const CVec& psi);

// (R_m(g) f)(g') = m(g,g⁻¹)* m(g⁻¹,g') f(g⁻¹g')
CMat left_regular_m(const FiniteGroup& g, const Multiplier& m, Index gi);

// (T_m(g) f)(g') = Δ(g)^{1/2} m(g,g⁻¹g')* m(g⁻¹g',g) f(g⁻¹g'g)
CMat two_sided_Tm(const FiniteGroup& g, const Multiplier& m, Index gi);

// U∨U(g): A ↦ U(g) A U(g)*, and its dim²×dim² matrix in the row-major
// vectorization (a plain unitary representation even for projective U).
CMat uvee_apply(const ProjRep& u, Index g, const CMat& a);
CMat uvee_matrix(const ProjRep& u, Index g);

// Dimension of {X : U(g)X = XU(g) ∀g} via an SVD nullspace; 1 ⇔ irreducible.
Index commutant_dimension(const ProjRep& u, double threshold = kSvdNullThreshold);

// --- file format ------------------------------------------------------------
// `dim d`, then per-element blocks `element k` followed by d rows of d
// `re im` pairs, in group-element order. An optional `multiplier <path>` line
// points at a group file whose multiplier block applies.
ProjRep load_rep(const std::string& path, FiniteGroupPtr group);
void save_rep(std::ostream& os, const ProjRep& u);

}  // namespace starprod
