#pragma once

#include <vector>

#include "starprod/wigner.hpp"

namespace starprod {

/*
 * Star products on L²(G).
 *
 * The implicit form quantizes both arguments, composes in B2(H) and
 * dequantizes:  f1 ⋆ f2 = S((S*f1)(S*f2)).  It is the oracle every explicit
 * formula in this module is tested against.
 *
 * The explicit form evaluates, for an orthonormal basis {χ_n} of H,
 *   (f1 ⋆ f2)(g) = Σ_n ∬ κ(χ_n; g,h,h') f1(h) f2(h') dμ(h) dμ(h')
 * with κ(χ; g,h,h') = <U(g)D⁻¹χ, U(h)D⁻¹U(h')D⁻¹χ>, which factors as
 *   κ(χ; g,h,h') = m(h,h⁻¹g)* Δ(h⁻¹g)^{1/2} ϰ(χ; h⁻¹g, h'),
 *   ϰ(K,χ; u,h')  = <U(u)D⁻²χ, K U(h')D⁻¹χ>.
 * Double sums run h outer, h' inner with compensated accumulation.
 */

GFunction star_implicit(const WignerMap& w, const GFunction& f1,
                        const GFunction& f2);

struct ExplicitStar {
    GFunction value;
    bool certified = false;  // false when the basis was incomplete
};

class StarKernel {
public:
    Index basis_size() const { return static_cast<Index>(basis_.size()); }
    bool complete() const { return basis_size() == dim_; }
    bool materialized() const { return materialized_; }
    const FiniteGroupPtr& group() const { return group_; }

    // Direct kernel evaluation, independent of the stored tables.
    cplx kappa_direct(Index n, Index g, Index h, Index hp) const;
    cplx kappa_stored(Index n, Index g, Index h, Index hp) const;
    cplx varkappa(Index n, Index u, Index hp) const;

    ExplicitStar star(const GFunction& f1, const GFunction& f2) const;

private:
    friend StarKernel build_star_kernel(const WignerMap&, const ProjRep&,
                                        const std::vector<CVec>&, Index);
    StarKernel() = default;

    FiniteGroupPtr group_;
    Multiplier mult_;
    DufloMoore dm_;
    OperatorFamily fam_;
    Index dim_ = 0;
    std::vector<CVec> basis_;
    std::vector<std::vector<CVec>> a_;  // a_[n][g] = U(g)D⁻¹χ_n
    std::vector<std::vector<CVec>> c_;  // c_[n][u] = U(u)D⁻²χ_n
    bool materialized_ = false;
    std::vector<std::vector<CMat>> table_;  // per n, per g: (h,h') table
    std::vector<CMat> vk_;                  // per n: ϰ(u,h') table
};

// Basis must be orthonormal to 1e-12. Tables are materialized for
// |G| <= materialize_threshold; above that the factored ϰ form is used.
StarKernel build_star_kernel(const WignerMap& w, const ProjRep& u,
                             const std::vector<CVec>& basis,
                             Index materialize_threshold = 64);

inline ExplicitStar star_explicit(const StarKernel& k, const GFunction& f1,
                                  const GFunction& f2) {
    return k.star(f1, f2);
}

/*
 * Unimodular one-sum form:
 *   (f1 ⋆ f2)(g) = d_U⁻¹ ∫ f1(h) m(h,h⁻¹g)* f2(h⁻¹g) dμ(h),
 * valid when at least one argument lies in Ran(S). By default both arguments
 * are projected (all three placements of P agree); assume_in_range skips the
 * projection for callers who assert membership.
 */
GFunction twisted_convolution(const WignerMap& w, const ProjRep& u,
                              const GFunction& f1, const GFunction& f2,
                              bool assume_in_range = false);

struct DeformationOperator {
    CMat mat;
    double op_norm = 0.0;
    bool contraction = false;
    bool self_adjoint = false;

    static DeformationOperator make(CMat k);
};

struct KStarResult {
    GFunction value;                     // implicit route, the certified result
    double implicit_explicit_dev = 0.0;  // max |implicit − explicit route|
};

// f1 ⋆_K f2 = S((S*f1) K (S*f2)), evaluated both implicitly and through the
// ϰ(K,χ_n) kernel route over `basis`.
KStarResult kdeformed_star(const WignerMap& w, const ProjRep& u,
                           const GFunction& f1, const GFunction& f2,
                           const DeformationOperator& k,
                           const std::vector<CVec>& basis);

// Compact unitary case: (f1 ⋆ f2)(g) = δ^{3/2} ∬ C_U(g⁻¹hh') f1(h) f2(h'),
// C_U = tr∘U. Requires m ≡ 1 and μ(G) = 1.
GFunction star_char_formula(const ProjRep& u, const GFunction& f1,
                            const GFunction& f2);

struct ConvolutionDecomposition {
    GFunction convolution;  // ∫ f1(h) f2(h⁻¹·) dμ(h)
    GFunction star_sum;     // Σ_U δ(U)^{-1/2} f1 ⋆_U f2
    double max_dev = 0.0;
};

// `duals` must realize the full unitary dual: Σ δ(U)² = |G|.
ConvolutionDecomposition convolution_decomposition(
    const FiniteGroup& g, const std::vector<WignerMap>& duals,
    const GFunction& f1, const GFunction& f2);

// γ kernel of the approximate-identity realization:
//   γ(K,T; u,h') = tr(T D⁻² U(u)* K U(h') D⁻¹).
cplx approx_identity_gamma(const WignerMap& w, const ProjRep& u, const CMat& k,
                           const CMat& t, Index uu, Index hp);

// One partial star product per element of `seq` (a right approximate
// identity; once T_n reaches I the element equals the K-deformed product).
std::vector<GFunction> approx_identity_star(const WignerMap& w, const ProjRep& u,
                                            const GFunction& f1,
                                            const GFunction& f2, const CMat& k,
                                            const std::vector<CMat>& seq);

struct HStarReport {
    double associativity = 0.0;
    double involution_antihom = 0.0;    // J_m(f1⋆f2) = (J_m f2)⋆(J_m f1)
    double submultiplicativity = 0.0;   // max(0, ‖f1⋆f2‖ − ‖f1‖‖f2‖)
    double trace_identity_left = 0.0;   // <f1⋆f2,f3> = <f2,(J_m f1)⋆f3>
    double trace_identity_right = 0.0;  // <f1⋆f2,f3> = <f1,f3⋆(J_m f2)>
    double range_containment = 0.0;     // ‖(I−P)(f1⋆f2)‖
    double projection_law = 0.0;        // f1⋆f2 = (Pf1)⋆(Pf2)
    double equivariance = 0.0;          // T_m(g)(f1⋆f2) = (T_m f1)⋆(T_m f2) ∀g
    double max_violation() const;
};

HStarReport check_hstar_axioms(const WignerMap& w, const ProjRep& u, Rng& rng,
                               int samples = 5);

}  // namespace starprod
