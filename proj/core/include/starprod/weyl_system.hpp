#pragma once

#include "starprod/star.hpp"

namespace starprod {

/*
 * Finite Weyl system on Z_N×Z_N acting on C^N.
 *
 * With X the cyclic shift (X e_j = e_{j+1}), Z = diag(ω^j), ω = exp(2πi/N):
 *   symmetric ordering (odd N):  U(q,p) = ω^{2̄qp} X^q Z^p,  2̄ = (N+1)/2,
 *     multiplier m((q,p),(q',p')) = ω^{2̄ (qp' − pq')}
 *     — the discrete form of exp(i(qp'−pq')/2);
 *   standard ordering (any N):   U(q,p) = X^q Z^p,
 *     multiplier m((q,p),(q',p')) = ω^{−q'p}.
 * The group carries weight 1/N per element, which makes d_U = 1.
 */

enum class WeylOrdering { symmetric, standard };

struct DiscreteWeylSystem {
    Index n = 0;
    WeylOrdering ordering = WeylOrdering::symmetric;
    ProjRep rep;    // over build_cyclic_product_group(N), index (q,p) = q*N+p
    CMat clock;     // Z
    CMat shift;     // X

    Index point(Index q, Index p) const { return q * n + p; }
};

DiscreteWeylSystem build_weyl_system(Index n,
                                     WeylOrdering ordering = WeylOrdering::symmetric);

/*
 * Symplectic discrete Fourier transform on L²(Z_N×Z_N):
 *   (Ff)(q,p) = (1/N) Σ f(q',p') ω^{qp'−pq'},
 * unitary and self-adjoint w.r.t. the weighted inner product, F² = I.
 */
struct SymplecticDFT {
    Index n = 0;
    CMat matrix;  // N²×N², includes the 1/N Haar weight

    GFunction apply(const GFunction& f) const;
};

SymplecticDFT build_symplectic_dft(Index n);

GFunction symplectic_dft(const DiscreteWeylSystem& s, const GFunction& f);

struct MoyalResult {
    GFunction value;        // conjugation route F((Ff1) ⋆ (Ff2))
    double kernel_dev = 0;  // max |conjugation route − θ-kernel route|
};

/*
 * Twisted (Moyal-type) product, computed two ways and compared:
 * the conjugation route through the star product, and the direct double sum
 *   (f1 ⊛ f2)(Q,P) = Σ_{h,h'} w(h) w(h') θ(g;h;h') f1(h) f2(h'),
 *   θ = ω^{2(Qb − Pa + ad − bc + cP − dQ)},  h=(a,b), h'=(c,d),
 * the discrete transcription of the Grönewold–Moyal kernel (prefactor 1 for
 * the 1/N-per-point normalization; derived by equating both routes).
 * Symmetric ordering only, hence odd N.
 */
MoyalResult moyal_twisted_product(const DiscreteWeylSystem& s, const WignerMap& w,
                                  const GFunction& f1, const GFunction& f2);

// T = F∘S: the route whose image transforms by plain phase-space translations.
GFunction standard_wigner_route(const DiscreteWeylSystem& s, const WignerMap& w,
                                const CMat& a);

// Translation operator V(q,p): f(q',p') ↦ f(q'−q, p'−p).
CMat translation_matrix(const DiscreteWeylSystem& s, Index q, Index p);

}  // namespace starprod
