#pragma once

#include <iosfwd>
#include <string>

#include "starprod/group.hpp"
#include "starprod/types.hpp"

namespace starprod {

/*
 * The two Hilbert spaces at desk scale.
 *
 * B2(H): complex dim×dim matrices with <A,B> = tr(A*B). Represented directly
 * as CMat; inner products follow the convention "linear in the second
 * argument" throughout.
 *
 * L²(G,μ): complex vectors indexed by carrier points with the measure-weighted
 * inner product <f,h> = Σ_g w(g) conj(f(g)) h(g).
 */

struct GFunction {
    CarrierPtr carrier;
    CVec values;

    Index size() const { return values.size(); }
};

GFunction zero_gfunction(CarrierPtr carrier);

cplx l2_inner(const GFunction& a, const GFunction& b);
double l2_norm(const GFunction& a);
// ‖a-b‖ / max(‖b‖, floor): the deviation gauge used by every check suite.
double l2_rel_dev(const GFunction& a, const GFunction& b);

cplx hs_inner(const CMat& a, const CMat& b);
double hs_norm(const CMat& a);

// |φ><ψ| : χ ↦ <ψ,χ> φ. Entries φ_i conj(ψ_j).
CMat rank_one(const CVec& phi, const CVec& psi);

// Standard conjugation on B2(H): A ↦ A*.
inline CMat op_conj_J(const CMat& a) { return a.adjoint(); }

// (J_m f)(g) = Δ(g)^{-1/2} m(g,g⁻¹) conj(f(g⁻¹)) — the complex conjugation on
// L²(G) compatible with the star-product involution. Finite carriers only.
GFunction conj_Jm(const GFunction& f, const FiniteGroup& g, const Multiplier& m);

// --- serialization ----------------------------------------------------------
// GFunction: lines `g_index re im`. HSOperator: `dim d` header, then row-major
// `re im` pairs, one matrix row per line.
GFunction load_gfunction(const std::string& path, CarrierPtr carrier);
void save_gfunction(std::ostream& os, const GFunction& f);
CMat load_hsoperator(const std::string& path);
void save_hsoperator(std::ostream& os, const CMat& a);

}  // namespace starprod
