#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "starprod/representation.hpp"

namespace starprod {

/*
 * Dequantization (Wigner) isometry S: B2(H) → L²(G) and its adjoint, the
 * quantization (Weyl) partial isometry.
 *
 * The map is materialized as a dense |G| × dim² matrix in the row-major
 * |e_i><e_j| vectorization: row g equals conj(vec(U(g) D⁻¹)), so that
 *   S(|φ><ψ|)(g) = <U(g) D⁻¹ ψ, φ>.
 * The adjoint against the weighted L² inner product is S* f = unvec(S† W f),
 * which coincides entrywise with the operator sum (Σ_g w(g) f(g) U(g)) D⁻¹.
 */

// Pointwise-defined family of unitaries over a measured carrier. Finite-group
// representations wrap their stored matrices; quadrature carriers build each
// matrix on demand.
struct OperatorFamily {
    CarrierPtr carrier;
    Index dim = 0;
    std::function<CMat(Index)> at;
};

OperatorFamily family_of(const ProjRep& u);

class WignerMap {
public:
    WignerMap(OperatorFamily fam, DufloMoore dm);

    const CarrierPtr& carrier() const { return fam_.carrier; }
    Index dim() const { return fam_.dim; }
    Index points() const { return fam_.carrier->size(); }
    const DufloMoore& duflo_moore() const { return dm_; }
    const OperatorFamily& family() const { return fam_; }
    const CMat& matrix() const { return s_; }

    GFunction wigner(const CMat& a) const;        // S A
    CMat weyl(const GFunction& f) const;          // S* f
    GFunction project(const GFunction& f) const;  // P f = S S* f
    CMat projector_matrix() const;                // P as |G|×|G| matrix

    // ‖S†WS − I‖∞ and the projection laws; the gauges every suite asserts.
    double isometry_defect() const;
    struct ProjectorReport {
        double idempotent = 0.0;    // ‖P² − P‖∞
        double self_adjoint = 0.0;  // ‖P†W − WP‖∞  (weighted self-adjointness)
        double trace_dev = 0.0;     // |tr_w(P) − dim²|
        Index rank = 0;
    };
    ProjectorReport projector_report() const;

private:
    OperatorFamily fam_;
    DufloMoore dm_;
    CMat s_;  // |G| × dim²
};

// Requires an irreducible validated representation; the unchecked overload is
// what the quadrature carriers use.
WignerMap build_wigner(const ProjRep& u, const DufloMoore& dm);
WignerMap build_wigner_unchecked(OperatorFamily fam, DufloMoore dm);

struct IntertwiningReport {
    double uvee_vs_Tm = 0.0;     // S·U∨U(g) = T_m(g)·S
    double conj_vs_Jm = 0.0;     // S∘J = J_m∘S on a random batch
    double left_vs_Rm = 0.0;     // S(U(g)A) = R_m(g) S(A) on a random batch
    double max_violation() const {
        return std::max(uvee_vs_Tm, std::max(conj_vs_Jm, left_vs_Rm));
    }
};

IntertwiningReport check_intertwinings(const WignerMap& w, const ProjRep& u,
                                       Rng& rng, int batch = 5);

// Header `rows |G| cols dim^2`, one matrix row per line as `re im` pairs.
void dump_wigner(std::ostream& os, const WignerMap& w);

}  // namespace starprod
