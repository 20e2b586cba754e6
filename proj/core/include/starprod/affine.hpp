#pragma once

#include <string>
#include <vector>

#include "starprod/wigner.hpp"

namespace starprod {

/*
 * The affine group ℝ⋊ℝ₊* by quadrature.
 *
 * Group grid: a uniform in [−a_max, a_max), r geometric with the SAME ratio ρ
 * as the frequency grid, so every dilation x ↦ r·x is an index shift with
 * explicit zero padding at the boundaries. Left-Haar cell weights
 * w(a,r) = da·dr_cell(r)/r², dr_cell(r) = r(√ρ − 1/√ρ); Δ(a,r) = 1/r.
 *
 * Carrier Hilbert space: L²(ℝ±, dx) on a geometric |x| grid, stored in
 * quadrature-normalized coordinates (components scaled by √xw). In these
 * coordinates H is plain C^K and
 *     (U(a,r) φ)_i = e^{i a x_i} φ_{i+s},   r = ρ^s,
 * exactly a phase diagonal times an index shift. The Duflo–Moore operator is
 * the diagonal (2π/|x_i|)^{1/2}.
 *
 * τ_grid is measured, not assumed: the maximum unitarity defect
 * ‖U(g)*U(g)χ − χ‖ over all grid points, taken on the re-orthonormalized
 * Laguerre fiducial family (boundary truncation is the only defect source, so
 * this is the defect scale every downstream quadrature object sees).
 */

struct AffineGridSpec {
    int sign = +1;  // carrier over ℝ₊* (+1) or ℝ₋* (−1)
    Index L = 64;   // a-nodes
    Index M = 32;   // r-nodes
    Index K = 64;   // x-nodes
    double a_max = 32.0;
    double x_min = 1.0 / 16.0;
    double rho = 1.0905077326652576592;  // 2^{1/8}
    double r_min = 0.25;
    Index fiducial_count = 8;  // Laguerre vectors used to measure τ_grid
};

struct AffineGrid {
    AffineGridSpec spec;
    double da = 0.0;
    RVec a_nodes;    // L
    RVec r_nodes;    // M, r_j = r_min ρ^j
    RVec x_nodes;    // K, signed, |x| increasing
    RVec x_weight;   // cell weights for ∫ dx
    Index shift0 = 0;  // r_min = ρ^{shift0}
    std::shared_ptr<const QuadratureGroup> group;  // L·M points, index jr*L + ia

    Index point(Index ia, Index jr) const { return jr * spec.L + ia; }
    Index a_index(Index pt) const { return pt % spec.L; }
    Index r_index(Index pt) const { return pt / spec.L; }
};

class AffineRep {
public:
    const AffineGrid& grid() const { return grid_; }
    const DufloMoore& duflo_moore() const { return dm_; }
    double tau_grid() const { return tau_grid_; }
    const std::vector<CVec>& fiducials() const { return fiducials_; }
    Index dim() const { return grid_.spec.K; }

    // Dense K×K matrix of U at a grid point (phase diagonal × index shift).
    CMat matrix(Index pt) const;
    // O(K) application of U(pt) and its adjoint.
    CVec apply(Index pt, const CVec& v) const;
    CVec apply_adjoint(Index pt, const CVec& v) const;
    // U at an arbitrary off-grid parameter (α, ρ^s): only ρ-power dilations
    // stay interpolation-free, which is all the kernel formulas need.
    CVec apply_offgrid(double alpha, Index s, const CVec& v) const;

    OperatorFamily family() const;

    friend AffineRep build_affine(const AffineGridSpec& spec);

private:
    AffineGrid grid_;
    DufloMoore dm_;
    double tau_grid_ = 0.0;
    std::vector<CVec> fiducials_;
};

AffineRep build_affine(const AffineGridSpec& spec);
// Long-form builder; throws GridMismatch when x/r grids cannot share a ratio
// (r_min off the ρ ladder, or r_max/x_max inconsistent with M/K).
AffineRep build_affine(int sign, Index L, Index M, Index K, double r_min,
                       double r_max, double a_max, double x_min, double x_max);

// Laguerre functions L_{n-1}(|x|) e^{−|x|/2} sampled on the grid, weighted
// into quadrature coordinates and re-orthonormalized (modified Gram–Schmidt).
std::vector<CVec> laguerre_basis(const AffineGrid& grid, Index n_max);
double laguerre_polynomial(Index k, double x);

// c_{ψ,φ}(a,r) = <U(a,r)ψ, φ> over the group grid.
GFunction affine_coefficient(const AffineRep& rep, const CVec& psi,
                             const CVec& phi);

// S*f computed directly as (Σ_g w(g) f(g) U(g)) D⁻¹, without materializing S.
CMat affine_weyl_direct(const AffineRep& rep, const GFunction& f);

struct AffineProbe {
    std::string name;
    CVec psi, phi;
};

// Localized probes whose D-mass sits inside the dilation window; the family
// the default orthogonality gate is asserted on.
std::vector<AffineProbe> affine_bump_probes(const AffineGrid& grid);
std::vector<AffineProbe> affine_laguerre_probes(const AffineGrid& grid,
                                                Index count);

struct OrthogonalityEntry {
    std::string name;
    cplx lhs, rhs;
    double rel_dev = 0.0;
};

struct OrthogonalityReport {
    std::vector<OrthogonalityEntry> entries;
    double max_rel_dev = 0.0;
};

// <c_{ψ1,φ1}, c_{ψ2,φ2}>_{L²(μ_L)} vs <φ1,φ2>·<Dψ2,Dψ1> over probe pairs.
OrthogonalityReport affine_orthogonality_check(
    const AffineRep& rep, const std::vector<AffineProbe>& probes);

// max over grid points of ‖U(g)D − Δ(g)^{1/2} D U(g)‖∞ / ‖D‖∞.
double affine_semi_invariance_defect(const AffineRep& rep);

// Kernel of the Hilbert–Schmidt operator S*f via the Fourier transform in the
// translation variable, returned in quadrature coordinates (directly
// comparable with affine_weyl_direct / WignerMap::weyl).
CMat weyl_kernel_sigma(const AffineRep& rep, const GFunction& f);

/*
 * Explicit (factored-kernel) star product over a truncated fiducial basis.
 * Evaluates   Σ_n Σ_h w(h) f1(h) Δ(h⁻¹g)^{1/2} ⟨U(h⁻¹g) D⁻²χ_n, B_n⟩,
 * B_n = (S*f2) χ_n, with h⁻¹g = ((a_g−a_h)/r_h, r_g/r_h) evaluated exactly
 * (ρ-power dilation, arbitrary real translation — no interpolation).
 * include_modular=false drops the Δ^{1/2} factor (ablation hook).
 */
GFunction affine_star(const AffineRep& rep, const GFunction& f1,
                      const GFunction& f2, const std::vector<CVec>& basis,
                      Index n_max, bool include_modular = true);

struct AdmissibilityReport {
    double integral_minus = 0.0, integral_plus = 0.0;  // 2π∫|x|⁻¹|ψ̂|²dx
    // fraction contributed by the two smallest-|x| nodes; a large edge share
    // means refinement toward 0 blows the integral up (non-admissibility proxy)
    double edge_fraction_minus = 0.0, edge_fraction_plus = 0.0;
    bool flagged_minus = false, flagged_plus = false;
    bool normalized = false;  // both integrals within tol of 1
};

// ψ̂ given in the frequency domain on the two-sided grid: the first K entries
// live on the minus grid, the next K on the plus grid (|x| increasing).
AdmissibilityReport admissibility_check(const AffineGrid& plus_grid,
                                        const CVec& psi_hat,
                                        double norm_tol = 1e-6,
                                        double edge_threshold = 0.1);

}  // namespace starprod
