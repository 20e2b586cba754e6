#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "starprod/types.hpp"

namespace starprod {

/*
 * Measured carriers.
 *
 * Everything downstream (L²(G) inner products, Wigner maps, star products)
 * only needs a finite point set with positive measure weights and the values
 * of the modular function Δ at each point. Finite groups add an exact
 * composition law; quadrature grids add parameter tuples and a partial,
 * possibly off-grid composition.
 */
struct Carrier {
    RVec weight;   // μ(point) > 0
    RVec modular;  // Δ(point) > 0

    Index size() const { return weight.size(); }
    double total_mass() const { return weight.sum(); }
    virtual ~Carrier() = default;
};

using CarrierPtr = std::shared_ptr<const Carrier>;

// Two GFunctions may interoperate iff their carriers agree (same object, or
// equal weights — e.g. the same group file loaded twice).
bool same_carrier(const Carrier& a, const Carrier& b);

/*
 * FiniteGroup: dense multiplication table over element indices 0..order-1,
 * inverses, identity, left Haar weights and modular values. Weight
 * normalization is carried by the object: compact normalization μ(G)=1 or the
 * Weyl-system normalization (total mass N on Z_N×Z_N), fixed by the builder.
 */
struct FiniteGroup final : Carrier {
    Index order = 0;
    Eigen::MatrixXi mult;  // mult(i,j) = index of g_i · g_j
    Eigen::VectorXi inv;
    Index identity = 0;

    Index compose(Index a, Index b) const { return mult(a, b); }
    Index inverse(Index a) const { return inv(a); }
};

using FiniteGroupPtr = std::shared_ptr<const FiniteGroup>;

struct Multiplier {
    CMat values;  // m(g,h), unit modulus

    cplx operator()(Index g, Index h) const { return values(g, h); }
    static Multiplier trivial(Index order) {
        return Multiplier{CMat::Ones(order, order)};
    }
};

struct MultiplierReport {
    double max_modulus_dev = 0.0;    // | |m| - 1 |
    double max_normalization = 0.0;  // |m(g,e)-1|, |m(e,g)-1|
    double max_cocycle = 0.0;        // cocycle identity over all triples
    double max_inverse_symmetry = 0.0;  // |m(g,g⁻¹) - m(g⁻¹,g)|
    bool pass(double tol = 1e-12) const {
        return max_modulus_dev <= tol && max_normalization <= tol &&
               max_cocycle <= tol && max_inverse_symmetry <= tol;
    }
    double max_violation() const;
};

/*
 * QuadratureGroup: discretized group carrier. Points are parameter tuples;
 * composition is partial — it returns the nearest grid index only when the
 * exact composite lies on the grid (within snap_tol), and reports off-grid
 * otherwise. Nothing downstream composes through the table unless it opted in.
 */
struct QuadratureGroup final : Carrier {
    std::vector<std::vector<double>> points;
    bool allow_snapping = false;
    double snap_tol = 1e-9;

    // Set by the builder; composes two parameter tuples exactly.
    std::function<std::vector<double>(const std::vector<double>&,
                                      const std::vector<double>&)>
        compose_params;
    // Maps a parameter tuple back to a grid index, if on-grid.
    std::function<std::optional<Index>(const std::vector<double>&)> locate;

    struct Composition {
        std::optional<Index> index;  // empty ⇔ off-grid and snapping disabled
        bool snapped = false;
    };
    Composition compose(Index a, Index b) const;
};

// --- builders -------------------------------------------------------------

// Z_N × Z_N under addition, element index q*N+p. Weight per element is
// total_mass / N²; the default total mass N makes the Duflo–Moore operator of
// the Weyl system come out as the identity.
FiniteGroupPtr build_cyclic_product_group(Index n, double total_mass = -1.0);

// Validates an arbitrary multiplication table and normalizes μ(G)=1.
FiniteGroupPtr build_finite_group(const Eigen::MatrixXi& table);

MultiplierReport validate_multiplier(const FiniteGroup& g, const Multiplier& m);

struct GroupReport {
    double max_associativity = 0.0;  // fraction is 0/1: table entries are exact
    bool has_identity = false;
    bool has_inverses = false;
    bool weights_left_invariant = false;
    bool modular_homomorphism = false;
    bool pass() const {
        return max_associativity == 0.0 && has_identity && has_inverses &&
               weights_left_invariant && modular_homomorphism;
    }
};

GroupReport validate_group(const FiniteGroup& g);

// --- file format ------------------------------------------------------------
//
// Line-oriented text: `order N`, a `mult` block of N rows of N indices, then
// optional `weights` (N reals), `modular` (N reals) and `multiplier`
// (N rows of N `re im` pairs) blocks. '#' starts a comment.
FiniteGroupPtr load_group(const std::string& path);
std::optional<Multiplier> load_group_multiplier(const std::string& path);
void save_group(std::ostream& os, const FiniteGroup& g,
                const Multiplier* m = nullptr);

}  // namespace starprod
