#include "starprod/affine.hpp"

#include <cmath>

namespace starprod {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

Index ladder_index(double value, double rho, const char* what) {
    const double e = std::log(value) / std::log(rho);
    const double r = std::round(e);
    if (std::abs(e - r) > 1e-6)
        throw GridMismatch(std::string("grid-mismatch: ") + what +
                           " is not a power of the shared ratio");
    return static_cast<Index>(r);
}

}  // namespace

AffineRep build_affine(const AffineGridSpec& spec) {
    if (spec.sign != 1 && spec.sign != -1)
        throw InvalidArgument("invalid-argument: sign must be ±1");
    if (spec.L < 2 || spec.M < 2 || spec.K < 2)
        throw InvalidArgument("invalid-argument: grid too small");

    AffineRep rep;
    AffineGrid& g = rep.grid_;
    g.spec = spec;
    g.da = 2.0 * spec.a_max / static_cast<double>(spec.L);
    g.a_nodes.resize(spec.L);
    for (Index i = 0; i < spec.L; ++i)
        g.a_nodes(i) = -spec.a_max + g.da * static_cast<double>(i);

    g.shift0 = ladder_index(spec.r_min, spec.rho, "r_min");
    g.r_nodes.resize(spec.M);
    for (Index j = 0; j < spec.M; ++j)
        g.r_nodes(j) = std::pow(spec.rho, static_cast<double>(g.shift0 + j));

    g.x_nodes.resize(spec.K);
    g.x_weight.resize(spec.K);
    const double cell = std::sqrt(spec.rho) - 1.0 / std::sqrt(spec.rho);
    for (Index i = 0; i < spec.K; ++i) {
        const double ax = spec.x_min * std::pow(spec.rho, static_cast<double>(i));
        g.x_nodes(i) = spec.sign * ax;
        g.x_weight(i) = ax * cell;
    }

    auto qg = std::make_shared<QuadratureGroup>();
    const Index n = spec.L * spec.M;
    qg->weight.resize(n);
    qg->modular.resize(n);
    qg->points.resize(n);
    for (Index j = 0; j < spec.M; ++j)
        for (Index i = 0; i < spec.L; ++i) {
            const Index pt = j * spec.L + i;
            const double r = g.r_nodes(j);
            qg->weight(pt) = g.da * cell / r;  // da · r(√ρ−1/√ρ) / r²
            qg->modular(pt) = 1.0 / r;
            qg->points[pt] = {g.a_nodes(i), r};
        }
    qg->compose_params = [](const std::vector<double>& a,
                            const std::vector<double>& b) {
        return std::vector<double>{a[0] + a[1] * b[0], a[1] * b[1]};
    };
    qg->locate = [spec, da = g.da, shift0 = g.shift0,
                  a0 = g.a_nodes(0)](const std::vector<double>& p)
        -> std::optional<Index> {
        const double ia = (p[0] - a0) / da;
        const double jr = std::log(p[1]) / std::log(spec.rho) -
                          static_cast<double>(shift0);
        const double ri = std::round(ia), rj = std::round(jr);
        if (std::abs(ia - ri) > 1e-9 || std::abs(jr - rj) > 1e-9)
            return std::nullopt;
        if (ri < 0 || ri >= static_cast<double>(spec.L) || rj < 0 ||
            rj >= static_cast<double>(spec.M))
            return std::nullopt;
        return static_cast<Index>(rj) * spec.L + static_cast<Index>(ri);
    };
    g.group = qg;

    RVec dm(spec.K);
    for (Index i = 0; i < spec.K; ++i)
        dm(i) = std::sqrt(kTwoPi / std::abs(g.x_nodes(i)));
    rep.dm_ = DufloMoore{dm, CMat::Identity(spec.K, spec.K)};

    rep.fiducials_ = laguerre_basis(g, std::min(spec.fiducial_count, spec.K));

    double tau = 0.0;
    for (Index pt = 0; pt < n; ++pt)
        for (const auto& chi : rep.fiducials_) {
            const CVec v = rep.apply_adjoint(pt, rep.apply(pt, chi));
            tau = std::max(tau, (v - chi).norm());
        }
    rep.tau_grid_ = tau;
    return rep;
}

AffineRep build_affine(int sign, Index L, Index M, Index K, double r_min,
                       double r_max, double a_max, double x_min, double x_max) {
    AffineGridSpec s;
    s.sign = sign;
    s.L = L;
    s.M = M;
    s.K = K;
    s.a_max = a_max;
    s.x_min = x_min;
    if (K < 2) throw InvalidArgument("invalid-argument: K must be >= 2");
    s.rho = std::pow(x_max / x_min, 1.0 / static_cast<double>(K - 1));
    s.r_min = r_min;
    const double r_top = r_min * std::pow(s.rho, static_cast<double>(M - 1));
    if (std::abs(r_top - r_max) > 1e-6 * r_max)
        throw GridMismatch(
            "grid-mismatch: r range incompatible with the shared ratio");
    return build_affine(s);
}

CMat AffineRep::matrix(Index pt) const {
    const Index k = grid_.spec.K;
    const Index s = grid_.shift0 + grid_.r_index(pt);
    const double a = grid_.a_nodes(grid_.a_index(pt));
    CMat m = CMat::Zero(k, k);
    for (Index i = 0; i < k; ++i) {
        const Index src = i + s;
        if (src < 0 || src >= k) continue;
        m(i, src) = std::polar(1.0, a * grid_.x_nodes(i));
    }
    return m;
}

CVec AffineRep::apply(Index pt, const CVec& v) const {
    const Index s = grid_.shift0 + grid_.r_index(pt);
    const double a = grid_.a_nodes(grid_.a_index(pt));
    return apply_offgrid(a, s, v);
}

CVec AffineRep::apply_offgrid(double alpha, Index s, const CVec& v) const {
    const Index k = grid_.spec.K;
    CVec out = CVec::Zero(k);
    for (Index i = 0; i < k; ++i) {
        const Index src = i + s;
        if (src < 0 || src >= k) continue;
        out(i) = std::polar(1.0, alpha * grid_.x_nodes(i)) * v(src);
    }
    return out;
}

CVec AffineRep::apply_adjoint(Index pt, const CVec& v) const {
    const Index k = grid_.spec.K;
    const Index s = grid_.shift0 + grid_.r_index(pt);
    const double a = grid_.a_nodes(grid_.a_index(pt));
    CVec out = CVec::Zero(k);
    for (Index i = 0; i < k; ++i) {
        const Index dst = i + s;
        if (dst < 0 || dst >= k) continue;
        out(dst) = std::polar(1.0, -a * grid_.x_nodes(i)) * v(i);
    }
    return out;
}

OperatorFamily AffineRep::family() const {
    OperatorFamily f;
    f.carrier = grid_.group;
    f.dim = grid_.spec.K;
    f.at = [rep = *this](Index pt) { return rep.matrix(pt); };
    return f;
}

double laguerre_polynomial(Index k, double x) {
    if (k == 0) return 1.0;
    double lm = 1.0, l = 1.0 - x;
    for (Index i = 1; i < k; ++i) {
        const double next =
            ((2.0 * static_cast<double>(i) + 1.0 - x) * l -
             static_cast<double>(i) * lm) /
            (static_cast<double>(i) + 1.0);
        lm = l;
        l = next;
    }
    return l;
}

std::vector<CVec> laguerre_basis(const AffineGrid& grid, Index n_max) {
    if (n_max < 1) throw InvalidArgument("invalid-argument: n_max must be >= 1");
    const Index k = grid.spec.K;
    if (n_max > k)
        throw InvalidArgument("invalid-argument: n_max exceeds the grid dimension");
    std::vector<CVec> basis;
    basis.reserve(n_max);
    auto orthonormalize = [&](CVec v) -> std::optional<CVec> {
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& prev : basis) v -= prev.dot(v) * prev;
        const double nv = v.norm();
        if (nv < 1e-10) return std::nullopt;
        return CVec(v / nv);
    };
    for (Index n = 0; n < n_max && static_cast<Index>(basis.size()) < n_max; ++n) {
        CVec v(k);
        for (Index i = 0; i < k; ++i) {
            const double ax = std::abs(grid.x_nodes(i));
            v(i) = std::sqrt(grid.x_weight(i)) * laguerre_polynomial(n, ax) *
                   std::exp(-ax / 2.0);
        }
        if (auto q = orthonormalize(std::move(v))) basis.push_back(std::move(*q));
    }
    // Sampled Laguerre families go numerically degenerate well below the grid
    // dimension; complete with coordinate seeds so a full orthonormal basis is
    // always available (the kernel formula accepts any orthonormal basis).
    for (Index i = 0; i < k && static_cast<Index>(basis.size()) < n_max; ++i) {
        CVec e = CVec::Zero(k);
        e(i) = 1.0;
        if (auto q = orthonormalize(std::move(e))) basis.push_back(std::move(*q));
    }
    if (static_cast<Index>(basis.size()) != n_max)
        throw InvalidArgument("invalid-argument: could not complete the basis");
    return basis;
}

GFunction affine_coefficient(const AffineRep& rep, const CVec& psi,
                             const CVec& phi) {
    GFunction c = zero_gfunction(rep.grid().group);
    for (Index pt = 0; pt < c.size(); ++pt)
        c.values(pt) = rep.apply(pt, psi).dot(phi);
    return c;
}

CMat affine_weyl_direct(const AffineRep& rep, const GFunction& f) {
    const Index k = rep.dim();
    const auto& g = rep.grid();
    CMat acc = CMat::Zero(k, k);
    // U(a,r) is supported on the diagonal offset s: accumulate banded entries.
    for (Index pt = 0; pt < f.size(); ++pt) {
        const Index s = g.shift0 + g.r_index(pt);
        const double a = g.a_nodes(g.a_index(pt));
        const cplx wf = g.group->weight(pt) * f.values(pt);
        for (Index i = 0; i < k; ++i) {
            const Index src = i + s;
            if (src < 0 || src >= k) continue;
            acc(i, src) += wf * std::polar(1.0, a * g.x_nodes(i));
        }
    }
    return acc * rep.duflo_moore().inverse_matrix();
}

std::vector<AffineProbe> affine_bump_probes(const AffineGrid& grid) {
    // Log-Gaussian bumps. Two constraints pick the family: the D-mass window
    // e^{±3σ}·center must sit inside the dilation range, and the translation
    // grid must resolve the phases over the support (a_max·x·lnρ ≲ π), which
    // favors centers below 1 on the default grid.
    auto bump = [&](double center, double sigma) {
        const Index k = grid.spec.K;
        CVec v(k);
        for (Index i = 0; i < k; ++i) {
            const double t = std::log(std::abs(grid.x_nodes(i)) / center);
            v(i) = std::sqrt(grid.x_weight(i)) *
                   std::exp(-t * t / (2.0 * sigma * sigma));
        }
        return CVec(v / v.norm());
    };
    std::vector<AffineProbe> probes;
    const CVec b1 = bump(0.70, 0.25), b2 = bump(0.91, 0.25), b3 = bump(0.56, 0.25);
    probes.push_back({"bump(0.70)/bump(0.70)", b1, b1});
    probes.push_back({"bump(0.70)/bump(0.91)", b1, b2});
    probes.push_back({"bump(0.91)/bump(0.56)", b2, b3});
    return probes;
}

std::vector<AffineProbe> affine_laguerre_probes(const AffineGrid& grid,
                                                Index count) {
    auto basis = laguerre_basis(grid, count);
    std::vector<AffineProbe> probes;
    for (Index n = 0; n < count; ++n)
        probes.push_back({"laguerre" + std::to_string(n + 1), basis[n], basis[n]});
    return probes;
}

OrthogonalityReport affine_orthogonality_check(
    const AffineRep& rep, const std::vector<AffineProbe>& probes) {
    OrthogonalityReport report;
    const CMat d = rep.duflo_moore().matrix();
    for (std::size_t i = 0; i < probes.size(); ++i)
        for (std::size_t j = i; j < probes.size(); ++j) {
            const auto& p1 = probes[i];
            const auto& p2 = probes[j];
            OrthogonalityEntry e;
            e.name = p1.name + " vs " + p2.name;
            const GFunction c1 = affine_coefficient(rep, p1.psi, p1.phi);
            const GFunction c2 = affine_coefficient(rep, p2.psi, p2.phi);
            e.lhs = l2_inner(c1, c2);
            e.rhs = p1.phi.dot(p2.phi) * (d * p2.psi).dot(d * p1.psi);
            // Cauchy–Schwarz scale keeps cross pairs with rhs ≈ 0 meaningful.
            const double scale = p1.phi.norm() * p2.phi.norm() *
                                 (d * p1.psi).norm() * (d * p2.psi).norm();
            e.rel_dev = std::abs(e.lhs - e.rhs) / std::max(scale, 1e-300);
            report.entries.push_back(e);
            report.max_rel_dev = std::max(report.max_rel_dev, e.rel_dev);
        }
    return report;
}

double affine_semi_invariance_defect(const AffineRep& rep) {
    const auto& g = rep.grid();
    const RVec& d = rep.duflo_moore().diag;
    const double dmax = d.maxCoeff();
    double defect = 0.0;
    // (U D)(i,i+s) = e^{iax_i} d_{i+s}, (D U)(i,i+s) = d_i e^{iax_i};
    // compare with the Δ^{1/2} = r^{-1/2} weight
    for (Index pt = 0; pt < g.group->size(); ++pt) {
        const Index s = g.shift0 + g.r_index(pt);
        const double rinv_sqrt = std::sqrt(g.group->modular(pt));
        for (Index i = 0; i < g.spec.K; ++i) {
            const Index src = i + s;
            if (src < 0 || src >= g.spec.K) continue;
            defect = std::max(defect,
                              std::abs(d(src) - rinv_sqrt * d(i)) / dmax);
        }
    }
    return defect;
}

CMat weyl_kernel_sigma(const AffineRep& rep, const GFunction& f) {
    if (!f.carrier || !same_carrier(*f.carrier, *rep.grid().group))
        throw GroupMismatch("group-mismatch: sigma kernel input carrier");
    const auto& g = rep.grid();
    const Index k = g.spec.K;
    const double fscale = 1.0 / std::sqrt(kTwoPi);
    CMat out = CMat::Zero(k, k);
    for (Index i = 0; i < k; ++i)
        for (Index j = 0; j < k; ++j) {
            const Index jr = (j - i) - g.shift0;  // x_j/x_i = ρ^{j-i}
            if (jr < 0 || jr >= g.spec.M) continue;
            // (F₁f)(−x_i, ρ^{j−i}) by direct quadrature in a
            CompensatedSum acc;
            for (Index ia = 0; ia < g.spec.L; ++ia)
                acc.add(g.da *
                        std::polar(1.0, g.a_nodes(ia) * g.x_nodes(i)) *
                        f.values(g.point(ia, jr)));
            const double xa = std::abs(g.x_nodes(i));
            const double ya = std::abs(g.x_nodes(j));
            const cplx sigma =
                std::sqrt(xa) / ya * fscale * acc.value();
            out(i, j) = std::sqrt(g.x_weight(i) * g.x_weight(j)) * sigma;
        }
    return out;
}

GFunction affine_star(const AffineRep& rep, const GFunction& f1,
                      const GFunction& f2, const std::vector<CVec>& basis,
                      Index n_max, bool include_modular) {
    const auto& g = rep.grid();
    if (n_max < 1 || n_max > static_cast<Index>(basis.size()))
        throw InvalidArgument("invalid-argument: n_max out of range");
    const Index k = g.spec.K, L = g.spec.L, M = g.spec.M;
    const auto& dm = rep.duflo_moore();

    // B_n = (S*f2) χ_n = Σ_h' w(h') f2(h') U(h') D⁻¹χ_n
    // ψ_n = D⁻²χ_n; c_s[i] = Σ_n conj(ψ_n[i+s]) B_n[i] collapses the basis sum.
    std::vector<CVec> bvec(n_max), psi(n_max);
    for (Index n = 0; n < n_max; ++n) {
        const CVec d1 = dm.apply_inv(basis[n], 1);
        CVec acc = CVec::Zero(k);
        for (Index pt = 0; pt < g.group->size(); ++pt)
            acc += (g.group->weight(pt) * f2.values(pt)) * rep.apply(pt, d1);
        bvec[n] = acc;
        psi[n] = dm.apply_inv(basis[n], 2);
    }
    // s = jg − jh ranges over (−M, M)
    CMat cs = CMat::Zero(2 * M - 1, k);
    for (Index s = -(M - 1); s <= M - 1; ++s)
        for (Index i = 0; i < k; ++i) {
            const Index src = i + s;
            if (src < 0 || src >= k) continue;
            cplx v = 0.0;
            for (Index n = 0; n < n_max; ++n)
                v += std::conj(psi[n](src)) * bvec[n](i);
            cs(s + M - 1, i) = v;
        }

    // G_s(α) = Σ_i e^{−iαx_i} c_s[i], tabulated on the difference grid
    // α = (a_g − a_h)/r_h for each (jh, s) pair.
    GFunction out = zero_gfunction(f1.carrier);
    CVec gtab(2 * L - 1);
    for (Index jg = 0; jg < M; ++jg)
        for (Index jh = 0; jh < M; ++jh) {
            const Index s = jg - jh;
            const double rh = g.r_nodes(jh);
            const double modfac =
                include_modular ? std::sqrt(rh / g.r_nodes(jg)) : 1.0;
            for (Index dd = -(L - 1); dd <= L - 1; ++dd) {
                const double alpha = static_cast<double>(dd) * g.da / rh;
                CompensatedSum acc;
                for (Index i = 0; i < k; ++i)
                    acc.add(std::polar(1.0, -alpha * g.x_nodes(i)) *
                            cs(s + M - 1, i));
                gtab(dd + L - 1) = acc.value();
            }
            for (Index ig = 0; ig < L; ++ig) {
                CompensatedSum acc;
                for (Index ih = 0; ih < L; ++ih) {
                    const Index pt = g.point(ih, jh);
                    acc.add(g.group->weight(pt) * f1.values(pt) *
                            gtab(ig - ih + L - 1));
                }
                out.values(g.point(ig, jg)) += modfac * acc.value();
            }
        }
    return out;
}

AdmissibilityReport admissibility_check(const AffineGrid& plus_grid,
                                        const CVec& psi_hat, double norm_tol,
                                        double edge_threshold) {
    const Index k = plus_grid.spec.K;
    if (psi_hat.size() != 2 * k)
        throw InvalidArgument(
            "invalid-argument: two-sided vector must have 2K entries");
    AdmissibilityReport rep;
    auto half = [&](Index offset, double& integral, double& edge) {
        CompensatedSum acc;
        double edge_sum = 0.0;
        for (Index i = 0; i < k; ++i) {
            const double ax = std::abs(plus_grid.x_nodes(i));
            const double term = kTwoPi * plus_grid.x_weight(i) *
                                std::norm(psi_hat(offset + i)) / ax;
            acc.add(term);
            if (i < 2) edge_sum += term;
        }
        integral = acc.value().real();
        edge = (integral > 0) ? edge_sum / integral : 0.0;
    };
    half(0, rep.integral_minus, rep.edge_fraction_minus);
    half(k, rep.integral_plus, rep.edge_fraction_plus);
    rep.flagged_minus = rep.edge_fraction_minus > edge_threshold;
    rep.flagged_plus = rep.edge_fraction_plus > edge_threshold;
    rep.normalized = std::abs(rep.integral_minus - 1.0) <= norm_tol &&
                     std::abs(rep.integral_plus - 1.0) <= norm_tol;
    return rep;
}

}  // namespace starprod
