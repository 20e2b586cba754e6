#include "starprod/weyl_system.hpp"

#include <cmath>

namespace starprod {

namespace {

cplx omega_pow(Index n, long long e) {
    const double ang = 2.0 * M_PI * static_cast<double>(((e % n) + n) % n) /
                       static_cast<double>(n);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

DiscreteWeylSystem build_weyl_system(Index n, WeylOrdering ordering) {
    if (n < 1) throw InvalidArgument("invalid-argument: N must be >= 1");
    if (ordering == WeylOrdering::symmetric && n % 2 == 0 && n > 1)
        throw UnsupportedOrdering(
            "unsupported-ordering: symmetric ordering needs odd N");

    DiscreteWeylSystem s;
    s.n = n;
    s.ordering = ordering;
    auto group = build_cyclic_product_group(n);  // weight 1/N per element

    s.shift = CMat::Zero(n, n);
    for (Index j = 0; j < n; ++j) s.shift((j + 1) % n, j) = 1.0;
    s.clock = CMat::Zero(n, n);
    for (Index j = 0; j < n; ++j) s.clock(j, j) = omega_pow(n, j);

    const Index inv2 = (n + 1) / 2;  // 2⁻¹ mod N for odd N; unused otherwise

    ProjRep rep;
    rep.group = group;
    rep.dim = n;
    rep.mats.resize(group->order);
    rep.multiplier = Multiplier{CMat(group->order, group->order)};

    std::vector<CMat> xpow(n), zpow(n);
    xpow[0] = CMat::Identity(n, n);
    zpow[0] = CMat::Identity(n, n);
    for (Index k = 1; k < n; ++k) {
        xpow[k] = s.shift * xpow[k - 1];
        zpow[k] = s.clock * zpow[k - 1];
    }
    for (Index q = 0; q < n; ++q)
        for (Index p = 0; p < n; ++p) {
            cplx phase = (ordering == WeylOrdering::symmetric)
                             ? omega_pow(n, static_cast<long long>(inv2) * q * p)
                             : cplx(1, 0);
            rep.mats[s.point(q, p)] = phase * (xpow[q] * zpow[p]);
        }
    for (Index q = 0; q < n; ++q)
        for (Index p = 0; p < n; ++p)
            for (Index q2 = 0; q2 < n; ++q2)
                for (Index p2 = 0; p2 < n; ++p2) {
                    const long long e =
                        (ordering == WeylOrdering::symmetric)
                            ? static_cast<long long>(inv2) * (q * p2 - p * q2)
                            : -static_cast<long long>(q2) * p;
                    rep.multiplier.values(s.point(q, p), s.point(q2, p2)) =
                        omega_pow(n, e);
                }
    s.rep = std::move(rep);
    return s;
}

SymplecticDFT build_symplectic_dft(Index n) {
    SymplecticDFT f;
    f.n = n;
    const Index sz = n * n;
    f.matrix.resize(sz, sz);
    const double scale = 1.0 / static_cast<double>(n);
    for (Index q = 0; q < n; ++q)
        for (Index p = 0; p < n; ++p)
            for (Index q2 = 0; q2 < n; ++q2)
                for (Index p2 = 0; p2 < n; ++p2)
                    f.matrix(q * n + p, q2 * n + p2) =
                        scale * omega_pow(n, static_cast<long long>(q) * p2 -
                                                 static_cast<long long>(p) * q2);
    return f;
}

GFunction SymplecticDFT::apply(const GFunction& f) const {
    GFunction out;
    out.carrier = f.carrier;
    out.values = matrix * f.values;
    return out;
}

GFunction symplectic_dft(const DiscreteWeylSystem& s, const GFunction& f) {
    return build_symplectic_dft(s.n).apply(f);
}

MoyalResult moyal_twisted_product(const DiscreteWeylSystem& s, const WignerMap& w,
                                  const GFunction& f1, const GFunction& f2) {
    if (s.ordering != WeylOrdering::symmetric)
        throw Unsupported("unsupported-here: the θ kernel needs symmetric ordering");
    const Index n = s.n;
    const auto dft = build_symplectic_dft(n);

    MoyalResult res;
    res.value = dft.apply(star_implicit(w, dft.apply(f1), dft.apply(f2)));

    const auto& g = *s.rep.group;
    GFunction direct = zero_gfunction(f1.carrier);
    for (Index Q = 0; Q < n; ++Q)
        for (Index P = 0; P < n; ++P) {
            CompensatedSum acc;
            for (Index a = 0; a < n; ++a)
                for (Index b = 0; b < n; ++b) {
                    const cplx t1 = f1.values(s.point(a, b)) *
                                    g.weight(s.point(a, b));
                    for (Index c = 0; c < n; ++c)
                        for (Index d = 0; d < n; ++d) {
                            const long long e =
                                2ll * (static_cast<long long>(Q) * b -
                                       static_cast<long long>(P) * a +
                                       static_cast<long long>(a) * d -
                                       static_cast<long long>(b) * c +
                                       static_cast<long long>(c) * P -
                                       static_cast<long long>(d) * Q);
                            acc.add(t1 * g.weight(s.point(c, d)) *
                                    omega_pow(n, e) * f2.values(s.point(c, d)));
                        }
                }
            direct.values(s.point(Q, P)) = acc.value();
        }
    res.kernel_dev = (res.value.values - direct.values).cwiseAbs().maxCoeff();
    return res;
}

GFunction standard_wigner_route(const DiscreteWeylSystem& s, const WignerMap& w,
                                const CMat& a) {
    return symplectic_dft(s, w.wigner(a));
}

CMat translation_matrix(const DiscreteWeylSystem& s, Index q, Index p) {
    const Index n = s.n;
    CMat v = CMat::Zero(n * n, n * n);
    for (Index q2 = 0; q2 < n; ++q2)
        for (Index p2 = 0; p2 < n; ++p2)
            v(q2 * n + p2, ((q2 - q + n) % n) * n + ((p2 - p + n) % n)) = 1.0;
    return v;
}

}  // namespace starprod
