#include "starprod/group.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace starprod {

bool same_carrier(const Carrier& a, const Carrier& b) {
    if (&a == &b) return true;
    if (a.size() != b.size()) return false;
    return (a.weight - b.weight).cwiseAbs().maxCoeff() == 0.0;
}

double MultiplierReport::max_violation() const {
    return std::max(std::max(max_modulus_dev, max_normalization),
                    std::max(max_cocycle, max_inverse_symmetry));
}

QuadratureGroup::Composition QuadratureGroup::compose(Index a, Index b) const {
    Composition out;
    if (!compose_params || !locate) return out;
    const auto p = compose_params(points.at(a), points.at(b));
    out.index = locate(p);
    if (!out.index && allow_snapping) {
        // nearest grid point within snap_tol in max-norm of parameters
        double best = snap_tol;
        for (Index i = 0; i < size(); ++i) {
            double d = 0.0;
            for (std::size_t k = 0; k < p.size(); ++k)
                d = std::max(d, std::abs(points[i][k] - p[k]));
            if (d < best) {
                best = d;
                out.index = i;
                out.snapped = true;
            }
        }
    }
    return out;
}

namespace {

std::optional<Index> find_identity(const Eigen::MatrixXi& t) {
    const Index n = t.rows();
    for (Index e = 0; e < n; ++e) {
        bool ok = true;
        for (Index g = 0; g < n && ok; ++g)
            ok = (t(e, g) == g) && (t(g, e) == g);
        if (ok) return e;
    }
    return std::nullopt;
}

void fill_inverses(FiniteGroup& g) {
    g.inv.resize(g.order);
    g.inv.setConstant(-1);
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            if (g.mult(a, b) == g.identity && g.mult(b, a) == g.identity)
                g.inv(a) = b;
    for (Index a = 0; a < g.order; ++a)
        if (g.inv(a) < 0) throw InvalidGroup("invalid-group: element without inverse");
}

void check_table(const Eigen::MatrixXi& t) {
    const Index n = t.rows();
    if (t.cols() != n) throw InvalidArgument("invalid-argument: non-square table");
    if (n == 0) throw InvalidArgument("invalid-argument: empty table");
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j)
            if (t(i, j) < 0 || t(i, j) >= n)
                throw InvalidGroup("invalid-group: table entry out of range");
    for (Index a = 0; a < n; ++a)
        for (Index b = 0; b < n; ++b)
            for (Index c = 0; c < n; ++c)
                if (t(t(a, b), c) != t(a, t(b, c)))
                    throw InvalidGroup("invalid-group: non-associative table");
}

}  // namespace

FiniteGroupPtr build_cyclic_product_group(Index n, double total_mass) {
    if (n < 1) throw InvalidArgument("invalid-argument: N must be >= 1");
    if (total_mass <= 0.0) total_mass = static_cast<double>(n);
    auto g = std::make_shared<FiniteGroup>();
    g->order = n * n;
    g->mult.resize(g->order, g->order);
    for (Index q = 0; q < n; ++q)
        for (Index p = 0; p < n; ++p)
            for (Index q2 = 0; q2 < n; ++q2)
                for (Index p2 = 0; p2 < n; ++p2)
                    g->mult(q * n + p, q2 * n + p2) =
                        ((q + q2) % n) * n + ((p + p2) % n);
    g->identity = 0;
    fill_inverses(*g);
    g->weight = RVec::Constant(g->order, total_mass / static_cast<double>(g->order));
    g->modular = RVec::Ones(g->order);
    return g;
}

FiniteGroupPtr build_finite_group(const Eigen::MatrixXi& table) {
    check_table(table);
    auto g = std::make_shared<FiniteGroup>();
    g->order = table.rows();
    g->mult = table;
    auto e = find_identity(table);
    if (!e) throw InvalidGroup("invalid-group: no identity element");
    g->identity = *e;
    fill_inverses(*g);
    g->weight = RVec::Constant(g->order, 1.0 / static_cast<double>(g->order));
    g->modular = RVec::Ones(g->order);
    return g;
}

GroupReport validate_group(const FiniteGroup& g) {
    GroupReport r;
    r.max_associativity = 0.0;
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            for (Index c = 0; c < g.order; ++c)
                if (g.mult(g.mult(a, b), c) != g.mult(a, g.mult(b, c)))
                    r.max_associativity = 1.0;
    r.has_identity = true;
    for (Index a = 0; a < g.order; ++a)
        if (g.mult(g.identity, a) != a || g.mult(a, g.identity) != a)
            r.has_identity = false;
    r.has_inverses = true;
    for (Index a = 0; a < g.order; ++a)
        if (g.mult(a, g.inv(a)) != g.identity || g.inv(g.inv(a)) != a)
            r.has_inverses = false;
    // Left invariance: weight(g·h) = weight(h) for all g,h.
    r.weights_left_invariant = true;
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            if (std::abs(g.weight(g.mult(a, b)) - g.weight(b)) > 1e-15)
                r.weights_left_invariant = false;
    r.modular_homomorphism = std::abs(g.modular(g.identity) - 1.0) <= 1e-15;
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            if (std::abs(g.modular(g.mult(a, b)) - g.modular(a) * g.modular(b)) >
                1e-12)
                r.modular_homomorphism = false;
    return r;
}

MultiplierReport validate_multiplier(const FiniteGroup& g, const Multiplier& m) {
    if (m.values.rows() != g.order || m.values.cols() != g.order)
        throw InvalidArgument("invalid-argument: multiplier shape mismatch");
    MultiplierReport r;
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            r.max_modulus_dev =
                std::max(r.max_modulus_dev, std::abs(std::abs(m(a, b)) - 1.0));
    for (Index a = 0; a < g.order; ++a) {
        r.max_normalization =
            std::max(r.max_normalization, std::abs(m(a, g.identity) - 1.0));
        r.max_normalization =
            std::max(r.max_normalization, std::abs(m(g.identity, a) - 1.0));
        r.max_inverse_symmetry = std::max(
            r.max_inverse_symmetry, std::abs(m(a, g.inv(a)) - m(g.inv(a), a)));
    }
    // m(g1,g2·g3) m(g2,g3) = m(g1·g2,g3) m(g1,g2)
    for (Index a = 0; a < g.order; ++a)
        for (Index b = 0; b < g.order; ++b)
            for (Index c = 0; c < g.order; ++c)
                r.max_cocycle = std::max(
                    r.max_cocycle,
                    std::abs(m(a, g.mult(b, c)) * m(b, c) -
                             m(g.mult(a, b), c) * m(a, b)));
    return r;
}

// --- file IO ----------------------------------------------------------------

namespace {

std::vector<std::string> read_content_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("invalid-argument: cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream probe(line);
        std::string tok;
        if (probe >> tok) lines.push_back(line);
    }
    return lines;
}

}  // namespace

FiniteGroupPtr load_group(const std::string& path) {
    auto lines = read_content_lines(path);
    std::size_t at = 0;
    auto next = [&]() -> std::istringstream {
        if (at >= lines.size())
            throw InvalidArgument("invalid-argument: truncated group file " + path);
        return std::istringstream(lines[at++]);
    };

    Index order = 0;
    {
        auto is = next();
        std::string kw;
        is >> kw >> order;
        if (kw != "order" || order < 1)
            throw InvalidArgument("invalid-argument: expected `order N` in " + path);
    }
    Eigen::MatrixXi table(order, order);
    RVec weights, modular;
    bool have_table = false;
    while (at < lines.size()) {
        auto is = next();
        std::string kw;
        is >> kw;
        if (kw == "mult") {
            for (Index i = 0; i < order; ++i) {
                auto row = next();
                for (Index j = 0; j < order; ++j)
                    if (!(row >> table(i, j)))
                        throw InvalidArgument("invalid-argument: short mult row in " +
                                              path);
            }
            have_table = true;
        } else if (kw == "weights") {
            weights.resize(order);
            for (Index i = 0; i < order; ++i) {
                auto row = next();
                if (!(row >> weights(i)))
                    throw InvalidArgument("invalid-argument: bad weights in " + path);
            }
        } else if (kw == "modular") {
            modular.resize(order);
            for (Index i = 0; i < order; ++i) {
                auto row = next();
                if (!(row >> modular(i)))
                    throw InvalidArgument("invalid-argument: bad modular in " + path);
            }
        } else if (kw == "multiplier") {
            at += order;  // parsed separately by load_group_multiplier
        } else {
            throw InvalidArgument("invalid-argument: unknown block `" + kw +
                                  "` in " + path);
        }
    }
    if (!have_table)
        throw InvalidArgument("invalid-argument: missing mult block in " + path);
    auto base = build_finite_group(table);
    if (weights.size() == 0 && modular.size() == 0) return base;
    auto g = std::make_shared<FiniteGroup>(*base);
    if (weights.size() > 0) {
        if (weights.minCoeff() <= 0.0)
            throw InvalidGroup("invalid-group: nonpositive weight");
        g->weight = weights;
    }
    if (modular.size() > 0) g->modular = modular;
    return g;
}

std::optional<Multiplier> load_group_multiplier(const std::string& path) {
    auto lines = read_content_lines(path);
    Index order = 0;
    {
        std::istringstream is(lines.at(0));
        std::string kw;
        is >> kw >> order;
    }
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream is(lines[i]);
        std::string kw;
        is >> kw;
        if (kw != "multiplier") continue;
        Multiplier m{CMat(order, order)};
        for (Index r = 0; r < order; ++r) {
            if (i + 1 + r >= lines.size())
                throw InvalidArgument("invalid-argument: truncated multiplier block");
            std::istringstream row(lines[i + 1 + r]);
            for (Index c = 0; c < order; ++c) {
                double re, im;
                if (!(row >> re >> im))
                    throw InvalidArgument("invalid-argument: bad multiplier row");
                m.values(r, c) = cplx(re, im);
            }
        }
        return m;
    }
    return std::nullopt;
}

void save_group(std::ostream& os, const FiniteGroup& g, const Multiplier* m) {
    os.precision(17);
    os << "order " << g.order << "\n";
    os << "mult\n";
    for (Index i = 0; i < g.order; ++i) {
        for (Index j = 0; j < g.order; ++j)
            os << g.mult(i, j) << (j + 1 < g.order ? " " : "");
        os << "\n";
    }
    os << "weights\n";
    for (Index i = 0; i < g.order; ++i) os << g.weight(i) << "\n";
    os << "modular\n";
    for (Index i = 0; i < g.order; ++i) os << g.modular(i) << "\n";
    if (m) {
        os << "multiplier\n";
        for (Index i = 0; i < g.order; ++i) {
            for (Index j = 0; j < g.order; ++j)
                os << m->values(i, j).real() << " " << m->values(i, j).imag()
                   << (j + 1 < g.order ? "  " : "");
            os << "\n";
        }
    }
}

}  // namespace starprod
