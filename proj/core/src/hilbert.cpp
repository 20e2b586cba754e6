#include "starprod/hilbert.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace starprod {

GFunction zero_gfunction(CarrierPtr carrier) {
    GFunction f;
    f.values = CVec::Zero(carrier->size());
    f.carrier = std::move(carrier);
    return f;
}

namespace {
void require_same_carrier(const GFunction& a, const GFunction& b) {
    if (!a.carrier || !b.carrier || !same_carrier(*a.carrier, *b.carrier))
        throw GroupMismatch("group-mismatch: functions live on different carriers");
}
}  // namespace

cplx l2_inner(const GFunction& a, const GFunction& b) {
    require_same_carrier(a, b);
    const RVec& w = a.carrier->weight;
    cplx s = 0.0;
    for (Index i = 0; i < a.size(); ++i)
        s += w(i) * std::conj(a.values(i)) * b.values(i);
    return s;
}

double l2_norm(const GFunction& a) {
    return std::sqrt(std::abs(l2_inner(a, a).real()));
}

double l2_rel_dev(const GFunction& a, const GFunction& b) {
    require_same_carrier(a, b);
    GFunction d{a.carrier, a.values - b.values};
    return rel_dev(l2_norm(d), l2_norm(b));
}

cplx hs_inner(const CMat& a, const CMat& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw InvalidArgument("invalid-argument: dimension mismatch in hs_inner");
    return a.conjugate().cwiseProduct(b).sum();
}

double hs_norm(const CMat& a) { return a.norm(); }

CMat rank_one(const CVec& phi, const CVec& psi) {
    if (phi.size() != psi.size())
        throw InvalidArgument("invalid-argument: dimension mismatch in rank_one");
    return phi * psi.adjoint();
}

GFunction conj_Jm(const GFunction& f, const FiniteGroup& g, const Multiplier& m) {
    if (!f.carrier || !same_carrier(*f.carrier, g))
        throw GroupMismatch("group-mismatch: conj_Jm carrier");
    GFunction out = zero_gfunction(f.carrier);
    for (Index x = 0; x < g.order; ++x) {
        const Index xi = g.inv(x);
        out.values(x) = std::pow(g.modular(x), -0.5) * m(x, xi) *
                        std::conj(f.values(xi));
    }
    return out;
}

GFunction load_gfunction(const std::string& path, CarrierPtr carrier) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("invalid-argument: cannot open " + path);
    GFunction f = zero_gfunction(std::move(carrier));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream is(line);
        Index idx;
        double re, im;
        if (is >> idx >> re >> im) {
            if (idx < 0 || idx >= f.size())
                throw InvalidArgument("invalid-argument: index out of range in " +
                                      path);
            f.values(idx) = cplx(re, im);
        }
    }
    return f;
}

void save_gfunction(std::ostream& os, const GFunction& f) {
    os.precision(17);
    for (Index i = 0; i < f.size(); ++i)
        os << i << " " << f.values(i).real() << " " << f.values(i).imag() << "\n";
}

CMat load_hsoperator(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("invalid-argument: cannot open " + path);
    std::string kw;
    Index dim = 0;
    in >> kw >> dim;
    if (kw != "dim" || dim < 1)
        throw InvalidArgument("invalid-argument: expected `dim d` in " + path);
    CMat a(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) {
            double re, im;
            if (!(in >> re >> im))
                throw InvalidArgument("invalid-argument: truncated operator in " +
                                      path);
            a(i, j) = cplx(re, im);
        }
    return a;
}

void save_hsoperator(std::ostream& os, const CMat& a) {
    os.precision(17);
    os << "dim " << a.rows() << "\n";
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j)
            os << a(i, j).real() << " " << a(i, j).imag()
               << (j + 1 < a.cols() ? "  " : "");
        os << "\n";
    }
}

}  // namespace starprod
