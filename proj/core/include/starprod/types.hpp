#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace starprod {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Index = Eigen::Index;

// Default numeric gates. Exact algebraic identities are held to kTolExact,
// everything that passes through a matrix product or an SVD to kTolDefault.
constexpr double kTolExact = 1e-12;
constexpr double kTolDefault = 1e-10;
constexpr double kSvdNullThreshold = 1e-8;

// Error taxonomy. Messages carry the detail; the type carries the category.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
    using Error::Error;
};
struct InvalidGroup : Error {
    using Error::Error;
};
struct ReducibleRepresentation : Error {
    using Error::Error;
};
struct NotSquareIntegrable : Error {
    using Error::Error;
};
struct UnsupportedOrdering : Error {
    using Error::Error;
};
struct GridMismatch : Error {
    using Error::Error;
};
struct GroupMismatch : Error {
    using Error::Error;
};
struct Unsupported : Error {
    using Error::Error;
};

// Row-major vectorization of B2(H): basis |e_i><e_j| ordered i outer, j inner.
// This convention is part of the on-disk format; see README.
inline CVec vec_rm(const CMat& a) {
    const Index d = a.rows();
    CVec v(d * a.cols());
    for (Index i = 0; i < d; ++i)
        for (Index j = 0; j < a.cols(); ++j) v(i * a.cols() + j) = a(i, j);
    return v;
}

inline CMat unvec_rm(const CVec& v, Index dim) {
    CMat a(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) a(i, j) = v(i * dim + j);
    return a;
}

// Neumaier-compensated accumulator, applied per real component. The explicit
// star products sum |G|^2 kernel terms against 1e-10 gates; naive accumulation
// is not enough headroom on the larger carriers.
class CompensatedSum {
public:
    void add(cplx x) {
        addPart(sr_, cr_, x.real());
        addPart(si_, ci_, x.imag());
    }
    cplx value() const { return {sr_ + cr_, si_ + ci_}; }

private:
    static void addPart(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double sr_ = 0.0, cr_ = 0.0, si_ = 0.0, ci_ = 0.0;
};

inline double rel_dev(double dev, double scale) {
    return dev / std::max(scale, 1e-300);
}

}  // namespace starprod
