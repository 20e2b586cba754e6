#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "starprod/types.hpp"

namespace starprod {

// All randomness in the artifact flows through one seeded engine per consumer.
// Check suites derive their engine from seed ^ fnv1a(suite name), so results
// do not depend on suite execution order (or on --parallel).
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    Rng(std::uint64_t seed, std::string_view stream) : eng_(seed ^ fnv1a(stream)) {}

    double real() { return unit_(eng_); }

    cplx scalar() { return {norm_(eng_), norm_(eng_)}; }

    CVec vector(Index n) {
        CVec v(n);
        for (Index i = 0; i < n; ++i) v(i) = scalar();
        return v;
    }

    CVec unit_vector(Index n) {
        CVec v = vector(n);
        return v / v.norm();
    }

    CMat matrix(Index r, Index c) {
        CMat m(r, c);
        for (Index i = 0; i < r; ++i)
            for (Index j = 0; j < c; ++j) m(i, j) = scalar();
        return m;
    }

    // Haar-ish unitary via QR of a Ginibre matrix with phase fixing.
    CMat unitary(Index n) {
        CMat g = matrix(n, n);
        Eigen::HouseholderQR<CMat> qr(g);
        CMat q = qr.householderQ() * CMat::Identity(n, n);
        CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (Index j = 0; j < n; ++j) {
            cplx d = r(j, j);
            q.col(j) *= (std::abs(d) > 0) ? d / std::abs(d) : cplx(1, 0);
        }
        return q;
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    std::normal_distribution<double> norm_{0.0, 1.0};
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

}  // namespace starprod
