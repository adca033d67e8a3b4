#pragma once

#include "ratkit/dense.hpp"

#include <cmath>
#include <cstddef>
#include <random>

namespace ratkit::testing {

inline DenseVector random_vector(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseVector v(n);
    for (double& x : v)
        x = u(rng);
    return v;
}

inline DenseMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DenseMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            a(i, j) = u(rng);
    return a;
}

/// Columns of a random matrix orthonormalized by two passes of Gram-Schmidt.
inline DenseMatrix random_orthogonal(std::size_t n, std::mt19937_64& rng) {
    const DenseMatrix g = random_matrix(n, n, rng);
    DenseMatrix q(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        DenseVector c = g.column(j);
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                const DenseVector qk = q.column(k);
                axpy(-dot(qk, c), qk, c);
            }
        c *= 1.0 / norm2(c);
        q.set_column(j, c);
    }
    return q;
}

/// Q diag(s) Q^T, symmetrized exactly.
inline DenseMatrix spd_with_spectrum(const DenseVector& spectrum, std::mt19937_64& rng) {
    const std::size_t n = spectrum.size();
    const DenseMatrix q = random_orthogonal(n, rng);
    DenseMatrix a = q * DenseMatrix::diagonal(spectrum) * transpose(q);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            a(i, j) = a(j, i);
    return a;
}

/// Eigenvalues kappa^(-i/(n-1)), i = 0..n-1.
inline DenseVector geometric_spectrum(std::size_t n, double kappa) {
    DenseVector s(n);
    for (std::size_t i = 0; i < n; ++i)
        s[i] = n == 1 ? 1.0 : std::pow(kappa, -static_cast<double>(i) / static_cast<double>(n - 1));
    return s;
}

inline double rel_diff(const DenseVector& x, const DenseVector& ref) { return norm2(x - ref) / norm2(ref); }

inline double max_diff(const DenseMatrix& a, const DenseMatrix& b) { return max_abs(a - b); }

} // namespace ratkit::testing
