#include "ratkit/errors.hpp"
#include "ratkit/factorization.hpp"
#include "ratkit/hessenberg.hpp"
#include "ratkit/spectral.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace ratkit;
using namespace ratkit::testing;

namespace {

double cofactor_det(const DenseMatrix& a) {
    const std::size_t n = a.rows();
    if (n == 1)
        return a(0, 0);
    double det = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        DenseMatrix minor(n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j)
                    minor(i - 1, c++) = a(i, k);
        det += ((j % 2) ? -1.0 : 1.0) * a(0, j) * cofactor_det(minor);
    }
    return det;
}

DenseMatrix leading(const DenseMatrix& a, std::size_t k) {
    DenseMatrix m(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            m(i, j) = a(i, j);
    return m;
}

} // namespace

TEST_CASE("lu_factor scalar and identity") {
    const Factorization f = lu_factor(DenseMatrix{{2.0}});
    CHECK(f.lower(0, 0) == 1.0);
    CHECK(f.upper(0, 0) == 2.0);
    CHECK(f.permutation == std::vector<std::size_t>{0});

    const DenseMatrix i5 = DenseMatrix::identity(5);
    const Factorization g = lu_factor(i5);
    CHECK(g.lower == i5);
    CHECK(g.upper == i5);
    CHECK(g.permutation == std::vector<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("lu_factor pivots the exchange matrix") {
    const DenseMatrix a{{0.0, 1.0}, {1.0, 0.0}};
    const Factorization f = lu_factor(a);
    CHECK(f.permutation == std::vector<std::size_t>{1, 0});
    CHECK(f.upper == DenseMatrix::identity(2));
    CHECK(f.lower == DenseMatrix::identity(2));
    CHECK(reconstruct(f) == a);
}

TEST_CASE("lu_factor reports the singular column") {
    try {
        lu_factor(DenseMatrix{{1.0, 2.0}, {2.0, 4.0}});
        FAIL("expected SingularMatrixError");
    } catch (const SingularMatrixError& e) {
        CHECK(e.column() == 1);
    }
    CHECK_THROWS_AS(lu_factor(DenseMatrix(2, 3)), ContractViolation);
}

TEST_CASE("cholesky_factor examples") {
    CHECK(cholesky_factor(DenseMatrix{{4.0}}).lower(0, 0) == 2.0);

    const Factorization d = cholesky_factor(DenseMatrix::diagonal({1.0, 4.0, 9.0}));
    CHECK(d.lower == DenseMatrix::diagonal({1.0, 2.0, 3.0}));

    const Factorization f = cholesky_factor(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}});
    CHECK(f.lower(0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(f.lower(0, 1) == 0.0);
    CHECK(f.lower(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(f.lower(1, 1) == doctest::Approx(std::sqrt(1.5)).epsilon(1e-15));

    CHECK_THROWS_AS(cholesky_factor(DenseMatrix{{1.0, 2.0}, {2.0, 1.0}}), NotSpdError);
    CHECK_THROWS_AS(cholesky_factor(DenseMatrix{{1.0, 2.0}, {0.0, 1.0}}), ContractViolation);
}

TEST_CASE("cholesky succeeds exactly when all leading minors are positive") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> shift(-1.5, 2.5);
    int spd = 0, rejected = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const DenseMatrix g = random_matrix(5, 5, rng);
        DenseMatrix a = 0.5 * gram(g);
        const double s = shift(rng);
        for (std::size_t i = 0; i < 5; ++i)
            a(i, i) += s;
        bool minors_positive = true;
        for (std::size_t k = 1; k <= 5; ++k)
            minors_positive = minors_positive && cofactor_det(leading(a, k)) > 0.0;
        bool factored = true;
        try {
            cholesky_factor(a);
        } catch (const NotSpdError&) {
            factored = false;
        }
        CHECK(factored == minors_positive);
        (factored ? spd : rejected) += 1;
    }
    CHECK(spd > 20);
    CHECK(rejected > 20);
}

TEST_CASE("solve_factored examples") {
    const DenseVector r{0.3, -1.0, 2.5};
    CHECK(solve_factored(lu_factor(DenseMatrix::identity(3)), r) == r);

    const DenseVector y = solve_factored(factor_spd_or_lu(DenseMatrix::diagonal({2.0, 4.0})), {2.0, 4.0});
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(1.0));

    for (const Factorization& f : {lu_factor(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}}),
                                   cholesky_factor(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}})}) {
        const DenseVector x = solve_factored(f, {3.0, 3.0});
        CHECK(x[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(x[1] == doctest::Approx(1.0).epsilon(1e-15));
    }

    CHECK_THROWS_AS(solve_factored(lu_factor(DenseMatrix::identity(3)), DenseVector{1.0, 2.0}), ContractViolation);
}

TEST_CASE("factored solves of random 20x20 systems have small residuals") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        DenseMatrix a = random_matrix(20, 20, rng);
        for (std::size_t i = 0; i < 20; ++i)
            a(i, i) += 4.0;
        const DenseVector r = random_vector(20, rng);
        const Factorization f = lu_factor(a);
        CHECK(norm2(a * solve_factored(f, r) - r) / norm2(r) <= 1e-10);
        CHECK(max_diff(reconstruct(f), a) <= 1e-13);
    }
}

TEST_CASE("factor_spd_or_lu picks the path by symmetry and definiteness") {
    CHECK(factor_spd_or_lu(DenseMatrix{{2.0, 1.0}, {1.0, 2.0}}).kind == FactorKind::Cholesky);
    CHECK(factor_spd_or_lu(DenseMatrix{{1.0, 2.0}, {2.0, 1.0}}).kind == FactorKind::PivotedLU);
    CHECK(factor_spd_or_lu(DenseMatrix{{2.0, 1.0}, {0.0, 2.0}}).kind == FactorKind::PivotedLU);
}

TEST_CASE("extreme_eigs_spd on diagonal matrices") {
    const SpectralEstimate a = extreme_eigs_spd(DenseMatrix::diagonal({1.0, 2.0, 3.0}));
    CHECK(a.lambda_min == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(a.lambda_max == doctest::Approx(3.0).epsilon(1e-8));

    const SpectralEstimate b = extreme_eigs_spd(DenseMatrix::identity(4));
    CHECK(b.lambda_min == doctest::Approx(1.0));
    CHECK(b.lambda_max == doctest::Approx(1.0));

    const SpectralEstimate c = extreme_eigs_spd(DenseMatrix::diagonal({1e-6, 1.0}));
    CHECK(std::abs(c.lambda_min - 1e-6) / 1e-6 <= 1e-6);
    CHECK(std::abs(c.lambda_max - 1.0) <= 1e-6);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 10.0);
    DenseVector d(30);
    for (double& x : d)
        x = u(rng);
    const SpectralEstimate e = extreme_eigs_spd(DenseMatrix::diagonal(d));
    CHECK(e.lambda_min == doctest::Approx(*std::min_element(d.begin(), d.end())).epsilon(1e-6));
    CHECK(e.lambda_max == doctest::Approx(*std::max_element(d.begin(), d.end())).epsilon(1e-6));
}

TEST_CASE("extreme_eigs_spd returns unconverged estimates instead of failing") {
    const SpectralEstimate e = extreme_eigs_spd(DenseMatrix::diagonal({1.0, 0.999999, 2.0, 1.999999}), 1e-15, 3);
    CHECK_FALSE(e.converged);
    CHECK(e.lambda_min > 0.0);
    CHECK(e.lambda_max >= e.lambda_min);
}

TEST_CASE("hessenberg_det examples") {
    CHECK(hessenberg_det(DenseMatrix{{2.0}}, 1.0) == doctest::Approx(1.0));
    CHECK(hessenberg_det(DenseMatrix::diagonal({1.0, 2.0}), 0.0) == doctest::Approx(2.0));
    CHECK(hessenberg_det(DenseMatrix{{1.0, 1.0}, {1.0, 1.0}}, 0.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(hessenberg_det(DenseMatrix{{1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 1.0, 1.0}}, 0.0),
                    ContractViolation);
}

TEST_CASE("hessenberg_det agrees with cofactor expansion") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        DenseMatrix h = random_matrix(6, 6, rng);
        for (std::size_t i = 2; i < 6; ++i)
            for (std::size_t j = 0; j + 1 < i; ++j)
                h(i, j) = 0.0;
        if (trial % 5 == 0)
            h(3, 2) = 0.0;
        const double shift = u(rng);
        const double oracle = cofactor_det(shifted(h, -shift));
        CHECK(std::abs(hessenberg_det(h, shift) - oracle) <= 1e-10 * std::max(1.0, std::abs(oracle)));
    }
}

TEST_CASE("hessenberg_det_scaled survives over- and underflow") {
    const std::size_t n = 400;
    DenseMatrix big = DenseMatrix::diagonal(DenseVector(n, 1e4));
    const ScaledReal d = hessenberg_det_scaled(big, 0.0);
    CHECK(d.log10_abs() == doctest::Approx(1600.0).epsilon(1e-12));
    CHECK(std::isinf(d.value()));

    DenseMatrix small = DenseMatrix::diagonal(DenseVector(n, 1e-4));
    const ScaledReal s = hessenberg_det_scaled(small, 0.0);
    CHECK(s.log10_abs() == doctest::Approx(-1600.0).epsilon(1e-12));
    CHECK(s.value() == 0.0);
}
