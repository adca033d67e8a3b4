#include "ratkit/baselines.hpp"
#include "ratkit/errors.hpp"
#include "ratkit/factorization.hpp"
#include "ratkit/problems.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace ratkit;
using namespace ratkit::testing;

namespace {

double a_norm(const DenseMatrix& a, const DenseVector& e) { return std::sqrt(std::max(0.0, dot(e, a * e))); }

} // namespace

TEST_CASE("identity systems take one iteration") {
    const DenseVector b{1.0, -2.0, 3.0, 0.5};
    const DenseMatrix eye = DenseMatrix::identity(4);
    for (const SolveReport& r : {cg_solve(eye, b, {std::nullopt, 1e-14, false}),
                                 gmres_solve(eye, b, {std::nullopt, 1e-14, false}),
                                 cgls_solve(eye, b, {std::nullopt, 1e-14, false})}) {
        CHECK(r.history.size() == 1);
        CHECK(rel_diff(r.best_x, b) <= 1e-15);
    }
}

TEST_CASE("CGLS on an orthogonal matrix takes one iteration") {
    std::mt19937_64 rng(4);
    const DenseMatrix q = random_orthogonal(12, rng);
    const DenseVector x = random_vector(12, rng);
    const SolveReport r = cgls_solve(q, q * x, {std::nullopt, 1e-12, false}, x);
    CHECK(r.history.size() == 1);
    CHECK(*r.history.front().error_norm <= 1e-13);
}

TEST_CASE("CG is exact after as many steps as distinct eigenvalues") {
    std::mt19937_64 rng(6);
    const DenseMatrix a = DenseMatrix::diagonal({1.0, 3.0, 3.0, 7.0, 7.0, 7.0, 10.0, 1.0});
    const DenseVector x = random_vector(8, rng);
    const SolveReport r = cg_solve(a, a * x, {4, std::nullopt, false}, x);
    REQUIRE(r.history.size() == 4);
    CHECK(*r.history.back().error_norm / norm2(x) <= 1e-10);
}

TEST_CASE("GMRES on a random 8x8 system is exact at m = 8") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const DenseMatrix a = random_matrix(8, 8, rng);
        const DenseVector b = random_vector(8, rng);
        const SolveReport r = gmres_solve(a, b);
        CHECK(r.history.back().residual_norm / norm2(b) <= 1e-10);
        CHECK(r.history.size() <= 8);
    }
}

TEST_CASE("CG rejects indefinite and nonsymmetric matrices") {
    const DenseVector b{1.0, 1.0};
    try {
        cg_solve(DenseMatrix::diagonal({1.0, -1.0}), {1.0, 2.0});
        FAIL("expected IndefiniteMatrixError");
    } catch (const IndefiniteMatrixError& e) {
        CHECK(e.iteration() >= 1);
    }
    CHECK_THROWS_AS(cg_solve(DenseMatrix{{1.0, 2.0}, {0.0, 1.0}}, b), ContractViolation);
    CHECK_THROWS_AS(gmres_solve(DenseMatrix(2, 3), b), ContractViolation);
    CHECK_THROWS_AS(cgls_solve(DenseMatrix::identity(3), b), ContractViolation);
}

TEST_CASE("each method decreases its natural norm") {
    std::mt19937_64 rng(14);
    const std::size_t n = 40;
    const DenseMatrix spd = spd_with_spectrum(geometric_spectrum(n, 1e5), rng);
    DenseMatrix general = random_matrix(n, n, rng);
    for (std::size_t i = 0; i < n; ++i)
        general(i, i) += 3.0;
    const DenseVector x = random_vector(n, rng);

    const SolveReport cg = cg_solve(spd, spd * x, {std::nullopt, std::nullopt, true}, x);
    double prev = a_norm(spd, x);
    for (const DenseVector& xk : cg.iterates) {
        const double cur = a_norm(spd, xk - x);
        CHECK(cur <= prev * (1.0 + 1e-12) + 1e-12);
        prev = cur;
    }

    for (const DenseMatrix* a : {&spd, static_cast<const DenseMatrix*>(&general)}) {
        const DenseVector b = *a * x;
        const SolveReport gm = gmres_solve(*a, b);
        double last = norm2(b);
        for (const IterationRecord& rec : gm.history) {
            CHECK(rec.residual_norm <= last * (1.0 + 1e-12) + 1e-12);
            last = rec.residual_norm;
        }

        // CGLS minimizes the residual over growing Krylov spaces of A^T A and
        // decreases the error monotonically; ||A^T r|| itself may oscillate.
        const SolveReport ls = cgls_solve(*a, b, {}, x);
        double last_res = norm2(b), last_err = norm2(x);
        for (const IterationRecord& rec : ls.history) {
            CHECK(rec.residual_norm <= last_res * (1.0 + 1e-12) + 1e-12);
            CHECK(*rec.error_norm <= last_err * (1.0 + 1e-12) + 1e-12);
            last_res = rec.residual_norm;
            last_err = *rec.error_norm;
        }
    }
}

TEST_CASE("all baselines agree with a direct solve after N iterations") {
    std::mt19937_64 rng(21);
    const DenseMatrix a = spd_with_spectrum(geometric_spectrum(10, 4.0), rng);
    const DenseVector b = random_vector(10, rng);
    const DenseVector direct = solve_factored(factor_spd_or_lu(a), b);
    CHECK(rel_diff(cg_solve(a, b).best_x, direct) <= 1e-8);
    CHECK(rel_diff(gmres_solve(a, b).best_x, direct) <= 1e-8);
    CHECK(rel_diff(cgls_solve(a, b).best_x, direct) <= 1e-8);
}

TEST_CASE("published baseline results") {
    const TestProblem gravity = generate_fredholm("gravity", 100);
    const SolveReport cg = cg_solve(gravity.a, gravity.b, {}, gravity.x_true);
    CHECK(*cg.best().error_norm == doctest::Approx(1.7e-4).epsilon(0.5));
    CHECK(cg.best_m >= 60);

    const TestProblem foxgood = generate_fredholm("foxgood", 80);
    const SolveReport cgls = cgls_solve(foxgood.a, foxgood.b, {}, foxgood.x_true);
    CHECK(*cgls.best().error_norm == doctest::Approx(6.3e-6).epsilon(0.5));

    const TestProblem baart = generate_fredholm("baart", 120);
    const SolveReport gm = gmres_solve(baart.a, baart.b, {}, baart.x_true);
    CHECK(*gm.best().error_norm == doctest::Approx(9.6e-6).epsilon(0.5));
    CHECK(gm.best_m <= 20);
}
