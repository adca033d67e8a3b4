#include "ratkit/spectral.hpp"

#include "ratkit/errors.hpp"
#include "ratkit/factorization.hpp"

#include <cmath>
#include <utility>
#include <random>

namespace ratkit {

namespace {

struct PowerResult {
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

DenseVector start_vector(std::size_t n) {
    // Fixed-seed positive start: generically not orthogonal to any eigenvector.
    std::mt19937_64 gen(0x5eedULL);
    std::uniform_real_distribution<double> dist(0.5, 1.5);
    DenseVector v(n);
    for (auto& x : v)
        x = dist(gen);
    v *= 1.0 / norm2(v);
    return v;
}

PowerResult power_iteration(const MatVec& apply, std::size_t n, double tol, std::size_t max_iter) {
    PowerResult out;
    DenseVector v = start_vector(n);
    double previous = 0.0;
    for (std::size_t k = 1; k <= max_iter; ++k) {
        DenseVector w = apply(v);
        const double rq = dot(v, w);
        const double nw = norm2(w);
        out.iterations = k;
        out.value = std::abs(rq);
        if (nw == 0.0 || !std::isfinite(nw))
            break;
        if (k > 1 && std::abs(rq - previous) <= tol * std::abs(rq)) {
            out.converged = true;
            break;
        }
        previous = rq;
        v = (1.0 / nw) * std::move(w);
    }
    return out;
}

} // namespace

SpectralEstimate extreme_eigs_spd(const MatVec& apply, const MatVec& apply_inverse, std::size_t n, double tol,
                                  std::size_t max_iter) {
    if (n == 0)
        throw ContractViolation("extreme_eigs_spd: dimension must be positive");
    if (!(tol > 0.0))
        throw ContractViolation("extreme_eigs_spd: tol must be positive");

    const PowerResult top = power_iteration(apply, n, tol, max_iter);
    const PowerResult inv = power_iteration(apply_inverse, n, tol, max_iter);

    SpectralEstimate est;
    est.lambda_max = top.value;
    est.lambda_min = inv.value > 0.0 ? 1.0 / inv.value : 0.0;
    est.iterations_used = top.iterations + inv.iterations;
    est.converged = top.converged && inv.converged;
    if (est.lambda_min > est.lambda_max) {
        // Only possible when neither run converged; keep the ordering invariant.
        std::swap(est.lambda_min, est.lambda_max);
    }
    return est;
}

SpectralEstimate extreme_eigs_spd(const DenseMatrix& a, double tol, std::size_t max_iter) {
    const Factorization f = factor_spd_or_lu(a);
    return extreme_eigs_spd([&a](const DenseVector& v) { return a * v; },
                            [&f](const DenseVector& v) { return solve_factored(f, v); }, a.rows(), tol, max_iter);
}

} // namespace ratkit
