#include "ratkit/analysis.hpp"

#include "ratkit/errors.hpp"
#include "ratkit/hessenberg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ratkit {

IntervalMap interval_map(double lambda1, double lambdaN, double lambda) {
    if (!(lambda1 > 0.0) || !(lambdaN >= lambda1) || !(lambda > 0.0))
        throw ContractViolation("interval_map: need 0 < lambda1 <= lambdaN and lambda > 0");
    IntervalMap map{lambda1, lambdaN, lambda};
    const double left = 1.0 / (lambdaN + lambda);
    const double right = 1.0 / (lambda1 + lambda);
    map.gamma = 0.25 * (right - left);
    map.c0 = 0.5 * (right + left);
    map.c1 = map.gamma;
    return map;
}

double psi(const IntervalMap& map, double w) { return map.gamma * w + map.c0 + map.c1 / w; }

double psi_prime(const IntervalMap& map, double r) { return map.gamma - map.c1 / (r * r); }

double rhat(const IntervalMap& map) {
    if (!(map.lambda1 < map.lambdaN))
        throw ContractViolation("rhat: degenerate interval (lambda1 == lambdaN)");
    const double width = map.lambdaN - map.lambda1;
    const double u = 2.0 * map.lambda1 * map.lambdaN / (map.lambda * width) + (map.lambdaN + map.lambda1) / width;
    // u + sqrt(u^2 - 1) without cancellation in u^2 - 1 for u near 1
    return u + std::sqrt((u - 1.0) * (u + 1.0));
}

AprioriBound apriori_bound(const IntervalMap& map) {
    if (!(psi(map, 1.0) < 1.0 / map.lambda))
        throw DomainError("apriori_bound: interval is not strictly left of 1/lambda");
    AprioriBound b;
    b.rhat_ = rhat(map);
    if (!(b.rhat_ > 1.0) || !std::isfinite(b.rhat_))
        throw DomainError("apriori_bound: rhat must be finite and > 1");
    b.lambda_ = map.lambda;
    b.psi_prime_ = psi_prime(map, b.rhat_);
    const double r = b.rhat_;
    std::size_t mbar = 1;
    while (!(r / static_cast<double>(mbar + 1) < r - 1.0))
        ++mbar;
    b.mbar_ = mbar;
    return b;
}

double AprioriBound::log_bound_at(std::size_t m) const {
    if (m == 0)
        throw ContractViolation("AprioriBound: m must be >= 1");
    const double r = rhat_;
    const double md = static_cast<double>(m);
    const double common = -2.0 * std::log(lambda_) - std::log(psi_prime_);
    if (m >= mbar_) {
        const double mb = static_cast<double>(mbar_);
        return std::log(2.0) + 1.0 + std::log(mb * r / (mb * (r - 1.0) - 1.0)) + common + std::log(md + 1.0) -
               md * std::log(r);
    }
    return std::log(4.0) - std::log(r - 1.0) + common + md * std::log(2.0 / (r + 1.0)) + std::log((r + 1.0) / (r - 1.0));
}

double AprioriBound::bound_at(std::size_t m) const { return std::exp(log_bound_at(m)); }

double lambda_star(const SpectralEstimate& est) {
    if (!(est.lambda_min > 0.0))
        throw ContractViolation("lambda_star: lambda_min must be positive");
    return std::sqrt(est.lambda_min) * std::sqrt(est.lambda_max);
}

LambdaAdvice lambda_heuristic(double kappa_est) {
    if (!(kappa_est >= 1.0))
        throw ContractViolation("lambda_heuristic: kappa must be >= 1");
    LambdaAdvice a;
    a.point = std::pow(kappa_est, -0.5);
    const double low = 10.0 * a.point;
    const double high = std::pow(kappa_est, -0.25);
    a.range_low = std::min(low, high);
    a.range_high = std::max(low, high);
    a.well_conditioned = kappa_est < kWellConditionedKappa;
    return a;
}

double convergence_factor(double kappa) {
    if (!(kappa >= 1.0))
        throw ContractViolation("convergence_factor: kappa must be >= 1");
    const double q = std::pow(kappa, 0.25);
    return (q - 1.0) / (q + 1.0);
}

double cond_bound_spd(double lambda1, double lambda) {
    if (!(lambda1 > 0.0))
        throw ContractViolation("cond_bound_spd: lambda1 must be positive");
    return (lambda + lambda1) / lambda1;
}

double estimate_condition(const DenseMatrix& a) {
    if (is_symmetric(a))
        return extreme_eigs_spd(a).condition();
    return std::sqrt(extreme_eigs_spd(gram(a)).condition());
}

ScaledReal shifted_denominator(const DenseMatrix& h, double lambda) { return hessenberg_det_scaled(lambda * h, 1.0); }

namespace {

DenseVector shifted_apply(const DenseMatrix& a, double lambda, const DenseVector& v) {
    DenseVector w = a * v;
    axpy(lambda, v, w);
    return w;
}

double log_lambda_power(const ArnoldiDecomposition& d, double lambda) {
    return static_cast<double>(d.m() - 1) * std::log(lambda);
}

double log_subdiagonal_product(const ArnoldiDecomposition& d) {
    double acc = 0.0;
    for (double h : d.subdiagonal())
        acc += std::log(h);
    return acc;
}

double log_denominator(const ArnoldiDecomposition& d, double lambda) {
    const ScaledReal det = shifted_denominator(d.hessenberg(), lambda);
    if (det.mantissa == 0.0 || !std::isfinite(det.mantissa))
        throw DegenerateDenominatorError("det(lambda H - I) vanishes: 1/lambda is a Ritz value");
    return det.log10_abs() * std::log(10.0);
}

void require_started(const ArnoldiDecomposition& d, const DenseMatrix& a) {
    if (d.m() == 0)
        throw ContractViolation("a-posteriori estimate needs at least one Arnoldi step");
    if (!a.square() || a.rows() != d.basis().front().size())
        throw ContractViolation("a-posteriori estimate: matrix does not match the decomposition");
}

} // namespace

double aposteriori_exact_error(const ArnoldiDecomposition& d, const DenseMatrix& a, const Factorization& factored_a,
                               double lambda) {
    require_started(d, a);
    if (d.breakdown() || !d.v_next() || d.h_next() == 0.0)
        return 0.0;
    const double log_den = log_denominator(d, lambda);
    const DenseVector y = solve_factored(factored_a, shifted_apply(a, lambda, *d.v_next()));
    return std::exp(std::log(d.beta()) + log_lambda_power(d, lambda) + log_subdiagonal_product(d) + std::log(norm2(y)) -
                    log_den);
}

double aposteriori_relative_bound(const ArnoldiDecomposition& d, const DenseMatrix& a, double lambda) {
    require_started(d, a);
    if (d.breakdown() || !d.v_next() || d.h_next() == 0.0)
        return 0.0;
    const double log_den = log_denominator(d, lambda);
    const DenseVector w = shifted_apply(a, lambda, *d.v_next());
    return std::exp(log_lambda_power(d, lambda) + log_subdiagonal_product(d) + std::log(norm2(w)) - log_den);
}

} // namespace ratkit
