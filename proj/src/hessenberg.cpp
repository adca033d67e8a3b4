#include "ratkit/hessenberg.hpp"

#include "ratkit/errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace ratkit {

namespace {

void normalize(ScaledReal& s) {
    if (s.mantissa == 0.0 || !std::isfinite(s.mantissa)) {
        if (s.mantissa == 0.0)
            s.exponent = 0;
        return;
    }
    int e = 0;
    s.mantissa = std::frexp(s.mantissa, &e);
    s.exponent += e;
}

} // namespace

double ScaledReal::value() const {
    if (mantissa == 0.0)
        return 0.0;
    if (exponent > std::numeric_limits<int>::max())
        return std::copysign(std::numeric_limits<double>::infinity(), mantissa);
    if (exponent < std::numeric_limits<int>::min())
        return std::copysign(0.0, mantissa);
    return std::ldexp(mantissa, static_cast<int>(exponent));
}

double ScaledReal::log10_abs() const {
    if (mantissa == 0.0)
        return -std::numeric_limits<double>::infinity();
    return std::log10(std::abs(mantissa)) + static_cast<double>(exponent) * std::log10(2.0);
}

ScaledReal ScaledReal::from(double x) {
    ScaledReal s{x, 0};
    normalize(s);
    return s;
}

ScaledReal& ScaledReal::operator*=(double x) {
    mantissa *= x;
    normalize(*this);
    return *this;
}

ScaledReal& ScaledReal::operator*=(const ScaledReal& other) {
    mantissa *= other.mantissa;
    exponent += other.exponent;
    normalize(*this);
    return *this;
}

void require_upper_hessenberg(const DenseMatrix& h) {
    if (!h.square())
        throw ContractViolation("hessenberg: matrix must be square");
    const double tol = 1e-14 * max_abs(h);
    for (std::size_t i = 2; i < h.rows(); ++i)
        for (std::size_t j = 0; j + 1 < i; ++j)
            if (std::abs(h(i, j)) > tol)
                throw ContractViolation("hessenberg: matrix is not upper Hessenberg");
}

ScaledReal hessenberg_det_scaled(const DenseMatrix& h, double shift) {
    require_upper_hessenberg(h);
    const std::size_t n = h.rows();
    ScaledReal det = ScaledReal::from(1.0);
    if (n == 0)
        return det;

    auto b = [&](std::size_t i, std::size_t j) { return i == j ? h(i, j) - shift : h(i, j); };

    std::size_t start = 0;
    while (start < n) {
        std::size_t stop = start + 1;
        while (stop < n && h(stop, stop - 1) != 0.0)
            ++stop;

        const std::size_t k = stop - start;
        std::vector<double> x(k, 0.0);
        x[k - 1] = 1.0;
        long x_exponent = 0; // true x = x * 2^x_exponent
        ScaledReal block = ScaledReal::from(1.0);
        for (std::size_t r = k - 1; r >= 1; --r) {
            const std::size_t i = start + r;
            double s = 0.0;
            for (std::size_t c = r; c < k; ++c)
                s += b(i, start + c) * x[c];
            const double sub = h(i, i - 1);
            x[r - 1] = -s / sub;
            block *= sub;
            const double big = std::abs(x[r - 1]);
            if (big > 1e100 || (big < 1e-100 && big > 0.0)) {
                int e = 0;
                std::frexp(big, &e);
                for (std::size_t c = r - 1; c < k; ++c)
                    x[c] = std::ldexp(x[c], -e);
                x_exponent += e;
            }
        }
        double first = 0.0;
        for (std::size_t c = 0; c < k; ++c)
            first += b(start, start + c) * x[c];
        ScaledReal residual = ScaledReal::from(first);
        residual.exponent += x_exponent;
        block *= residual;
        if ((k - 1) % 2 == 1)
            block *= -1.0;
        det *= block;
        start = stop;
    }
    return det;
}

double hessenberg_det(const DenseMatrix& h, double shift) { return hessenberg_det_scaled(h, shift).value(); }

} // namespace ratkit
