#include "ratkit/dense.hpp"

#include "ratkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ratkit {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw ContractViolation(std::string(what) + ": length mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
    }
}

} // namespace

DenseVector& DenseVector::operator+=(const DenseVector& other) {
    require_same_size(size(), other.size(), "vector +=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += other.data_[i];
    return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
    require_same_size(size(), other.size(), "vector -=");
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= other.data_[i];
    return *this;
}

DenseVector& DenseVector::operator*=(double s) {
    for (auto& x : data_)
        x *= s;
    return *this;
}

DenseVector DenseVector::unit(std::size_t n, std::size_t k) {
    DenseVector e(n);
    e[k] = 1.0;
    return e;
}

DenseVector operator+(DenseVector a, const DenseVector& b) { return a += b; }
DenseVector operator-(DenseVector a, const DenseVector& b) { return a -= b; }
DenseVector operator*(double s, DenseVector v) { return v *= s; }
DenseVector operator*(DenseVector v, double s) { return v *= s; }

double dot(std::span<const double> a, std::span<const double> b) {
    require_same_size(a.size(), b.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double dot(const DenseVector& a, const DenseVector& b) { return dot(a.span(), b.span()); }

double norm2(std::span<const double> v) {
    double scale = 0.0;
    for (double x : v)
        scale = std::max(scale, std::abs(x));
    if (scale == 0.0 || !std::isfinite(scale))
        return scale;
    double ssq = 0.0;
    for (double x : v) {
        const double t = x / scale;
        ssq += t * t;
    }
    return scale * std::sqrt(ssq);
}

double norm2(const DenseVector& v) { return norm2(v.span()); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require_same_size(x.size(), y.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i)
        y[i] += alpha * x[i];
}

void axpy(double alpha, const DenseVector& x, DenseVector& y) { axpy(alpha, x.span(), y.span()); }

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (data_.size() != rows_ * cols_)
        throw ContractViolation("DenseMatrix: entry count does not match rows*cols");
}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_)
            throw ContractViolation("DenseMatrix: ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(const DenseVector& d) {
    DenseMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        m(i, i) = d[i];
    return m;
}

DenseVector DenseMatrix::column(std::size_t j) const {
    DenseVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        c[i] = (*this)(i, j);
    return c;
}

void DenseMatrix::set_column(std::size_t j, const DenseVector& v) {
    require_same_size(rows_, v.size(), "set_column");
    for (std::size_t i = 0; i < rows_; ++i)
        (*this)(i, j) = v[i];
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ContractViolation("matrix +=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] += other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw ContractViolation("matrix -=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k)
        data_[k] -= other.data_[k];
    return *this;
}

DenseMatrix& DenseMatrix::operator*=(double s) {
    for (auto& x : data_)
        x *= s;
    return *this;
}

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
DenseMatrix operator*(double s, DenseMatrix a) { return a *= s; }

DenseVector operator*(const DenseMatrix& a, const DenseVector& x) {
    require_same_size(a.cols(), x.size(), "matvec");
    DenseVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        y[i] = dot(a.row(i), x.span());
    return y;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_size(a.cols(), b.rows(), "matmul");
    DenseMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0)
                continue;
            axpy(aik, b.row(k), ci);
        }
    }
    return c;
}

DenseVector transpose_times(const DenseMatrix& a, const DenseVector& x) {
    require_same_size(a.rows(), x.size(), "transpose_times");
    DenseVector y(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        axpy(x[i], a.row(i), y.span());
    return y;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            t(j, i) = a(i, j);
    return t;
}

DenseMatrix gram(const DenseMatrix& a) {
    const std::size_t n = a.cols();
    DenseMatrix g(n, n);
    for (std::size_t k = 0; k < a.rows(); ++k) {
        auto r = a.row(k);
        for (std::size_t i = 0; i < n; ++i) {
            if (r[i] == 0.0)
                continue;
            for (std::size_t j = i; j < n; ++j)
                g(i, j) += r[i] * r[j];
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j)
            g(i, j) = g(j, i);
    return g;
}

DenseMatrix shifted(DenseMatrix a, double s) {
    if (!a.square())
        throw ContractViolation("shifted: matrix must be square");
    for (std::size_t i = 0; i < a.rows(); ++i)
        a(i, i) += s;
    return a;
}

double max_abs(const DenseMatrix& a) {
    double m = 0.0;
    for (double x : a.values())
        m = std::max(m, std::abs(x));
    return m;
}

double max_abs(const DenseVector& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(const DenseMatrix& a) {
    return std::all_of(a.values().begin(), a.values().end(), [](double x) { return std::isfinite(x); });
}

bool all_finite(const DenseVector& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double asymmetry(const DenseMatrix& a) {
    if (!a.square())
        throw ContractViolation("asymmetry: matrix must be square");
    const double scale = max_abs(a);
    if (scale == 0.0)
        return 0.0;
    double d = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = i + 1; j < a.cols(); ++j)
            d = std::max(d, std::abs(a(i, j) - a(j, i)));
    return d / scale;
}

bool is_symmetric(const DenseMatrix& a, double rel_tol) {
    return a.square() && asymmetry(a) <= rel_tol;
}

} // namespace ratkit
