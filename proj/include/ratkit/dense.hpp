#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ratkit {

/// Real dense vector.
class DenseVector {
public:
    DenseVector() = default;
    explicit DenseVector(std::size_t n, double value = 0.0) : data_(n, value) {}
    DenseVector(std::initializer_list<double> values) : data_(values) {}
    explicit DenseVector(std::vector<double> values) : data_(std::move(values)) {}

    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::span<double> span() noexcept { return data_; }
    std::span<const double> span() const noexcept { return data_; }
    const std::vector<double>& values() const noexcept { return data_; }

    auto begin() noexcept { return data_.begin(); }
    auto end() noexcept { return data_.end(); }
    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

    DenseVector& operator+=(const DenseVector& other);
    DenseVector& operator-=(const DenseVector& other);
    DenseVector& operator*=(double s);

    bool operator==(const DenseVector&) const = default;

    static DenseVector unit(std::size_t n, std::size_t k);

private:
    std::vector<double> data_;
};

DenseVector operator+(DenseVector a, const DenseVector& b);
DenseVector operator-(DenseVector a, const DenseVector& b);
DenseVector operator*(double s, DenseVector v);
DenseVector operator*(DenseVector v, double s);

double dot(std::span<const double> a, std::span<const double> b);
double dot(const DenseVector& a, const DenseVector& b);

/// Euclidean norm, scaled to avoid overflow for huge entries.
double norm2(std::span<const double> v);
double norm2(const DenseVector& v);

/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void axpy(double alpha, const DenseVector& x, DenseVector& y);

/// Real dense matrix in row-major order.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> row_major);
    DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix diagonal(const DenseVector& d);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    DenseVector column(std::size_t j) const;
    void set_column(std::size_t j, const DenseVector& v);

    const std::vector<double>& values() const noexcept { return data_; }

    bool operator==(const DenseMatrix&) const = default;

    DenseMatrix& operator+=(const DenseMatrix& other);
    DenseMatrix& operator-=(const DenseMatrix& other);
    DenseMatrix& operator*=(double s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b);
DenseMatrix operator*(double s, DenseMatrix a);

DenseVector operator*(const DenseMatrix& a, const DenseVector& x);
DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);

/// A^T x without forming the transpose.
DenseVector transpose_times(const DenseMatrix& a, const DenseVector& x);
DenseMatrix transpose(const DenseMatrix& a);
/// A^T A
DenseMatrix gram(const DenseMatrix& a);

/// A + s I
DenseMatrix shifted(DenseMatrix a, double s);

double max_abs(const DenseMatrix& a);
double max_abs(const DenseVector& v);
bool all_finite(const DenseMatrix& a);
bool all_finite(const DenseVector& v);

/// max|A - A^T| <= tol * max|A|
bool is_symmetric(const DenseMatrix& a, double rel_tol = 1e-12);

/// Relative asymmetry max|A - A^T| / max|A| (zero for the zero matrix).
double asymmetry(const DenseMatrix& a);

} // namespace ratkit
