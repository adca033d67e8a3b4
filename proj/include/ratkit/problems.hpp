#pragma once

#include "ratkit/dense.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace ratkit {

struct TestProblem {
    std::string name;
    DenseMatrix a;
    DenseVector b;
    std::optional<DenseVector> x_true;
    std::map<std::string, std::string> params;
};

struct NoiseSpec {
    double delta = 0.0;
    std::uint64_t seed = 0;
};

/// gravity, foxgood, shaw or baart with the usual Regtools discretizations and
/// b = A x_true. n >= 8; shaw needs even n.
TestProblem generate_fredholm(std::string_view name, std::size_t n);

/// Four-term Franke test function on [0,1]^2.
double franke(double x, double y);

/// Gaussian RBF interpolation of the Franke function on a grid_n x grid_n
/// equispaced grid of the unit square. No exact solution.
TestProblem generate_franke_rbf(std::size_t grid_n, double shape);

/// b + delta ||b|| / sqrt(N) u with u standard normal (mt19937_64, polar method).
DenseVector add_noise(const DenseVector& b, const NoiseSpec& spec);

/// Reads a real or integer Matrix Market file (coordinate or array;
/// general, symmetric or skew-symmetric) into a dense matrix.
DenseMatrix read_matrix_market(const std::filesystem::path& path);

/// Reads an n x 1 (or 1 x n) Matrix Market file as a vector.
DenseVector read_matrix_market_vector(const std::filesystem::path& path);

/// Square A and optional b; b defaults to A * ones.
TestProblem load_matrix_market(const std::filesystem::path& path_a,
                               const std::optional<std::filesystem::path>& path_b = std::nullopt);

/// Array format, general, %.17g.
void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const DenseVector& v);

} // namespace ratkit
