#include "ratkit/problems.hpp"

#include "ratkit/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

namespace ratkit {

namespace {

constexpr double pi = std::numbers::pi;

TestProblem finish(std::string name, DenseMatrix a, DenseVector x, std::size_t n) {
    TestProblem p;
    p.name = std::move(name);
    p.b = a * x;
    p.a = std::move(a);
    p.x_true = std::move(x);
    p.params["n"] = std::to_string(n);
    return p;
}

TestProblem shaw(std::size_t n) {
    if (n % 2 != 0)
        throw ContractViolation("shaw: n must be even");
    const double h = pi / static_cast<double>(n);
    std::vector<double> co(n), sn(n);
    DenseVector x(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = -pi / 2.0 + (static_cast<double>(i) + 0.5) * h;
        co[i] = std::cos(t);
        sn[i] = pi * std::sin(t);
        x[i] = 2.0 * std::exp(-6.0 * (t - 0.8) * (t - 0.8)) + std::exp(-2.0 * (t + 0.5) * (t + 0.5));
    }
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double c = co[i] + co[j];
            if (i + j == n - 1) {
                a(i, j) = h * c * c;
            } else {
                const double ss = sn[i] + sn[j];
                const double v = c * std::sin(ss) / ss;
                a(i, j) = h * v * v;
            }
        }
    }
    return finish("shaw", std::move(a), std::move(x), n);
}

TestProblem baart(std::size_t n) {
    const double hs = pi / (2.0 * static_cast<double>(n));
    const double ht = pi / static_cast<double>(n);
    const double c = 1.0 / (3.0 * std::sqrt(2.0));
    std::vector<double> ihs(n + 1);
    for (std::size_t i = 0; i <= n; ++i)
        ihs[i] = static_cast<double>(i) * hs;

    auto cell_integrals = [&](double co) {
        std::vector<double> f(n);
        for (std::size_t i = 0; i < n; ++i)
            f[i] = (std::exp(ihs[i + 1] * co) - std::exp(ihs[i] * co)) / co;
        return f;
    };

    DenseMatrix a(n, n);
    std::vector<double> f3 = cell_integrals(1.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::vector<double> f1 = f3;
        const std::vector<double> f2 = cell_integrals(std::cos((static_cast<double>(j) - 0.5) * ht));
        if (2 * j == n)
            f3.assign(n, hs);
        else
            f3 = cell_integrals(std::cos(static_cast<double>(j) * ht));
        for (std::size_t i = 0; i < n; ++i)
            a(i, j - 1) = c * (f1[i] + 4.0 * f2[i] + f3[i]);
    }
    DenseVector x(n);
    for (std::size_t j = 0; j < n; ++j)
        x[j] = (std::cos(static_cast<double>(j) * ht) - std::cos(static_cast<double>(j + 1) * ht)) / std::sqrt(ht);
    return finish("baart", std::move(a), std::move(x), n);
}

TestProblem foxgood(std::size_t n) {
    const double h = 1.0 / static_cast<double>(n);
    DenseVector t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = h * (static_cast<double>(i) + 0.5);
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a(i, j) = h * std::sqrt(t[i] * t[i] + t[j] * t[j]);
    return finish("foxgood", std::move(a), std::move(t), n);
}

TestProblem gravity(std::size_t n) {
    constexpr double depth = 0.25;
    const double dt = 1.0 / static_cast<double>(n);
    DenseVector t(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = dt * (static_cast<double>(i) + 0.5);
        x[i] = std::sin(pi * t[i]) + 0.5 * std::sin(2.0 * pi * t[i]);
    }
    DenseMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double d = t[i] - t[j];
            a(i, j) = dt * depth / std::pow(depth * depth + d * d, 1.5);
        }
    TestProblem p = finish("gravity", std::move(a), std::move(x), n);
    p.params["depth"] = "0.25";
    return p;
}

} // namespace

TestProblem generate_fredholm(std::string_view name, std::size_t n) {
    std::string key(name);
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    const bool known = key == "shaw" || key == "baart" || key == "foxgood" || key == "gravity";
    if (!known)
        throw UnsupportedProblemError("unknown Fredholm problem '" + std::string(name) +
                                      "' (expected gravity, foxgood, shaw or baart)");
    if (n < 8)
        throw ContractViolation(key + ": n must be at least 8");
    if (key == "shaw")
        return shaw(n);
    if (key == "baart")
        return baart(n);
    if (key == "foxgood")
        return foxgood(n);
    return gravity(n);
}

double franke(double x, double y) {
    const double a = 9.0 * x, b = 9.0 * y;
    return 0.75 * std::exp(-((a - 2.0) * (a - 2.0) + (b - 2.0) * (b - 2.0)) / 4.0) +
           0.75 * std::exp(-(a + 1.0) * (a + 1.0) / 49.0 - (b + 1.0) / 10.0) +
           0.5 * std::exp(-((a - 7.0) * (a - 7.0) + (b - 3.0) * (b - 3.0)) / 4.0) -
           0.2 * std::exp(-(a - 4.0) * (a - 4.0) - (b - 7.0) * (b - 7.0));
}

TestProblem generate_franke_rbf(std::size_t grid_n, double shape) {
    if (grid_n < 2)
        throw ContractViolation("franke: grid_n must be at least 2");
    if (!(shape > 0.0))
        throw ContractViolation("franke: shape must be positive");
    const std::size_t n = grid_n * grid_n;
    std::vector<double> px(n), py(n);
    const double step = 1.0 / static_cast<double>(grid_n - 1);
    for (std::size_t i = 0; i < grid_n; ++i)
        for (std::size_t j = 0; j < grid_n; ++j) {
            px[i * grid_n + j] = static_cast<double>(i) * step;
            py[i * grid_n + j] = static_cast<double>(j) * step;
        }
    TestProblem p;
    p.name = "franke";
    p.a = DenseMatrix(n, n);
    p.b = DenseVector(n);
    const double s2 = shape * shape;
    for (std::size_t i = 0; i < n; ++i) {
        p.b[i] = franke(px[i], py[i]);
        for (std::size_t j = 0; j < n; ++j) {
            const double dx = px[i] - px[j], dy = py[i] - py[j];
            p.a(i, j) = std::exp(-s2 * (dx * dx + dy * dy));
        }
    }
    std::ostringstream shape_str;
    shape_str << shape;
    p.params["grid_n"] = std::to_string(grid_n);
    p.params["shape"] = shape_str.str();
    p.params["n"] = std::to_string(n);
    return p;
}

DenseVector add_noise(const DenseVector& b, const NoiseSpec& spec) {
    if (!(spec.delta >= 0.0) || !std::isfinite(spec.delta))
        throw ContractViolation("add_noise: delta must be finite and >= 0");
    if (spec.delta == 0.0 || b.size() == 0)
        return b;
    std::mt19937_64 gen(spec.seed);
    auto uniform = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
    const std::size_t n = b.size();
    DenseVector u(n);
    for (std::size_t i = 0; i < n;) {
        double v1 = 0.0, v2 = 0.0, s = 0.0;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        u[i++] = v1 * factor;
        if (i < n)
            u[i++] = v2 * factor;
    }
    const double scale = spec.delta * norm2(b) / std::sqrt(static_cast<double>(n));
    DenseVector out = b;
    axpy(scale, u, out);
    return out;
}

namespace {

enum class MmLayout { Coordinate, Array };
enum class MmSymmetry { General, Symmetric, SkewSymmetric };

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

double parse_value(const std::string& tok, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size())
            throw FormatError(line, "malformed number '" + tok + "'");
        if (!std::isfinite(v))
            throw FormatError(line, "non-finite value");
        return v;
    } catch (const std::invalid_argument&) {
        throw FormatError(line, "malformed number '" + tok + "'");
    } catch (const std::out_of_range&) {
        throw FormatError(line, "number out of range '" + tok + "'");
    }
}

std::size_t parse_index(const std::string& tok, std::size_t line) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw FormatError(line, "malformed index '" + tok + "'");
    try {
        return std::stoull(tok);
    } catch (const std::out_of_range&) {
        throw FormatError(line, "index out of range '" + tok + "'");
    }
}

std::vector<std::string> tokens(const std::string& line) {
    std::istringstream in(line);
    std::vector<std::string> out;
    std::string t;
    while (in >> t)
        out.push_back(t);
    return out;
}

} // namespace

DenseMatrix read_matrix_market(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error("cannot open '" + path.string() + "'");
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line))
        throw FormatError(1, "empty file");
    ++line_no;
    const auto header = tokens(line);
    if (header.size() != 5 || lower(header[0]) != "%%matrixmarket" || lower(header[1]) != "matrix")
        throw FormatError(line_no, "expected '%%MatrixMarket matrix <layout> <field> <symmetry>'");
    const std::string layout_s = lower(header[2]), field = lower(header[3]), sym_s = lower(header[4]);
    MmLayout layout;
    if (layout_s == "coordinate")
        layout = MmLayout::Coordinate;
    else if (layout_s == "array")
        layout = MmLayout::Array;
    else
        throw FormatError(line_no, "unknown layout '" + header[2] + "'");
    if (field != "real" && field != "integer" && field != "double")
        throw FormatError(line_no, "unsupported field '" + header[3] + "' (real or integer only)");
    MmSymmetry sym;
    if (sym_s == "general")
        sym = MmSymmetry::General;
    else if (sym_s == "symmetric")
        sym = MmSymmetry::Symmetric;
    else if (sym_s == "skew-symmetric")
        sym = MmSymmetry::SkewSymmetric;
    else
        throw FormatError(line_no, "unsupported symmetry '" + header[4] + "'");

    auto next_data_line = [&](std::vector<std::string>& toks) {
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.front() == '%')
                continue;
            if (blank(line))
                continue;
            toks = tokens(line);
            return true;
        }
        return false;
    };

    std::vector<std::string> toks;
    if (!next_data_line(toks))
        throw FormatError(line_no + 1, "missing size line");
    const std::size_t expected = layout == MmLayout::Coordinate ? 3 : 2;
    if (toks.size() != expected)
        throw FormatError(line_no, "size line must have " + std::to_string(expected) + " entries");
    const std::size_t rows = parse_index(toks[0], line_no);
    const std::size_t cols = parse_index(toks[1], line_no);
    if (sym != MmSymmetry::General && rows != cols)
        throw FormatError(line_no, "symmetric storage requires a square matrix");
    DenseMatrix a(rows, cols);

    auto place = [&](std::size_t i, std::size_t j, double v) {
        a(i, j) = v;
        if (i != j) {
            if (sym == MmSymmetry::Symmetric)
                a(j, i) = v;
            else if (sym == MmSymmetry::SkewSymmetric)
                a(j, i) = -v;
        }
    };

    if (layout == MmLayout::Coordinate) {
        const std::size_t nnz = parse_index(toks[2], line_no);
        for (std::size_t k = 0; k < nnz; ++k) {
            if (!next_data_line(toks))
                throw FormatError(line_no + 1, "expected " + std::to_string(nnz) + " entries, found " +
                                                   std::to_string(k));
            if (toks.size() != 3)
                throw FormatError(line_no, "coordinate entry must be 'row col value'");
            const std::size_t i = parse_index(toks[0], line_no);
            const std::size_t j = parse_index(toks[1], line_no);
            if (i < 1 || i > rows || j < 1 || j > cols)
                throw FormatError(line_no, "index out of bounds");
            if (sym != MmSymmetry::General && j > i)
                throw FormatError(line_no, "symmetric storage lists the lower triangle only");
            if (sym == MmSymmetry::SkewSymmetric && i == j)
                throw FormatError(line_no, "skew-symmetric storage has no diagonal");
            place(i - 1, j - 1, parse_value(toks[2], line_no));
        }
    } else {
        for (std::size_t j = 0; j < cols; ++j) {
            std::size_t first = 0;
            if (sym == MmSymmetry::Symmetric)
                first = j;
            else if (sym == MmSymmetry::SkewSymmetric)
                first = j + 1;
            for (std::size_t i = first; i < rows; ++i) {
                if (!next_data_line(toks))
                    throw FormatError(line_no + 1, "array data ended early");
                if (toks.size() != 1)
                    throw FormatError(line_no, "array entry must be a single value");
                place(i, j, parse_value(toks[0], line_no));
            }
        }
    }
    if (next_data_line(toks))
        throw FormatError(line_no, "unexpected trailing data");
    return a;
}

DenseVector read_matrix_market_vector(const std::filesystem::path& path) {
    const DenseMatrix m = read_matrix_market(path);
    if (m.cols() == 1)
        return m.column(0);
    if (m.rows() == 1)
        return DenseVector(std::vector<double>(m.values().begin(), m.values().end()));
    throw ShapeError("'" + path.string() + "' is not a vector (" + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()) + ")");
}

TestProblem load_matrix_market(const std::filesystem::path& path_a, const std::optional<std::filesystem::path>& path_b) {
    TestProblem p;
    p.name = path_a.stem().string();
    p.a = read_matrix_market(path_a);
    if (!p.a.square())
        throw ShapeError("matrix in '" + path_a.string() + "' is not square (" + std::to_string(p.a.rows()) + "x" +
                         std::to_string(p.a.cols()) + ")");
    if (path_b) {
        p.b = read_matrix_market_vector(*path_b);
        if (p.b.size() != p.a.rows())
            throw ShapeError("right-hand side length " + std::to_string(p.b.size()) + " does not match matrix size " +
                             std::to_string(p.a.rows()));
    } else {
        p.b = p.a * DenseVector(std::vector<double>(p.a.cols(), 1.0));
    }
    p.params["n"] = std::to_string(p.a.rows());
    p.params["source"] = path_a.string();
    return p;
}

namespace {

void write_array(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                 const std::function<double(std::size_t, std::size_t)>& at) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write '" + path.string() + "'");
    out << "%%MatrixMarket matrix array real general\n" << rows << ' ' << cols << '\n';
    char buf[40];
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g\n", at(i, j));
            out << buf;
        }
    if (!out)
        throw Error("write failed for '" + path.string() + "'");
}

} // namespace

void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& a) {
    write_array(path, a.rows(), a.cols(), [&](std::size_t i, std::size_t j) { return a(i, j); });
}

void write_matrix_market(const std::filesystem::path& path, const DenseVector& v) {
    write_array(path, v.size(), 1, [&](std::size_t i, std::size_t) { return v[i]; });
}

} // namespace ratkit
