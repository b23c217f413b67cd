#include "gnmf/matrix.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

namespace gnmf {

namespace {

// Below this many output entries the OpenMP fork costs more than the loop.
constexpr std::int64_t kParallelCutoff = 1 << 14;

std::string shape_of(std::size_t r, std::size_t c) {
    std::ostringstream os;
    os << r << "x" << c;
    return os.str();
}

void require_same_shape(const NonnegMatrix& a, const NonnegMatrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() +
                         " vs " + b.shape_str());
    }
}

void require_entry(double v) {
    if (!std::isfinite(v) || v < 0.0) {
        throw ValueError("matrix entry must be finite and nonnegative, got " +
                         std::to_string(v));
    }
}

} // namespace

NonnegMatrix::NonnegMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1, got " + shape_of(rows, cols));
    }
}

NonnegMatrix::NonnegMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (rows == 0 || cols == 0) {
        throw ShapeError("matrix dimensions must be at least 1x1, got " + shape_of(rows, cols));
    }
    if (data_.size() != rows * cols) {
        throw ShapeError("value buffer length " + std::to_string(data_.size()) +
                         " does not match shape " + shape_of(rows, cols));
    }
    for (double v : data_) require_entry(v);
}

NonnegMatrix NonnegMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) {
        throw ShapeError("from_rows: need at least one row and one column");
    }
    const std::size_t cols = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * cols);
    for (const auto& r : rows) {
        if (r.size() != cols) throw ShapeError("from_rows: ragged rows");
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return NonnegMatrix(rows.size(), cols, std::move(flat));
}

void NonnegMatrix::set(std::size_t i, std::size_t j, double v) {
    require_entry(v);
    data_[i * cols_ + j] = v;
}

std::string NonnegMatrix::shape_str() const { return shape_of(rows_, cols_); }

NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("matmul: inner dimensions disagree, " + a.shape_str() +
                         " times " + b.shape_str());
    }
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    const std::int64_t kk = static_cast<std::int64_t>(a.cols());
    const std::int64_t n = static_cast<std::int64_t>(b.cols());
    std::vector<double> out(static_cast<std::size_t>(m * n), 0.0);
    const double* pa = a.data();
    const double* pb = b.data();

    // i-l-j order: contiguous row access on b and out; each out entry is
    // accumulated in ascending l by a single thread, so the result does not
    // depend on the thread count.
#pragma omp parallel for schedule(static) if (m * n >= kParallelCutoff)
    for (std::int64_t i = 0; i < m; ++i) {
        double* orow = out.data() + i * n;
        const double* arow = pa + i * kk;
        for (std::int64_t l = 0; l < kk; ++l) {
            const double ail = arow[l];
            if (ail == 0.0) continue;  // term-document matrices are mostly zeros
            const double* brow = pb + l * n;
            for (std::int64_t j = 0; j < n; ++j) orow[j] += ail * brow[j];
        }
    }
    return NonnegMatrix(a.rows(), b.cols(), std::move(out));
}

NonnegMatrix transpose(const NonnegMatrix& a) {
    const std::int64_t m = static_cast<std::int64_t>(a.rows());
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    std::vector<double> out(static_cast<std::size_t>(m * n));
    const double* pa = a.data();
#pragma omp parallel for schedule(static) if (m * n >= kParallelCutoff)
    for (std::int64_t j = 0; j < n; ++j) {
        double* orow = out.data() + j * m;
        for (std::int64_t i = 0; i < m; ++i) orow[i] = pa[i * n + j];
    }
    return NonnegMatrix(a.cols(), a.rows(), std::move(out));
}

NonnegMatrix hadamard(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_shape(a, b, "hadamard");
    const std::int64_t sz = static_cast<std::int64_t>(a.size());
    std::vector<double> out(a.size());
    const double* pa = a.data();
    const double* pb = b.data();
#pragma omp parallel for schedule(static) if (sz >= kParallelCutoff)
    for (std::int64_t i = 0; i < sz; ++i) out[i] = pa[i] * pb[i];
    return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

NonnegMatrix safe_divide(const NonnegMatrix& num, const NonnegMatrix& den, double eps) {
    require_same_shape(num, den, "safe_divide");
    if (!(eps > 0.0)) throw ValueError("safe_divide: eps must be positive");
    const std::int64_t sz = static_cast<std::int64_t>(num.size());
    std::vector<double> out(num.size());
    const double* pn = num.data();
    const double* pd = den.data();
#pragma omp parallel for schedule(static) if (sz >= kParallelCutoff)
    for (std::int64_t i = 0; i < sz; ++i) out[i] = pn[i] / (pd[i] + eps);
    return NonnegMatrix(num.rows(), num.cols(), std::move(out));
}

NonnegMatrix add_scaled(const NonnegMatrix& a, const NonnegMatrix& b, double s) {
    require_same_shape(a, b, "add_scaled");
    if (!(s >= 0.0)) throw ValueError("add_scaled: scale must be nonnegative");
    const std::int64_t sz = static_cast<std::int64_t>(a.size());
    std::vector<double> out(a.size());
    const double* pa = a.data();
    const double* pb = b.data();
#pragma omp parallel for schedule(static) if (sz >= kParallelCutoff)
    for (std::int64_t i = 0; i < sz; ++i) out[i] = pa[i] + s * pb[i];
    return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

namespace {

// Row partials first, then a serial sum in row order: bitwise deterministic
// for any thread count.
template <typename RowTerm>
double rowwise_sum(std::int64_t rows, std::int64_t cols, RowTerm term) {
    std::vector<double> partial(static_cast<std::size_t>(rows), 0.0);
#pragma omp parallel for schedule(static) if (rows * cols >= kParallelCutoff)
    for (std::int64_t i = 0; i < rows; ++i) {
        double acc = 0.0;
        for (std::int64_t j = 0; j < cols; ++j) acc += term(i, j);
        partial[static_cast<std::size_t>(i)] = acc;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

} // namespace

double frobenius_norm_sq(const NonnegMatrix& a) {
    const double* p = a.data();
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    return rowwise_sum(static_cast<std::int64_t>(a.rows()), n,
                       [p, n](std::int64_t i, std::int64_t j) {
                           const double v = p[i * n + j];
                           return v * v;
                       });
}

double frobenius_diff_sq(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_shape(a, b, "frobenius_diff_sq");
    const double* pa = a.data();
    const double* pb = b.data();
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    return rowwise_sum(static_cast<std::int64_t>(a.rows()), n,
                       [pa, pb, n](std::int64_t i, std::int64_t j) {
                           const double d = pa[i * n + j] - pb[i * n + j];
                           return d * d;
                       });
}

double frobenius_inner(const NonnegMatrix& a, const NonnegMatrix& b) {
    require_same_shape(a, b, "frobenius_inner");
    const double* pa = a.data();
    const double* pb = b.data();
    const std::int64_t n = static_cast<std::int64_t>(a.cols());
    return rowwise_sum(static_cast<std::int64_t>(a.rows()), n,
                       [pa, pb, n](std::int64_t i, std::int64_t j) {
                           return pa[i * n + j] * pb[i * n + j];
                       });
}

} // namespace gnmf
