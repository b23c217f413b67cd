#ifndef GNMF_MATRIX_HPP
#define GNMF_MATRIX_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "gnmf/errors.hpp"

namespace gnmf {

/// Dense row-major matrix with entrywise nonnegative entries.
///
/// Every construction path validates the entries, so a NonnegMatrix value can
/// be assumed nonnegative everywhere. Instances are immutable as seen by the
/// kernel functions below (all take const refs and return fresh values), which
/// makes sharing across threads safe.
class NonnegMatrix {
public:
    // Zero-filled rows x cols matrix. rows and cols must be >= 1.
    NonnegMatrix(std::size_t rows, std::size_t cols);

    // Takes ownership of `values` (row-major, length rows*cols).
    // Throws ValueError on a negative or non-finite entry.
    NonnegMatrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    // Convenience for literals in tests and small fixtures.
    static NonnegMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    // Validated single-entry write; v must be finite and >= 0.
    void set(std::size_t i, std::size_t j, double v);

    const double* data() const { return data_.data(); }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const NonnegMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    std::string shape_str() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;
};

// ---- kernels -------------------------------------------------------------
//
// All kernels are OpenMP-parallel over output rows where profitable; each
// output entry is accumulated by exactly one thread in a fixed order, so
// results are bitwise identical regardless of thread count. Serial reference
// versions used as test oracles live in gnmf::ref (reference.hpp).

// Standard matrix product. Throws ShapeError unless a.cols == b.rows.
NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b);

NonnegMatrix transpose(const NonnegMatrix& a);

// Entrywise product. Shapes must match.
NonnegMatrix hadamard(const NonnegMatrix& a, const NonnegMatrix& b);

// Entrywise num[i,j] / (den[i,j] + eps). Shapes must match, eps > 0.
NonnegMatrix safe_divide(const NonnegMatrix& num, const NonnegMatrix& den, double eps);

// a + s * b with s >= 0. Shapes must match.
NonnegMatrix add_scaled(const NonnegMatrix& a, const NonnegMatrix& b, double s);

// Sum of squared entries.
double frobenius_norm_sq(const NonnegMatrix& a);

// Sum of squared entrywise differences, ||a - b||_F^2. Shapes must match.
double frobenius_diff_sq(const NonnegMatrix& a, const NonnegMatrix& b);

// Sum of entrywise products <a, b>. Shapes must match.
double frobenius_inner(const NonnegMatrix& a, const NonnegMatrix& b);

} // namespace gnmf

#endif
