#include "gnmf/reference.hpp"

namespace gnmf::ref {

NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("ref::matmul: inner dimensions disagree, " + a.shape_str() +
                         " times " + b.shape_str());
    }
    NonnegMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
            out.set(i, j, acc);
        }
    }
    return out;
}

NonnegMatrix transpose(const NonnegMatrix& a) {
    NonnegMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(j, i, a(i, j));
    return out;
}

NonnegMatrix hadamard(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("ref::hadamard: shape mismatch " + a.shape_str() + " vs " +
                         b.shape_str());
    }
    NonnegMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set(i, j, a(i, j) * b(i, j));
    return out;
}

NonnegMatrix safe_divide(const NonnegMatrix& num, const NonnegMatrix& den, double eps) {
    if (!num.same_shape(den)) {
        throw ShapeError("ref::safe_divide: shape mismatch " + num.shape_str() + " vs " +
                         den.shape_str());
    }
    NonnegMatrix out(num.rows(), num.cols());
    for (std::size_t i = 0; i < num.rows(); ++i)
        for (std::size_t j = 0; j < num.cols(); ++j)
            out.set(i, j, num(i, j) / (den(i, j) + eps));
    return out;
}

double frobenius_norm_sq(const NonnegMatrix& a) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * a(i, j);
    return acc;
}

double frobenius_diff_sq(const NonnegMatrix& a, const NonnegMatrix& b) {
    if (!a.same_shape(b)) {
        throw ShapeError("ref::frobenius_diff_sq: shape mismatch " + a.shape_str() +
                         " vs " + b.shape_str());
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - b(i, j);
            acc += d * d;
        }
    return acc;
}

} // namespace gnmf::ref
