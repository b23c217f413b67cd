#ifndef GNMF_REFERENCE_HPP
#define GNMF_REFERENCE_HPP

#include "gnmf/matrix.hpp"

// Serial reference kernels: naive loop implementations kept as independent
// oracles for the parallel kernels in matrix.hpp. Used by the test suites and
// the kernel benchmark only; nothing in the library depends on them.
namespace gnmf::ref {

NonnegMatrix matmul(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix transpose(const NonnegMatrix& a);
NonnegMatrix hadamard(const NonnegMatrix& a, const NonnegMatrix& b);
NonnegMatrix safe_divide(const NonnegMatrix& num, const NonnegMatrix& den, double eps);
double frobenius_norm_sq(const NonnegMatrix& a);
double frobenius_diff_sq(const NonnegMatrix& a, const NonnegMatrix& b);

} // namespace gnmf::ref

#endif
