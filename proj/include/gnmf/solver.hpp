#ifndef GNMF_SOLVER_HPP
#define GNMF_SOLVER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "gnmf/matrix.hpp"

namespace gnmf {

struct SolverConfig {
    std::size_t rank = 4;       // k, number of learned topics; k >= 1
    double lambda = 1.0;        // supervision weight; 0 reduces guided_nmf to nmf
    std::size_t max_iters = 1000;
    double rel_tol = 1e-6;      // relative objective-change stopping threshold
    std::uint64_t rng_seed = 1;
    double eps = 1e-10;         // division guard, added to update denominators
};

struct Factors {
    NonnegMatrix A;
    NonnegMatrix S;
    std::optional<NonnegMatrix> B;
};

struct FactorizationResult {
    NonnegMatrix A;                 // m x k dictionary/topic matrix
    NonnegMatrix S;                 // k x n representation matrix
    std::optional<NonnegMatrix> B;  // k x c for guided_nmf, c x k for ssnmf, absent for nmf
    std::vector<double> objective_history;  // one entry per completed sweep
    std::size_t iterations_run = 0;
};

// Deterministic factor initialization: entries i.i.d. uniform on (0.01, 1.01)
// from a stream seeded by config.rng_seed, drawn in the order A, S, then B.
// The draw order means runs with and without a supervision matrix see
// identical A and S. B is produced when c is present.
Factors initialize(std::size_t m, std::size_t n, std::optional<std::size_t> c,
                   const SolverConfig& config);

// One full multiplicative-update sweep at supervision weight lambda:
//
//   S' = S (.) (A^T X)             (/) (A^T A S  + eps)
//   B' = B (.) (A^T Y)             (/) (A^T A B  + eps)
//   A' = A (.) (X S'^T + l Y B'^T) (/) (A S' S'^T + l A B' B'^T + eps)
//
// where (.) and (/) are entrywise and the B/lambda terms vanish when Y is
// null or lambda is 0. Updates never increase the objective
// ||X - AS||_F^2 + lambda ||Y - AB||_F^2 and preserve zero entries.
Factors update_sweep(const NonnegMatrix& X, const NonnegMatrix* Y,
                     const Factors& factors, double lambda, double eps);

// ||X - AS||_F^2 + lambda ||Y - AB||_F^2 (supervision term only when Y and B
// are both present).
double objective_value(const NonnegMatrix& X, const NonnegMatrix* Y,
                       const Factors& factors, double lambda);

// Unsupervised NMF: min ||X - AS||_F^2 over A, S >= 0.
// Stops when the relative objective change drops below config.rel_tol or
// after config.max_iters sweeps.
FactorizationResult nmf(const NonnegMatrix& X, const SolverConfig& config);

// Seed-guided factorization: min ||X - AS||_F^2 + lambda ||Y - AB||_F^2 over
// A, S, B >= 0, where Y (m x c) stacks seed-topic columns over the vocabulary.
// Requires c <= k so each seed topic can claim a distinct learned topic.
// With lambda = 0 the A, S iterates are bitwise identical to nmf() under the
// same rng_seed.
FactorizationResult guided_nmf(const NonnegMatrix& X, const NonnegMatrix& Y,
                               const SolverConfig& config);

// Label-supervised factorization of X (m x n) with labels Y_labels (c x n)
// over data points: min ||X - AS||_F^2 + lambda ||Y_labels - BS||_F^2.
// Realized by running guided_nmf on the transposed system and exchanging the
// factor roles, so the returned result satisfies X ~ AS (A m x k, S k x n)
// and Y_labels ~ BS (B c x k).
FactorizationResult ssnmf(const NonnegMatrix& X, const NonnegMatrix& Y_labels,
                          const SolverConfig& config);

} // namespace gnmf

#endif
