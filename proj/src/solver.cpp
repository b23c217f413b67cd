#include "gnmf/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

namespace gnmf {

namespace {

// 53-bit uniform in [0, 1); avoids std::uniform_real_distribution, whose
// output sequence is not pinned down by the standard.
double next_uniform(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

NonnegMatrix random_factor(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::vector<double> values(rows * cols);
    for (double& v : values) v = 0.01 + next_uniform(rng);
    return NonnegMatrix(rows, cols, std::move(values));
}

void validate_config(const SolverConfig& config) {
    if (config.rank == 0) throw ConfigError("rank must be at least 1");
    if (config.max_iters == 0) throw ConfigError("max_iters must be at least 1");
    if (!(config.eps > 0.0)) throw ConfigError("eps must be positive");
    if (config.lambda < 0.0) throw ConfigError("lambda must be nonnegative");
    if (config.rel_tol < 0.0) throw ConfigError("rel_tol must be nonnegative");
}

// State hoisted across sweeps: all three depend only on the current A, and
// the objective evaluation needs them right after the A update while the
// next sweep's S update needs them again unchanged.
//
// A^T X is computed as (X^T A)^T so the zero-skipping matmul sees the sparse
// term-document matrix as its left operand. The value is bitwise equal to
// matmul(A^T, X): both accumulate each output entry over the shared dimension
// in ascending order, and skipped terms are exact zeros.
struct HoistedState {
    const NonnegMatrix& Xt;  // n x m, computed once per solve
    NonnegMatrix At;         // k x m
    NonnegMatrix AtX;        // k x n
    NonnegMatrix AtA;        // k x k

    HoistedState(const NonnegMatrix& A, const NonnegMatrix& Xt_in)
        : Xt(Xt_in),
          At(transpose(A)),
          AtX(transpose(matmul(Xt, A))),
          AtA(matmul(At, A)) {}

    void refresh(const NonnegMatrix& A) {
        At = transpose(A);
        AtX = transpose(matmul(Xt, A));
        AtA = matmul(At, A);
    }
};

// One multiplicative-update sweep (S, then B, then A with the fresh S', B'),
// refreshing `state` afterwards. Returns S'S'^T for objective reuse.
NonnegMatrix sweep_core(const NonnegMatrix& X, const NonnegMatrix* Y, Factors& f,
                        double lambda, double eps, HoistedState& state) {
    f.S = hadamard(f.S, safe_divide(state.AtX, matmul(state.AtA, f.S), eps));

    if (Y != nullptr) {
        f.B = hadamard(*f.B, safe_divide(matmul(state.At, *Y), matmul(state.AtA, *f.B), eps));
    }

    const NonnegMatrix St = transpose(f.S);
    const NonnegMatrix SSt = matmul(f.S, St);
    NonnegMatrix num = matmul(X, St);
    NonnegMatrix den = matmul(f.A, SSt);
    if (Y != nullptr && lambda > 0.0) {
        const NonnegMatrix Bt = transpose(*f.B);
        num = add_scaled(num, matmul(*Y, Bt), lambda);
        den = add_scaled(den, matmul(f.A, matmul(*f.B, Bt)), lambda);
    }
    f.A = hadamard(f.A, safe_divide(num, den, eps));

    state.refresh(f.A);
    return SSt;
}

// ||X - AS||_F^2 expanded as ||X||^2 - 2<A^T X, S> + <A^T A, S S^T>; avoids
// forming the m x n product AS since A^T X is needed next sweep anyway.
// Clamped at zero: the expansion can go fractionally negative near an exact
// fit.
double reconstruction_term(double norm_x_sq, const HoistedState& state,
                           const NonnegMatrix& S, const NonnegMatrix& SSt) {
    const double v = norm_x_sq - 2.0 * frobenius_inner(state.AtX, S) +
                     frobenius_inner(state.AtA, SSt);
    return std::max(v, 0.0);
}

double supervision_term(double norm_y_sq, const NonnegMatrix& Y,
                        const HoistedState& state, const NonnegMatrix& B) {
    const NonnegMatrix AtY = matmul(state.At, Y);
    const NonnegMatrix BBt = matmul(B, transpose(B));
    const double v = norm_y_sq - 2.0 * frobenius_inner(AtY, B) +
                     frobenius_inner(state.AtA, BBt);
    return std::max(v, 0.0);
}

FactorizationResult run_mu(const NonnegMatrix& X, const NonnegMatrix* Y,
                           const SolverConfig& config) {
    validate_config(config);

    Factors f = initialize(X.rows(), X.cols(),
                           Y ? std::optional<std::size_t>(Y->cols()) : std::nullopt, config);

    const double norm_x_sq = frobenius_norm_sq(X);
    const double norm_y_sq = Y ? frobenius_norm_sq(*Y) : 0.0;

    const NonnegMatrix Xt = transpose(X);
    HoistedState state(f.A, Xt);
    std::vector<double> history;
    history.reserve(config.max_iters);

    for (std::size_t iter = 0; iter < config.max_iters; ++iter) {
        const NonnegMatrix SSt = sweep_core(X, Y, f, config.lambda, config.eps, state);

        double obj = reconstruction_term(norm_x_sq, state, f.S, SSt);
        if (Y != nullptr && config.lambda > 0.0) {
            obj += config.lambda * supervision_term(norm_y_sq, *Y, state, *f.B);
        }
        history.push_back(obj);

        if (iter > 0) {
            const double prev = history[iter - 1];
            if (std::abs(prev - obj) / std::max(prev, 1e-30) < config.rel_tol) break;
        }
    }

    FactorizationResult result{std::move(f.A), std::move(f.S), std::move(f.B),
                               std::move(history), 0};
    result.iterations_run = result.objective_history.size();
    return result;
}

} // namespace

Factors initialize(std::size_t m, std::size_t n, std::optional<std::size_t> c,
                   const SolverConfig& config) {
    validate_config(config);
    if (m == 0 || n == 0) throw ShapeError("initialize: dimensions must be positive");
    if (c && *c == 0) throw ShapeError("initialize: c must be positive when present");

    std::mt19937_64 rng(config.rng_seed);
    // Draw order A, S, B: runs that differ only in the presence of a seed
    // matrix start from identical A and S.
    NonnegMatrix A = random_factor(m, config.rank, rng);
    NonnegMatrix S = random_factor(config.rank, n, rng);
    std::optional<NonnegMatrix> B;
    if (c) B = random_factor(config.rank, *c, rng);
    return Factors{std::move(A), std::move(S), std::move(B)};
}

Factors update_sweep(const NonnegMatrix& X, const NonnegMatrix* Y,
                     const Factors& factors, double lambda, double eps) {
    if (Y != nullptr && !factors.B.has_value()) {
        throw ConfigError("update_sweep: Y given but factors carry no B");
    }
    if (Y != nullptr && Y->rows() != X.rows()) {
        throw ShapeError("update_sweep: X has " + X.shape_str() + " but Y has " +
                         Y->shape_str() + "; row counts must match");
    }
    Factors f = factors;
    const NonnegMatrix Xt = transpose(X);
    HoistedState state(f.A, Xt);
    sweep_core(X, Y, f, lambda, eps, state);
    return f;
}

double objective_value(const NonnegMatrix& X, const NonnegMatrix* Y,
                       const Factors& factors, double lambda) {
    double obj = frobenius_diff_sq(X, matmul(factors.A, factors.S));
    if (Y != nullptr && factors.B.has_value()) {
        obj += lambda * frobenius_diff_sq(*Y, matmul(factors.A, *factors.B));
    }
    return obj;
}

FactorizationResult nmf(const NonnegMatrix& X, const SolverConfig& config) {
    return run_mu(X, nullptr, config);
}

FactorizationResult guided_nmf(const NonnegMatrix& X, const NonnegMatrix& Y,
                               const SolverConfig& config) {
    if (Y.rows() != X.rows()) {
        throw ShapeError("guided_nmf: X is " + X.shape_str() + " but Y is " +
                         Y.shape_str() + "; seed topics live over the same vocabulary");
    }
    if (Y.cols() > config.rank) {
        throw ConfigError("guided_nmf: " + std::to_string(Y.cols()) +
                          " seed topics exceed rank " + std::to_string(config.rank) +
                          "; each seed topic needs a distinct learned topic (raise rank)");
    }
    return run_mu(X, &Y, config);
}

FactorizationResult ssnmf(const NonnegMatrix& X, const NonnegMatrix& Y_labels,
                          const SolverConfig& config) {
    if (Y_labels.cols() != X.cols()) {
        throw ShapeError("ssnmf: X is " + X.shape_str() + " but Y_labels is " +
                         Y_labels.shape_str() + "; column counts must match");
    }
    FactorizationResult t = guided_nmf(transpose(X), transpose(Y_labels), config);
    // Transposing the factorization X^T ~ A_t S_t back gives X ~ S_t^T A_t^T,
    // so the roles of A and S exchange and Y_labels ~ B^T S holds.
    FactorizationResult result{transpose(t.S), transpose(t.A), std::nullopt,
                               std::move(t.objective_history), t.iterations_run};
    if (t.B) result.B = transpose(*t.B);
    return result;
}

} // namespace gnmf
