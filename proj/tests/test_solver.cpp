#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "gnmf/matrix.hpp"
#include "gnmf/reference.hpp"
#include "gnmf/solver.hpp"

using gnmf::Factors;
using gnmf::NonnegMatrix;
using gnmf::SolverConfig;

namespace {

NonnegMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng,
                           double zero_prob = 0.0) {
    auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> values(rows * cols);
    for (double& v : values) {
        v = (zero_prob > 0.0 && uniform() < zero_prob) ? 0.0 : uniform();
    }
    return NonnegMatrix(rows, cols, std::move(values));
}

double max_rel_diff(const NonnegMatrix& a, const NonnegMatrix& b) {
    REQUIRE(a.same_shape(b));
    double worst = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double scale = std::max({std::abs(a(i, j)), std::abs(b(i, j)), 1.0});
            worst = std::max(worst, std::abs(a(i, j) - b(i, j)) / scale);
        }
    }
    return worst;
}

bool bitwise_equal(const NonnegMatrix& a, const NonnegMatrix& b) {
    return a.same_shape(b) && a.values() == b.values();
}

NonnegMatrix oracle_axpy(const NonnegMatrix& a, const NonnegMatrix& b, double s) {
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a.values()[i] + s * b.values()[i];
    return NonnegMatrix(a.rows(), a.cols(), std::move(out));
}

// Straight-line sweep built from the serial reference kernels, following the
// update rules as documented: S, then B, then A from the fresh S and B, with
// the lambda terms dropped exactly when lambda is zero.
Factors sweep_oracle(const NonnegMatrix& X, const NonnegMatrix* Y, const Factors& f,
                     double lambda, double eps) {
    namespace ref = gnmf::ref;
    const NonnegMatrix At = ref::transpose(f.A);
    const NonnegMatrix AtX = ref::matmul(At, X);
    const NonnegMatrix AtA = ref::matmul(At, f.A);

    NonnegMatrix S = ref::hadamard(f.S, ref::safe_divide(AtX, ref::matmul(AtA, f.S), eps));

    std::optional<NonnegMatrix> B = f.B;
    if (Y != nullptr) {
        B = ref::hadamard(*f.B,
                          ref::safe_divide(ref::matmul(At, *Y), ref::matmul(AtA, *f.B), eps));
    }

    const NonnegMatrix St = ref::transpose(S);
    NonnegMatrix num = ref::matmul(X, St);
    NonnegMatrix den = ref::matmul(f.A, ref::matmul(S, St));
    if (Y != nullptr && lambda > 0.0) {
        const NonnegMatrix Bt = ref::transpose(*B);
        num = oracle_axpy(num, ref::matmul(*Y, Bt), lambda);
        den = oracle_axpy(den, ref::matmul(f.A, ref::matmul(*B, Bt)), lambda);
    }
    NonnegMatrix A = ref::hadamard(f.A, ref::safe_divide(num, den, eps));

    return Factors{std::move(A), std::move(S), std::move(B)};
}

double column_cosine(const NonnegMatrix& a, std::size_t col, const NonnegMatrix& y) {
    double dot = 0.0, na = 0.0, ny = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        dot += a(i, col) * y(i, 0);
        na += a(i, col) * a(i, col);
        ny += y(i, 0) * y(i, 0);
    }
    return dot / (std::sqrt(na) * std::sqrt(ny) + 1e-300);
}

// Well-separated rank-2 planted instance: X = A* S*, Y the first column of
// A*. Every initialization tested recovers the planted topic, so tests can
// use a single seed without flakiness.
NonnegMatrix planted_a() {
    return NonnegMatrix::from_rows({{0.90, 0.05},
                                    {0.80, 0.10},
                                    {0.70, 0.15},
                                    {0.10, 0.85},
                                    {0.15, 0.75},
                                    {0.05, 0.90}});
}

NonnegMatrix planted_s() {
    return NonnegMatrix::from_rows({{1.00, 0.20, 0.80, 0.30, 0.90, 0.10, 0.60, 0.40},
                                    {0.10, 0.90, 0.20, 0.80, 0.15, 1.00, 0.30, 0.70}});
}

} // namespace

TEST_CASE("config validation rejects degenerate settings") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    SolverConfig bad;

    bad.rank = 0;
    CHECK_THROWS_AS(gnmf::nmf(X, bad), gnmf::ConfigError);
    bad = SolverConfig{};
    bad.max_iters = 0;
    CHECK_THROWS_AS(gnmf::nmf(X, bad), gnmf::ConfigError);
    bad = SolverConfig{};
    bad.eps = 0.0;
    CHECK_THROWS_AS(gnmf::nmf(X, bad), gnmf::ConfigError);
    bad = SolverConfig{};
    bad.lambda = -0.5;
    CHECK_THROWS_AS(gnmf::nmf(X, bad), gnmf::ConfigError);
    bad = SolverConfig{};
    bad.rel_tol = -1e-9;
    CHECK_THROWS_AS(gnmf::nmf(X, bad), gnmf::ConfigError);
}

TEST_CASE("initialize is deterministic with documented range and draw order") {
    SolverConfig config;
    config.rank = 3;
    config.rng_seed = 42;

    const Factors f1 = gnmf::initialize(5, 7, 2, config);
    const Factors f2 = gnmf::initialize(5, 7, 2, config);
    CHECK(bitwise_equal(f1.A, f2.A));
    CHECK(bitwise_equal(f1.S, f2.S));
    REQUIRE(f1.B.has_value());
    REQUIRE(f2.B.has_value());
    CHECK(bitwise_equal(*f1.B, *f2.B));

    CHECK(f1.A.rows() == 5);
    CHECK(f1.A.cols() == 3);
    CHECK(f1.S.rows() == 3);
    CHECK(f1.S.cols() == 7);
    CHECK(f1.B->rows() == 3);
    CHECK(f1.B->cols() == 2);

    for (double v : f1.A.values()) {
        CHECK(v > 0.01);
        CHECK(v < 1.01);
    }
    for (double v : f1.S.values()) {
        CHECK(v > 0.01);
        CHECK(v < 1.01);
    }

    // Supervised and unsupervised runs share the A, S draws.
    const Factors plain = gnmf::initialize(5, 7, std::nullopt, config);
    CHECK(!plain.B.has_value());
    CHECK(bitwise_equal(plain.A, f1.A));
    CHECK(bitwise_equal(plain.S, f1.S));

    SolverConfig other = config;
    other.rng_seed = 43;
    const Factors g = gnmf::initialize(5, 7, 2, other);
    CHECK(!bitwise_equal(g.A, f1.A));

    CHECK_THROWS_AS(gnmf::initialize(0, 7, std::nullopt, config), gnmf::ShapeError);
    CHECK_THROWS_AS(gnmf::initialize(5, 0, std::nullopt, config), gnmf::ShapeError);
    CHECK_THROWS_AS(gnmf::initialize(5, 7, 0, config), gnmf::ShapeError);
}

TEST_CASE("update_sweep matches the reference-kernel oracle") {
    std::mt19937_64 rng(2024);
    const double lambdas[] = {0.0, 0.5, 5.0};
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = lambdas[trial % 3];
        const bool with_y = trial % 2 == 0;
        const NonnegMatrix X = random_matrix(5, 7, rng, trial % 5 == 0 ? 0.4 : 0.0);
        SolverConfig config;
        config.rank = 3;
        config.rng_seed = 1000 + static_cast<std::uint64_t>(trial);

        if (with_y) {
            const NonnegMatrix Y = random_matrix(5, 2, rng);
            const Factors f = gnmf::initialize(5, 7, 2, config);
            const Factors got = gnmf::update_sweep(X, &Y, f, lambda, config.eps);
            const Factors want = sweep_oracle(X, &Y, f, lambda, config.eps);
            CHECK(max_rel_diff(got.A, want.A) <= 1e-13);
            CHECK(max_rel_diff(got.S, want.S) <= 1e-13);
            REQUIRE(got.B.has_value());
            CHECK(max_rel_diff(*got.B, *want.B) <= 1e-13);
        } else {
            const Factors f = gnmf::initialize(5, 7, std::nullopt, config);
            const Factors got = gnmf::update_sweep(X, nullptr, f, lambda, config.eps);
            const Factors want = sweep_oracle(X, nullptr, f, lambda, config.eps);
            CHECK(max_rel_diff(got.A, want.A) <= 1e-13);
            CHECK(max_rel_diff(got.S, want.S) <= 1e-13);
            CHECK(!got.B.has_value());
        }
    }
}

TEST_CASE("update_sweep rejects mismatched inputs") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const NonnegMatrix Y = NonnegMatrix::from_rows({{1.0}, {0.0}});
    const NonnegMatrix Y_tall = NonnegMatrix::from_rows({{1.0}, {0.0}, {0.0}});
    SolverConfig config;
    config.rank = 2;

    const Factors no_b = gnmf::initialize(2, 2, std::nullopt, config);
    CHECK_THROWS_AS(gnmf::update_sweep(X, &Y, no_b, 1.0, 1e-10), gnmf::ConfigError);

    const Factors with_b = gnmf::initialize(2, 2, 1, config);
    CHECK_THROWS_AS(gnmf::update_sweep(X, &Y_tall, with_b, 1.0, 1e-10), gnmf::ShapeError);
    CHECK_NOTHROW(gnmf::update_sweep(X, &Y, with_b, 1.0, 1e-10));
}

TEST_CASE("update_sweep preserves zero entries exactly") {
    std::mt19937_64 rng(77);
    const NonnegMatrix X = random_matrix(6, 8, rng);
    const NonnegMatrix Y = random_matrix(6, 2, rng);
    SolverConfig config;
    config.rank = 3;

    Factors f = gnmf::initialize(6, 8, 2, config);
    // Plant zeros in every factor, then sweep several times.
    NonnegMatrix A = f.A;
    A.set(0, 1, 0.0);
    A.set(5, 2, 0.0);
    NonnegMatrix S = f.S;
    S.set(1, 3, 0.0);
    S.set(2, 7, 0.0);
    NonnegMatrix B = *f.B;
    B.set(0, 0, 0.0);
    B.set(2, 1, 0.0);
    Factors cur{A, S, B};

    for (int sweep = 0; sweep < 5; ++sweep) {
        cur = gnmf::update_sweep(X, &Y, cur, 0.5, 1e-10);
        CHECK(cur.A(0, 1) == 0.0);
        CHECK(cur.A(5, 2) == 0.0);
        CHECK(cur.S(1, 3) == 0.0);
        CHECK(cur.S(2, 7) == 0.0);
        CHECK((*cur.B)(0, 0) == 0.0);
        CHECK((*cur.B)(2, 1) == 0.0);
    }
}

TEST_CASE("update_sweep never increases the objective") {
    std::mt19937_64 rng(31);
    const double lambdas[] = {0.0, 0.5, 5.0};
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = lambdas[trial % 3];
        const NonnegMatrix X = random_matrix(5, 7, rng);
        const NonnegMatrix Y = random_matrix(5, 2, rng);
        SolverConfig config;
        config.rank = 3;
        config.rng_seed = 500 + static_cast<std::uint64_t>(trial);

        Factors f = gnmf::initialize(5, 7, 2, config);
        double prev = gnmf::objective_value(X, &Y, f, lambda);
        for (int sweep = 0; sweep < 10; ++sweep) {
            f = gnmf::update_sweep(X, &Y, f, lambda, config.eps);
            const double cur = gnmf::objective_value(X, &Y, f, lambda);
            CHECK(cur <= prev + 1e-9 * std::max(1.0, prev));
            prev = cur;
        }
    }
}

TEST_CASE("update_sweep leaves an exact factorization nearly fixed") {
    const NonnegMatrix A = planted_a();
    const NonnegMatrix S = planted_s();
    const NonnegMatrix X = gnmf::matmul(A, S);
    const NonnegMatrix B = NonnegMatrix::from_rows({{1.0, 0.2}, {0.1, 0.9}});
    const NonnegMatrix Y = gnmf::matmul(A, B);

    const Factors fixed{A, S, B};
    const Factors next = gnmf::update_sweep(X, &Y, fixed, 1.0, 1e-30);
    CHECK(max_rel_diff(next.A, A) <= 1e-12);
    CHECK(max_rel_diff(next.S, S) <= 1e-12);
    CHECK(max_rel_diff(*next.B, B) <= 1e-12);
}

TEST_CASE("hoisted A^T X equals the direct product on sparse input") {
    std::mt19937_64 rng(404);
    const NonnegMatrix X = random_matrix(40, 30, rng, 0.9);
    const NonnegMatrix A = random_matrix(40, 5, rng);
    const NonnegMatrix direct = gnmf::matmul(gnmf::transpose(A), X);
    const NonnegMatrix flipped = gnmf::transpose(gnmf::matmul(gnmf::transpose(X), A));
    CHECK(bitwise_equal(direct, flipped));
}

TEST_CASE("objective_value agrees with the recorded history") {
    std::mt19937_64 rng(88);
    const NonnegMatrix X = random_matrix(6, 9, rng);
    const NonnegMatrix Y = random_matrix(6, 2, rng);
    SolverConfig config;
    config.rank = 3;
    config.max_iters = 25;
    config.rel_tol = 0.0;

    const gnmf::FactorizationResult r = gnmf::guided_nmf(X, Y, config);
    REQUIRE(r.objective_history.size() == 25);
    CHECK(r.iterations_run == 25);
    const Factors final{r.A, r.S, r.B};
    const double direct = gnmf::objective_value(X, &Y, final, config.lambda);
    const double recorded = r.objective_history.back();
    CHECK(std::abs(direct - recorded) <= 1e-9 * std::max(1.0, std::abs(direct)));

    const gnmf::FactorizationResult u = gnmf::nmf(X, config);
    const Factors uf{u.A, u.S, u.B};
    const double udirect = gnmf::objective_value(X, nullptr, uf, 0.0);
    CHECK(std::abs(udirect - u.objective_history.back()) <=
          1e-9 * std::max(1.0, std::abs(udirect)));
}

TEST_CASE("objective history is monotone nonincreasing") {
    std::mt19937_64 rng(99);
    const NonnegMatrix X = random_matrix(8, 10, rng);
    SolverConfig config;
    config.rank = 3;
    config.max_iters = 200;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    for (std::size_t i = 1; i < r.objective_history.size(); ++i) {
        const double prev = r.objective_history[i - 1];
        CHECK(r.objective_history[i] <= prev + 1e-9 * std::max(1.0, prev));
    }
}

TEST_CASE("nmf recovers a rank-1 outer product") {
    const NonnegMatrix u = NonnegMatrix::from_rows({{0.3}, {0.8}, {0.5}});
    const NonnegMatrix w = NonnegMatrix::from_rows({{0.7, 0.2, 0.9, 0.4}});
    const NonnegMatrix X = gnmf::matmul(u, w);

    SolverConfig config;
    config.rank = 1;
    config.max_iters = 500;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    const double rel = std::sqrt(gnmf::frobenius_diff_sq(X, gnmf::matmul(r.A, r.S)) /
                                 gnmf::frobenius_norm_sq(X));
    CHECK(rel <= 1e-6);
    CHECK(!r.B.has_value());
}

TEST_CASE("nmf on the zero matrix gives an all-zero history") {
    const NonnegMatrix X(4, 5);
    SolverConfig config;
    config.rank = 2;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    REQUIRE(!r.objective_history.empty());
    for (double h : r.objective_history) CHECK(h == 0.0);
    for (double v : r.S.values()) CHECK(v == 0.0);
}

TEST_CASE("nmf fits the 2x2 identity") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{1.0, 0.0}, {0.0, 1.0}});
    SolverConfig config;
    config.rank = 2;
    config.max_iters = 1000;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    const double rel = std::sqrt(gnmf::frobenius_diff_sq(X, gnmf::matmul(r.A, r.S)) /
                                 gnmf::frobenius_norm_sq(X));
    CHECK(rel <= 1e-3);
}

TEST_CASE("nmf fits a structured 20x30 rank-3 instance") {
    // Block-dominant factors with a deterministic ripple, well conditioned on
    // purpose so a single solver seed suffices.
    std::vector<std::vector<double>> arows(20, std::vector<double>(3));
    for (std::size_t i = 0; i < 20; ++i) {
        const std::size_t b = std::min<std::size_t>(i / 7, 2);
        for (std::size_t j = 0; j < 3; ++j) {
            arows[i][j] = (j == b ? 0.85 : 0.08) +
                          0.02 * static_cast<double>((i * 3 + j) % 7) / 7.0;
        }
    }
    std::vector<std::vector<double>> srows(3, std::vector<double>(30));
    for (std::size_t j = 0; j < 30; ++j) {
        const std::size_t c = j % 3;
        for (std::size_t r = 0; r < 3; ++r) {
            srows[r][j] = (r == c ? 0.90 : 0.10) +
                          0.05 * static_cast<double>((j * 2 + r) % 5) / 5.0;
        }
    }
    const NonnegMatrix X =
        gnmf::matmul(NonnegMatrix::from_rows(arows), NonnegMatrix::from_rows(srows));

    SolverConfig config;
    config.rank = 3;
    config.max_iters = 2000;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    const double rel = std::sqrt(gnmf::frobenius_diff_sq(X, gnmf::matmul(r.A, r.S)) /
                                 gnmf::frobenius_norm_sq(X));
    CHECK(rel <= 1e-3);
}

TEST_CASE("guided_nmf with lambda 0 reduces bitwise to nmf") {
    std::mt19937_64 rng(123);
    const NonnegMatrix X = random_matrix(10, 12, rng);
    const NonnegMatrix Y = random_matrix(10, 2, rng);
    SolverConfig config;
    config.rank = 4;
    config.lambda = 0.0;
    config.max_iters = 50;
    config.rel_tol = 0.0;

    const gnmf::FactorizationResult g = gnmf::guided_nmf(X, Y, config);
    const gnmf::FactorizationResult p = gnmf::nmf(X, config);
    CHECK(bitwise_equal(g.A, p.A));
    CHECK(bitwise_equal(g.S, p.S));
    CHECK(g.objective_history == p.objective_history);
    CHECK(g.iterations_run == p.iterations_run);
    CHECK(g.B.has_value());
    CHECK(!p.B.has_value());
}

TEST_CASE("guided_nmf recovers a planted guided topic") {
    const NonnegMatrix A_star = planted_a();
    const NonnegMatrix X = gnmf::matmul(A_star, planted_s());
    std::vector<double> y(A_star.rows());
    for (std::size_t i = 0; i < A_star.rows(); ++i) y[i] = A_star(i, 0);
    const NonnegMatrix Y(A_star.rows(), 1, std::move(y));

    SolverConfig config;
    config.rank = 2;
    config.lambda = 1.0;
    config.max_iters = 2000;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::guided_nmf(X, Y, config);
    REQUIRE(r.B.has_value());

    std::size_t topic = 0;
    for (std::size_t k = 1; k < r.B->rows(); ++k) {
        if ((*r.B)(k, 0) > (*r.B)(topic, 0)) topic = k;
    }
    CHECK(column_cosine(r.A, topic, Y) >= 0.99);
}

TEST_CASE("guided_nmf drives B to zero on a zero seed matrix") {
    std::mt19937_64 rng(7);
    const NonnegMatrix X = random_matrix(6, 10, rng);
    const NonnegMatrix Y(6, 1);
    SolverConfig config;
    config.rank = 3;
    config.lambda = 10.0;
    config.max_iters = 100;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::guided_nmf(X, Y, config);
    REQUIRE(r.B.has_value());
    for (double v : r.B->values()) CHECK(v == 0.0);
    CHECK(gnmf::frobenius_diff_sq(Y, gnmf::matmul(r.A, *r.B)) <= 1e-12);
}

TEST_CASE("guided_nmf rejects mismatched and oversized seed matrices") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const NonnegMatrix Y_rows = NonnegMatrix::from_rows({{1.0}, {0.0}, {0.0}});
    SolverConfig config;
    config.rank = 2;
    CHECK_THROWS_AS(gnmf::guided_nmf(X, Y_rows, config), gnmf::ShapeError);

    const NonnegMatrix Y_wide = NonnegMatrix::from_rows({{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}});
    CHECK_THROWS_WITH_AS(gnmf::guided_nmf(X, Y_wide, config),
                         "guided_nmf: 3 seed topics exceed rank 2; each seed topic needs "
                         "a distinct learned topic (raise rank)",
                         gnmf::ConfigError);
}

TEST_CASE("ssnmf is the transposed guided problem") {
    std::mt19937_64 rng(55);
    const NonnegMatrix X = random_matrix(7, 12, rng);
    const NonnegMatrix Y = random_matrix(3, 12, rng);
    SolverConfig config;
    config.rank = 4;
    config.lambda = 2.0;
    config.max_iters = 40;
    config.rel_tol = 0.0;

    const gnmf::FactorizationResult s = gnmf::ssnmf(X, Y, config);
    const gnmf::FactorizationResult g =
        gnmf::guided_nmf(gnmf::transpose(X), gnmf::transpose(Y), config);
    CHECK(bitwise_equal(s.A, gnmf::transpose(g.S)));
    CHECK(bitwise_equal(s.S, gnmf::transpose(g.A)));
    REQUIRE(s.B.has_value());
    CHECK(bitwise_equal(*s.B, gnmf::transpose(*g.B)));
    CHECK(s.objective_history == g.objective_history);

    CHECK(s.A.rows() == 7);
    CHECK(s.A.cols() == 4);
    CHECK(s.S.rows() == 4);
    CHECK(s.S.cols() == 12);
    CHECK(s.B->rows() == 3);
    CHECK(s.B->cols() == 4);
}

TEST_CASE("ssnmf with lambda 0 shares the nmf history of the transpose") {
    std::mt19937_64 rng(56);
    const NonnegMatrix X = random_matrix(6, 9, rng);
    const NonnegMatrix Y = random_matrix(2, 9, rng);
    SolverConfig config;
    config.rank = 3;
    config.lambda = 0.0;
    config.max_iters = 30;
    config.rel_tol = 0.0;

    const gnmf::FactorizationResult s = gnmf::ssnmf(X, Y, config);
    const gnmf::FactorizationResult p = gnmf::nmf(gnmf::transpose(X), config);
    CHECK(s.objective_history == p.objective_history);
    CHECK(bitwise_equal(s.A, gnmf::transpose(p.S)));
    CHECK(bitwise_equal(s.S, gnmf::transpose(p.A)));
}

TEST_CASE("ssnmf separates three planted clusters") {
    // 24 columns in three groups of 8; each column lives on one of three
    // disjoint 3-feature blocks, with deterministic in-block variation and a
    // whiff of off-block noise.
    std::vector<std::vector<double>> cols;
    std::vector<std::size_t> labels;
    for (std::size_t cls = 0; cls < 3; ++cls) {
        for (std::size_t d = 0; d < 8; ++d) {
            std::vector<double> col(9);
            for (std::size_t i = 0; i < 9; ++i) {
                if (i / 3 == cls) {
                    col[i] = 0.5 + 0.5 * static_cast<double>((d * 7 + i * 3) % 10) / 10.0;
                } else {
                    col[i] = 0.02 * static_cast<double>((d * 5 + i * 2) % 7) / 7.0;
                }
            }
            cols.push_back(std::move(col));
            labels.push_back(cls);
        }
    }
    std::vector<double> xv(9 * 24);
    for (std::size_t j = 0; j < 24; ++j) {
        for (std::size_t i = 0; i < 9; ++i) xv[i * 24 + j] = cols[j][i];
    }
    const NonnegMatrix X(9, 24, std::move(xv));
    NonnegMatrix Y(3, 24);
    for (std::size_t j = 0; j < 24; ++j) Y.set(labels[j], j, 1.0);

    SolverConfig config;
    config.rank = 3;
    config.lambda = 5.0;
    config.max_iters = 1000;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::ssnmf(X, Y, config);
    REQUIRE(r.B.has_value());

    const NonnegMatrix scores = gnmf::matmul(*r.B, r.S);
    std::size_t hits = 0;
    for (std::size_t j = 0; j < 24; ++j) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < 3; ++c) {
            if (scores(c, j) > scores(best, j)) best = c;
        }
        if (best == labels[j]) ++hits;
    }
    CHECK(hits >= 22);  // 90 percent of 24
}

TEST_CASE("ssnmf on a single point pushes BS toward the label") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{0.5}, {0.9}, {0.3}, {0.7}});
    const NonnegMatrix Y = NonnegMatrix::from_rows({{1.0}});
    SolverConfig config;
    config.rank = 2;
    config.lambda = 5.0;
    config.max_iters = 1000;
    config.rel_tol = 0.0;
    const gnmf::FactorizationResult r = gnmf::ssnmf(X, Y, config);
    REQUIRE(r.B.has_value());
    const NonnegMatrix bs = gnmf::matmul(*r.B, r.S);
    CHECK(std::abs(bs(0, 0) - 1.0) <= 1e-3);
}

TEST_CASE("ssnmf rejects label matrices over the wrong axis") {
    const NonnegMatrix X = NonnegMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    const NonnegMatrix Y = NonnegMatrix::from_rows({{1.0, 0.0, 1.0}});
    SolverConfig config;
    config.rank = 2;
    CHECK_THROWS_AS(gnmf::ssnmf(X, Y, config), gnmf::ShapeError);
}

TEST_CASE("stopping rule halts before max_iters on an easy problem") {
    const NonnegMatrix u = NonnegMatrix::from_rows({{0.3}, {0.8}, {0.5}});
    const NonnegMatrix w = NonnegMatrix::from_rows({{0.7, 0.2, 0.9, 0.4}});
    const NonnegMatrix X = gnmf::matmul(u, w);
    SolverConfig config;
    config.rank = 1;
    config.max_iters = 5000;
    config.rel_tol = 1e-6;
    const gnmf::FactorizationResult r = gnmf::nmf(X, config);
    CHECK(r.iterations_run < 5000);
    CHECK(r.iterations_run == r.objective_history.size());

    // The run that stopped matches the prefix of an unconstrained run.
    SolverConfig full = config;
    full.rel_tol = 0.0;
    full.max_iters = r.iterations_run;
    const gnmf::FactorizationResult prefix = gnmf::nmf(X, full);
    CHECK(r.objective_history == prefix.objective_history);
    CHECK(bitwise_equal(r.A, prefix.A));
}
