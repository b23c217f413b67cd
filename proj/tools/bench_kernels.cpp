// Timing comparison between the OpenMP kernels and the serial reference
// implementations, plus an end-to-end solver timing.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "gnmf/matrix.hpp"
#include "gnmf/reference.hpp"
#include "gnmf/solver.hpp"

using gnmf::NonnegMatrix;

namespace {

NonnegMatrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed,
                           double density = 1.0) {
    std::mt19937_64 rng(seed);
    auto uniform = [&]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<double> values(rows * cols);
    for (double& v : values) {
        v = uniform() < density ? uniform() : 0.0;
    }
    return NonnegMatrix(rows, cols, std::move(values));
}

template <typename F>
double time_best_of(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        const auto stop = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(stop - start).count());
    }
    return best;
}

void report(const char* name, double ref_s, double par_s, bool equal) {
    std::printf("%-24s ref %8.4f s   kernels %8.4f s   speedup %5.2fx   %s\n", name,
                ref_s, par_s, ref_s / par_s, equal ? "bitwise equal" : "MISMATCH");
}

} // namespace

int main() {
    const int reps = 3;

    {
        const NonnegMatrix a = random_matrix(600, 400, 1);
        const NonnegMatrix b = random_matrix(400, 300, 2);
        const NonnegMatrix ref = gnmf::ref::matmul(a, b);
        const NonnegMatrix par = gnmf::matmul(a, b);
        report("matmul 600x400x300",
               time_best_of([&]() { gnmf::ref::matmul(a, b); }, reps),
               time_best_of([&]() { gnmf::matmul(a, b); }, reps),
               ref.values() == par.values());
    }
    {
        // Term-document-like sparsity: the kernel's zero skip should win big.
        const NonnegMatrix x = random_matrix(4000, 800, 3, 0.01);
        const NonnegMatrix s = random_matrix(800, 10, 4);
        const NonnegMatrix ref = gnmf::ref::matmul(x, s);
        const NonnegMatrix par = gnmf::matmul(x, s);
        report("matmul sparse 1%",
               time_best_of([&]() { gnmf::ref::matmul(x, s); }, reps),
               time_best_of([&]() { gnmf::matmul(x, s); }, reps),
               ref.values() == par.values());
    }
    {
        const NonnegMatrix a = random_matrix(2000, 1500, 5);
        const NonnegMatrix ref = gnmf::ref::transpose(a);
        const NonnegMatrix par = gnmf::transpose(a);
        report("transpose 2000x1500",
               time_best_of([&]() { gnmf::ref::transpose(a); }, reps),
               time_best_of([&]() { gnmf::transpose(a); }, reps),
               ref.values() == par.values());
    }
    {
        const NonnegMatrix a = random_matrix(2000, 1500, 6);
        const NonnegMatrix b = random_matrix(2000, 1500, 7);
        const bool equal = gnmf::ref::frobenius_diff_sq(a, b) == gnmf::frobenius_diff_sq(a, b);
        report("frobenius_diff 3M",
               time_best_of([&]() { gnmf::ref::frobenius_diff_sq(a, b); }, reps),
               time_best_of([&]() { gnmf::frobenius_diff_sq(a, b); }, reps), equal);
    }
    {
        const NonnegMatrix x = random_matrix(3000, 500, 8, 0.01);
        gnmf::SolverConfig config;
        config.rank = 8;
        config.max_iters = 50;
        config.rel_tol = 0.0;
        const double t = time_best_of([&]() { gnmf::nmf(x, config); }, 1);
        std::printf("%-24s %8.4f s (%zu sweeps, 3000x500, k=8)\n", "nmf end-to-end", t,
                    config.max_iters);
    }
    return 0;
}
