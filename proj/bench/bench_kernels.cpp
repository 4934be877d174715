#include <omp.h>

#include <chrono>
#include <cstdio>
#include <random>

#include "adiclab/ktheory.hpp"
#include "adiclab/random.hpp"
#include "adiclab/shifts.hpp"

using namespace adiclab;

namespace {

template <class Fn>
double best_of(int reps, Fn fn)
{
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* what, double parallel, double serial)
{
    std::printf("%-34s %10.4f %10.4f %8.2fx\n", what, parallel, serial, serial / parallel);
}

}  // namespace

int main()
{
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %10s %10s %9s\n", "kernel", "parallel", "serial", "speedup");

    for (unsigned s : {2u, 3u}) {
        const unsigned N = s == 2 ? 10 : 7;
        RandomFunctions rnd(s, 1);
        const SparseOperator S = make_shift(ShiftKind::Bernoulli, s, N);
        const SparseOperator W = make_shift(ShiftKind::Serre, s, N);
        const SparseOperator A = compose(make_mult(rnd.lc(), N), compose(S, adjoint(W)));
        const SparseOperator B = compose(W, compose(make_mult(rnd.lc(), N), adjoint(S)));
        SparseOperator sink = A;
        const double p = best_of(3, [&] { sink = compose(A, B); });
        const double q = best_of(3, [&] { sink = compose_serial(A, B); });
        char label[64];
        std::snprintf(label, sizeof label, "compose s=%u depth=%u", s, N);
        row(label, p, q);
    }

    std::mt19937_64 g(1);
    for (std::size_t n : {64u, 160u}) {
        IntMatrix a(n, n), b(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) = static_cast<long>(g() % 2001) - 1000;
                b(i, j) = static_cast<long>(g() % 2001) - 1000;
            }
        IntMatrix sink;
        const double p = best_of(3, [&] { sink = multiply(a, b); });
        const double q = best_of(3, [&] { sink = multiply_serial(a, b); });
        char label[64];
        std::snprintf(label, sizeof label, "integer multiply %zux%zu", n, n);
        row(label, p, q);
    }

    const double c = best_of(3, [] { (void)compose_phi(3, 1, 4); });
    std::printf("%-34s %10.4f\n", "compose_phi s=3 n=1..4", c);
    return 0;
}
