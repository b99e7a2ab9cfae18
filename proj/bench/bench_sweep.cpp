// Times the slope-grid shooting sweep: serial reference vs the OpenMP kernel.
// The two must agree bit-for-bit; the table reports wall time and speedup.

#include <chrono>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "bvp/multiplicity.hpp"
#include "bvp/shooting.hpp"

using namespace bvp;

int main(int argc, char** argv) {
    int grid = argc > 1 ? std::atoi(argv[1]) : 2000;

    Expr a = Expr::parse("sin(3*pi*x)", "x");
    Expr g = Expr::parse("max(0,100*s*atan(abs(s)))", "s");
    WeightFunction w = WeightFunction::from_expr(a, 0.5, 1.0);
    Problem p = Problem::make(w, decompose(w), g);
    Tolerances tol;

    std::vector<double> slopes(grid);
    for (int j = 0; j < grid; ++j) slopes[j] = 5.0 * (j + 1) / grid;

    auto time = [&](auto&& fn, std::vector<double>& out) {
        auto t0 = std::chrono::steady_clock::now();
        out = fn();
        auto t1 = std::chrono::steady_clock::now();
        return std::chrono::duration<double>(t1 - t0).count();
    };

    std::vector<double> serial, parallel;
    double ts = time([&] { return sweep_shoot_values_serial(p, slopes, tol); }, serial);
    double tp = time([&] { return sweep_shoot_values(p, slopes, tol); }, parallel);

    bool identical = serial == parallel;
    int threads = 1;
#ifdef _OPENMP
    threads = omp_get_max_threads();
#endif

    std::printf("slopes: %d\n", grid);
    std::printf("serial reference: %8.3f s\n", ts);
    std::printf("openmp (%2d thr):  %8.3f s   speedup %.2fx\n", threads, tp, ts / tp);
    std::printf("bit-identical:    %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
