#include <chrono>
#include <cmath>
#include <cstdio>

#include <omp.h>

#include "belldepth/localset.hpp"
#include "belldepth/quantum.hpp"

using clock_type = std::chrono::steady_clock;

static double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

int main() {
    std::printf("threads available: %d\n\n", omp_get_max_threads());

    std::printf("local bound scan over all 4^n deterministic strategies\n");
    std::printf("%4s %12s %12s %10s\n", "n", "serial [s]", "openmp [s]", "speedup");
    for (int n = 8; n <= 10; ++n) {
        auto f = bell::sliwa_functional(n);

        auto t0 = clock_type::now();
        auto serial = bell::local_bound_serial(f);
        double ts = seconds_since(t0);

        t0 = clock_type::now();
        auto parallel = bell::local_bound(f);
        double tp = seconds_since(t0);

        if (std::abs(serial.value - parallel.value) > 1e-12 ||
            serial.strategy.code != parallel.strategy.code) {
            std::printf("MISMATCH at n=%d: serial %.12f/%u vs parallel %.12f/%u\n", n,
                        serial.value, serial.strategy.code, parallel.value,
                        parallel.strategy.code);
            return 1;
        }
        std::printf("%4d %12.3f %12.3f %9.2fx\n", n, ts, tp, ts / tp);
    }

    std::printf("\nsee-saw restarts (n=6, 16 restarts)\n");
    auto f6 = bell::sliwa_functional(6);

    omp_set_num_threads(1);
    auto t0 = clock_type::now();
    auto one = bell::seesaw(f6, 6, 16, 20260814);
    double ts = seconds_since(t0);

    omp_set_num_threads(omp_get_num_procs());
    t0 = clock_type::now();
    auto many = bell::seesaw(f6, 6, 16, 20260814);
    double tp = seconds_since(t0);

    if (std::abs(one.value - many.value) > 1e-12) {
        std::printf("MISMATCH: 1-thread %.12f vs n-thread %.12f\n", one.value, many.value);
        return 1;
    }
    std::printf("%4s %12.3f %12.3f %9.2fx   value %.10f\n", "", ts, tp, ts / tp, many.value);
    std::printf("\nidentical results across thread counts\n");
    return 0;
}
