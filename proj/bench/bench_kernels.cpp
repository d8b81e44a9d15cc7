// Serial vs OpenMP timings for the dense kernels and the per-input loop.
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include <omp.h>

#include "twoway/compile.hpp"
#include "twoway/kernels.hpp"
#include "twoway/langs.hpp"

using namespace twoway;
using Clock = std::chrono::steady_clock;

namespace {

template <class F>
double best_ms(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        best = std::min(best, ms);
    }
    return best;
}

std::vector<Complex> random_grid(std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    std::vector<Complex> v(dim * dim);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

}  // namespace

int main() {
    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-22s %8s %12s %12s %8s\n", "kernel", "size", "serial_ms", "omp_ms", "max_diff");
    std::mt19937_64 rng(7);
    for (std::size_t dim : {64, 256, 1024}) {
        const auto m = random_grid(dim, rng);
        std::vector<Complex> v(dim, Complex{1.0 / std::sqrt(double(dim)), 0.0});
        std::vector<Complex> a(dim), b(dim);
        const double ts = best_ms(5, [&] { kernels::serial::matvec(m, v, a); });
        const double tp = best_ms(5, [&] { kernels::omp::matvec(m, v, b); });
        double diff = 0.0;
        for (std::size_t i = 0; i < dim; ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
        std::printf("%-22s %8zu %12.4f %12.4f %8.1e\n", "matvec", dim, ts, tp, diff);

        double ds = 0.0, dp = 0.0;
        const double us = best_ms(3, [&] { ds = kernels::serial::unitarity_deviation(m, dim); });
        const double up = best_ms(3, [&] { dp = kernels::omp::unitarity_deviation(m, dim); });
        std::printf("%-22s %8zu %12.4f %12.4f %8.1e\n", "unitarity_deviation", dim, us, up,
                    std::abs(ds - dp) / std::max(1.0, ds));
    }

    for (std::size_t n : {4, 6}) {
        const CompiledMachine c = build_eq_fingerprint_2pfa(n);
        const auto inputs = all_bit_strings(n);
        const std::size_t count = inputs.size() * inputs.size();
        std::vector<double> ps(count), pp(count);
        auto body = [&](std::vector<double>& out) {
            return [&](std::size_t k) {
                const Tape t = encode_pair(inputs[k / inputs.size()], inputs[k % inputs.size()]);
                out[k] = run_exact(c.machine, t, default_step_cap(c, t.size())).accept_prob;
            };
        };
        const double ts = best_ms(1, [&] { kernels::serial_for(count, body(ps)); });
        const double tp = best_ms(1, [&] { kernels::parallel_for(count, body(pp)); });
        double diff = 0.0;
        for (std::size_t k = 0; k < count; ++k) diff = std::max(diff, std::abs(ps[k] - pp[k]));
        std::printf("%-22s %8zu %12.4f %12.4f %8.1e\n", "eq-input-loop", n, ts, tp, diff);
    }
}
