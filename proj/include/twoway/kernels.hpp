// Dense linear-algebra kernels and the per-input loop, each in a serial
// reference form and an OpenMP form. The dispatching entry points pick the
// OpenMP form once the problem is large enough to amortize a parallel region.
#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

#include "twoway/qcore.hpp"

namespace twoway::kernels {

namespace serial {
void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out);
double unitarity_deviation(std::span<const Complex> m, std::size_t dim);
}  // namespace serial

namespace omp {
void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out);
double unitarity_deviation(std::span<const Complex> m, std::size_t dim);
}  // namespace omp

// Dimension at which the dispatchers switch to the OpenMP kernels.
inline constexpr std::size_t kParallelDim = 256;

void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out);
double unitarity_deviation(std::span<const Complex> m, std::size_t dim);

template <class Body>
void serial_for(std::size_t count, Body&& body) {
    for (std::size_t i = 0; i < count; ++i) body(i);
}

// Runs body(i) for i in [0, count) across threads. The first exception thrown
// by any iteration is rethrown on the calling thread after the loop.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
}

}  // namespace twoway::kernels
