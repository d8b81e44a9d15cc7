#include "twoway/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace twoway::kernels {

namespace serial {

void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out) {
    const std::size_t dim = v.size();
    for (std::size_t r = 0; r < dim; ++r) {
        Complex acc{0.0, 0.0};
        const Complex* row = m.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
}

double unitarity_deviation(std::span<const Complex> m, std::size_t dim) {
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r) {
        const Complex* a = m.data() + r * dim;
        for (std::size_t c = 0; c < dim; ++c) {
            const Complex* b = m.data() + c * dim;
            Complex acc{0.0, 0.0};
            for (std::size_t k = 0; k < dim; ++k) acc += a[k] * std::conj(b[k]);
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

}  // namespace serial

namespace omp {

void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out) {
    const auto dim = static_cast<long long>(v.size());
#pragma omp parallel for schedule(static)
    for (long long r = 0; r < dim; ++r) {
        Complex acc{0.0, 0.0};
        const Complex* row = m.data() + r * dim;
        for (long long c = 0; c < dim; ++c) acc += row[c] * v[c];
        out[r] = acc;
    }
}

double unitarity_deviation(std::span<const Complex> m, std::size_t dim) {
    double worst = 0.0;
    const auto n = static_cast<long long>(dim);
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long long r = 0; r < n; ++r) {
        const Complex* a = m.data() + r * n;
        for (long long c = 0; c < n; ++c) {
            const Complex* b = m.data() + c * n;
            Complex acc{0.0, 0.0};
            for (long long k = 0; k < n; ++k) acc += a[k] * std::conj(b[k]);
            if (r == c) acc -= 1.0;
            worst = std::max(worst, std::abs(acc));
        }
    }
    return worst;
}

}  // namespace omp

void matvec(std::span<const Complex> m, std::span<const Complex> v, std::span<Complex> out) {
    if (v.size() >= kParallelDim) {
        omp::matvec(m, v, out);
    } else {
        serial::matvec(m, v, out);
    }
}

double unitarity_deviation(std::span<const Complex> m, std::size_t dim) {
    return dim >= kParallelDim / 4 ? omp::unitarity_deviation(m, dim)
                                   : serial::unitarity_deviation(m, dim);
}

}  // namespace twoway::kernels
