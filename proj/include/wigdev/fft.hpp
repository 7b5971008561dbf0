#pragma once

// Thin RAII layer over FFTW for the batched 1-D complex transforms used
// throughout the library. Conventions:
//   forward:  X[k] = sum_m x[m] exp(-2 pi i k m / n)
//   backward: x[m] = sum_k X[k] exp(+2 pi i k m / n)   (unnormalized)

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

#include <fftw3.h>

#include "errors.hpp"

namespace wigdev::fft {

using cplx = std::complex<double>;

enum class Direction { forward = FFTW_FORWARD, backward = FFTW_BACKWARD };

namespace detail {
// FFTW's planner is not reentrant; execution is.
inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace detail

class Plan {
public:
    // `howmany` transforms of length `n`; element j of transform b lives at
    // data[b * dist + j * stride].
    Plan(cplx* data, int n, int howmany, int stride, int dist, Direction dir) {
        auto* p = reinterpret_cast<fftw_complex*>(data);
        std::lock_guard lock(detail::planner_mutex());
        plan_ = fftw_plan_many_dft(1, &n, howmany, p, nullptr, stride, dist, p, nullptr,
                                   stride, dist, static_cast<int>(dir), FFTW_ESTIMATE);
        if (!plan_) throw Error("fftw planner failed");
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(detail::planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_{};
};

// In-place transform of one contiguous vector.
inline void transform(std::span<cplx> v, Direction dir) {
    if (v.empty()) return;
    Plan(v.data(), static_cast<int>(v.size()), 1, 1, static_cast<int>(v.size()), dir).execute();
}

// In-place transforms of every row of a row-major rows x cols block.
inline void transform_rows(std::span<cplx> block, std::size_t rows, std::size_t cols,
                           Direction dir) {
    if (block.size() != rows * cols) throw DimensionError("transform_rows: size mismatch");
    if (rows == 0 || cols == 0) return;
    Plan(block.data(), static_cast<int>(cols), static_cast<int>(rows), 1, static_cast<int>(cols),
         dir)
        .execute();
}

// In-place transforms of every column of a row-major rows x cols block.
inline void transform_columns(std::span<cplx> block, std::size_t rows, std::size_t cols,
                              Direction dir) {
    if (block.size() != rows * cols) throw DimensionError("transform_columns: size mismatch");
    if (rows == 0 || cols == 0) return;
    Plan(block.data(), static_cast<int>(rows), static_cast<int>(cols), static_cast<int>(cols), 1,
         dir)
        .execute();
}

// Signed DFT frequency index of bin k for a length-n transform.
inline long signed_index(std::size_t k, std::size_t n) {
    return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace wigdev::fft
