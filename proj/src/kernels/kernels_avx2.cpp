// Compiled with -mavx2 only; callers reach these through the runtime
// dispatch table after checking CPU support.
#include <immintrin.h>

#include <cstdint>

#include "kernels_internal.hpp"

namespace gossip::kernels::detail {

namespace {

std::size_t argmin_avx2(const double* values, std::size_t count) {
    if (count < 8) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < count; ++i) {
            if (values[i] < values[best]) best = i;
        }
        return best;
    }
    // Per-lane running minimum and its index. Strict less-than keeps the
    // first occurrence within each lane.
    __m256d best_val = _mm256_loadu_pd(values);
    __m256d best_idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
    __m256d idx = best_idx;
    const __m256d step = _mm256_set1_pd(4.0);
    std::size_t i = 4;
    for (; i + 4 <= count; i += 4) {
        idx = _mm256_add_pd(idx, step);
        const __m256d v = _mm256_loadu_pd(values + i);
        const __m256d lt = _mm256_cmp_pd(v, best_val, _CMP_LT_OQ);
        best_val = _mm256_blendv_pd(best_val, v, lt);
        best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    }
    alignas(32) double lane_val[4];
    alignas(32) double lane_idx[4];
    _mm256_store_pd(lane_val, best_val);
    _mm256_store_pd(lane_idx, best_idx);
    auto best = static_cast<std::size_t>(lane_idx[0]);
    double best_v = lane_val[0];
    for (int l = 1; l < 4; ++l) {
        const auto li = static_cast<std::size_t>(lane_idx[l]);
        if (lane_val[l] < best_v || (lane_val[l] == best_v && li < best)) {
            best_v = lane_val[l];
            best = li;
        }
    }
    for (; i < count; ++i) {
        if (values[i] < best_v) {
            best_v = values[i];
            best = i;
        }
    }
    return best;
}

void axpy_avx2(double* y, const double* x, double a, std::size_t count) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
        _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
    }
    for (; i < count; ++i) y[i] += a * x[i];
}

void add_scalar_avx2(double* y, double a, std::size_t count) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), va));
    for (; i < count; ++i) y[i] += a;
}

double sum_avx2(const double* values, std::size_t count) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= count; i += 8) {
        acc0 = _mm256_add_pd(acc0, _mm256_loadu_pd(values + i));
        acc1 = _mm256_add_pd(acc1, _mm256_loadu_pd(values + i + 4));
    }
    acc0 = _mm256_add_pd(acc0, acc1);
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc0);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (; i < count; ++i) total += values[i];
    return total;
}

const KernelTable kAvx2{Isa::Avx2, argmin_avx2, axpy_avx2, add_scalar_avx2, sum_avx2};

}  // namespace

const KernelTable& avx2_kernels() noexcept { return kAvx2; }

}  // namespace gossip::kernels::detail
