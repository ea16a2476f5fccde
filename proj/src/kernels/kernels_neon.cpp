#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace gossip::kernels::detail {

namespace {

std::size_t argmin_neon(const double* values, std::size_t count) {
    std::size_t best = 0;
    if (count < 4) {
        for (std::size_t i = 1; i < count; ++i) {
            if (values[i] < values[best]) best = i;
        }
        return best;
    }
    float64x2_t best_val = vld1q_f64(values);
    float64x2_t best_idx = {0.0, 1.0};
    float64x2_t idx = best_idx;
    const float64x2_t step = vdupq_n_f64(2.0);
    std::size_t i = 2;
    for (; i + 2 <= count; i += 2) {
        idx = vaddq_f64(idx, step);
        const float64x2_t v = vld1q_f64(values + i);
        const uint64x2_t lt = vcltq_f64(v, best_val);
        best_val = vbslq_f64(lt, v, best_val);
        best_idx = vbslq_f64(lt, idx, best_idx);
    }
    double v0 = vgetq_lane_f64(best_val, 0), v1 = vgetq_lane_f64(best_val, 1);
    auto i0 = static_cast<std::size_t>(vgetq_lane_f64(best_idx, 0));
    auto i1 = static_cast<std::size_t>(vgetq_lane_f64(best_idx, 1));
    double best_v = v0;
    best = i0;
    if (v1 < v0 || (v1 == v0 && i1 < i0)) {
        best_v = v1;
        best = i1;
    }
    for (; i < count; ++i) {
        if (values[i] < best_v) {
            best_v = values[i];
            best = i;
        }
    }
    return best;
}

void axpy_neon(double* y, const double* x, double a, std::size_t count) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    // vmulq + vaddq rather than vfmaq so rounding matches the scalar path.
    for (; i + 2 <= count; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (; i < count; ++i) y[i] += a * x[i];
}

void add_scalar_neon(double* y, double a, std::size_t count) {
    const float64x2_t va = vdupq_n_f64(a);
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), va));
    for (; i < count; ++i) y[i] += a;
}

double sum_neon(const double* values, std::size_t count) {
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= count; i += 2) acc = vaddq_f64(acc, vld1q_f64(values + i));
    double total = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
    for (; i < count; ++i) total += values[i];
    return total;
}

const KernelTable kNeon{Isa::Neon, argmin_neon, axpy_neon, add_scalar_neon, sum_neon};

}  // namespace

const KernelTable& neon_kernels() noexcept { return kNeon; }

}  // namespace gossip::kernels::detail
