#include <cstdlib>
#include <string>

#include "gossip/kernels.hpp"
#include "kernels_internal.hpp"

namespace gossip::kernels {

namespace {

std::size_t argmin_scalar(const double* values, std::size_t count) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i) {
        if (values[i] < values[best]) best = i;
    }
    return best;
}

void axpy_scalar(double* y, const double* x, double a, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) y[i] += a * x[i];
}

void add_scalar_scalar(double* y, double a, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) y[i] += a;
}

double sum_scalar(const double* values, std::size_t count) {
    double total = 0.0;
    for (std::size_t i = 0; i < count; ++i) total += values[i];
    return total;
}

const KernelTable kScalar{Isa::Scalar, argmin_scalar, axpy_scalar, add_scalar_scalar, sum_scalar};

const KernelTable& select() noexcept {
    if (const char* forced = std::getenv("GOSSIP_SIMD")) {
        const std::string choice(forced);
        if (choice == "scalar") return kScalar;
    }
    if (const auto* t = avx2_table()) return *t;
    if (const auto* t = neon_table()) return *t;
    return kScalar;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(GOSSIP_HAVE_AVX2)
#if defined(__GNUC__) || defined(__clang__)
    static const bool supported = __builtin_cpu_supports("avx2");
#else
    static const bool supported = true;
#endif
    return supported ? &detail::avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(GOSSIP_HAVE_NEON)
    return &detail::neon_kernels();
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

}  // namespace gossip::kernels
