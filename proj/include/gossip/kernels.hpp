#pragma once

// Data-parallel inner loops of the per-edge reference engine.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (AArch64) variant. The variant is
// chosen once at runtime from the CPU's capabilities; the environment
// variable GOSSIP_SIMD=scalar forces the reference path.
//
// argmin, axpy and add_scalar produce bit-identical results on every path.
// sum reassociates, so its result may differ from the scalar path in the
// last few ulps.

#include <cstddef>
#include <span>
#include <string_view>

namespace gossip::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

// Index of the first minimum; 0 for an empty span.
using ArgminFn = std::size_t (*)(const double* values, std::size_t count);
// y[i] += a * x[i]
using AxpyFn = void (*)(double* y, const double* x, double a, std::size_t count);
// y[i] += a
using AddScalarFn = void (*)(double* y, double a, std::size_t count);
using SumFn = double (*)(const double* values, std::size_t count);

struct KernelTable {
    Isa isa = Isa::Scalar;
    ArgminFn argmin = nullptr;
    AxpyFn axpy = nullptr;
    AddScalarFn add_scalar = nullptr;
    SumFn sum = nullptr;
};

const KernelTable& scalar_table() noexcept;
// nullptr when the variant was not compiled in or the CPU lacks it.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

// Best available table, honouring GOSSIP_SIMD.
const KernelTable& active() noexcept;

inline std::size_t argmin(std::span<const double> v) { return active().argmin(v.data(), v.size()); }
inline void axpy(std::span<double> y, std::span<const double> x, double a) {
    active().axpy(y.data(), x.data(), a, y.size());
}
inline void add_scalar(std::span<double> y, double a) { active().add_scalar(y.data(), a, y.size()); }
inline double sum(std::span<const double> v) { return active().sum(v.data(), v.size()); }

}  // namespace gossip::kernels
