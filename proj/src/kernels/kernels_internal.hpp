#pragma once

#include "gossip/kernels.hpp"

namespace gossip::kernels::detail {

#if defined(GOSSIP_HAVE_AVX2)
const KernelTable& avx2_kernels() noexcept;
#endif
#if defined(GOSSIP_HAVE_NEON)
const KernelTable& neon_kernels() noexcept;
#endif

}  // namespace gossip::kernels::detail
