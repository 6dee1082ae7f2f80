// AArch64 only; NEON is part of the baseline there.

#include <arm_neon.h>

#include <array>

#include "constrank/kernels.hpp"

namespace constrank::kernels::neon {

void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks) {
    const std::size_t m = rows_per_matrix;
    const std::size_t count = ranks.size();
    std::array<uint64x2_t, 64> r;
    std::size_t k = 0;
    for (; k + 2 <= count; k += 2) {
        const std::uint64_t* base = rows.data() + k * m;
        for (std::size_t i = 0; i < m; ++i) r[i] = uint64x2_t{base[i], base[m + i]};
        uint64x2_t rank = vdupq_n_u64(0);
        for (std::size_t i = 0; i < m; ++i) {
            const uint64x2_t pivot = r[i];
            const uint64x2_t low = vandq_u64(pivot, vsubq_u64(vdupq_n_u64(0), pivot));
            rank = vsubq_u64(rank, vtstq_u64(pivot, pivot));
            for (std::size_t j = i + 1; j < m; ++j)
                r[j] = veorq_u64(r[j], vandq_u64(pivot, vtstq_u64(r[j], low)));
        }
        ranks[k] = static_cast<std::uint8_t>(vgetq_lane_u64(rank, 0));
        ranks[k + 1] = static_cast<std::uint8_t>(vgetq_lane_u64(rank, 1));
    }
    for (; k < count; ++k)
        ranks[k] = static_cast<std::uint8_t>(gf2_rank(rows.subspan(k * m, m)));
}

void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p) {
    const std::size_t n = dst.size();
    const uint16x8_t vc = vdupq_n_u16(c);
    const uint16x8_t vp = vdupq_n_u16(p);
    const uint16x4_t vm = vdup_n_u16(static_cast<std::uint16_t>(65536u / p));
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const uint16x8_t x = vmlaq_u16(vld1q_u16(dst.data() + i), vld1q_u16(src.data() + i), vc);
        const uint16x4_t qlo = vshrn_n_u32(vmull_u16(vget_low_u16(x), vm), 16);
        const uint16x4_t qhi = vshrn_n_u32(vmull_u16(vget_high_u16(x), vm), 16);
        uint16x8_t rem = vmlsq_u16(x, vcombine_u16(qlo, qhi), vp);
        rem = vminq_u16(rem, vsubq_u16(rem, vp));
        vst1q_u16(dst.data() + i, rem);
    }
    if (i < n) scalar::gfp_axpy(dst.subspan(i), src.subspan(i), c, p);
}

}  // namespace constrank::kernels::neon
