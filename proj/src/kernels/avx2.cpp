// Compiled with -mavx2; only called after the dispatcher confirms CPU support.

#include <immintrin.h>

#include <array>
#include <cstdint>

#include "constrank/kernels.hpp"

namespace constrank::kernels::avx2 {

// Four matrices per register: lane k of rows[i] is row i of matrix k. Same
// lowest-bit pivot elimination as the scalar kernel, made branch-free with
// lane masks.
void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks) {
    const std::size_t m = rows_per_matrix;
    const std::size_t count = ranks.size();
    const __m256i zero = _mm256_setzero_si256();
    __m256i r[64];
    std::size_t k = 0;
    for (; k + 4 <= count; k += 4) {
        const std::uint64_t* base = rows.data() + k * m;
        for (std::size_t i = 0; i < m; ++i) {
            r[i] = _mm256_set_epi64x(static_cast<long long>(base[3 * m + i]),
                                     static_cast<long long>(base[2 * m + i]),
                                     static_cast<long long>(base[m + i]),
                                     static_cast<long long>(base[i]));
        }
        __m256i rank = zero;
        for (std::size_t i = 0; i < m; ++i) {
            const __m256i pivot = r[i];
            const __m256i low = _mm256_and_si256(pivot, _mm256_sub_epi64(zero, pivot));
            // nonzero lanes contribute -(-1) = +1
            rank = _mm256_sub_epi64(rank, _mm256_xor_si256(_mm256_cmpeq_epi64(pivot, zero),
                                                           _mm256_set1_epi64x(-1)));
            for (std::size_t j = i + 1; j < m; ++j) {
                const __m256i hit = _mm256_cmpeq_epi64(_mm256_and_si256(r[j], low), zero);
                r[j] = _mm256_xor_si256(r[j], _mm256_andnot_si256(hit, pivot));
            }
        }
        alignas(32) std::array<std::int64_t, 4> out;
        _mm256_store_si256(reinterpret_cast<__m256i*>(out.data()), rank);
        for (std::size_t t = 0; t < 4; ++t) ranks[k + t] = static_cast<std::uint8_t>(out[t]);
    }
    for (; k < count; ++k)
        ranks[k] = static_cast<std::uint8_t>(gf2_rank(rows.subspan(k * m, m)));
}

// 16 lanes of 16 bits. x = dst + c*src < 2^16 because p <= 251. The quotient
// estimate floor(x * floor(2^16/p) / 2^16) undershoots by at most one, so a
// single conditional subtract finishes the reduction.
void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p) {
    const std::size_t n = dst.size();
    const __m256i vc = _mm256_set1_epi16(static_cast<short>(c));
    const __m256i vp = _mm256_set1_epi16(static_cast<short>(p));
    const __m256i vm = _mm256_set1_epi16(static_cast<short>(65536u / p));
    std::size_t i = 0;
    for (; i + 16 <= n; i += 16) {
        const __m256i s = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src.data() + i));
        const __m256i d = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst.data() + i));
        const __m256i x = _mm256_add_epi16(d, _mm256_mullo_epi16(s, vc));
        const __m256i quot = _mm256_mulhi_epu16(x, vm);
        __m256i rem = _mm256_sub_epi16(x, _mm256_mullo_epi16(quot, vp));
        rem = _mm256_min_epu16(rem, _mm256_sub_epi16(rem, vp));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst.data() + i), rem);
    }
    if (i < n) scalar::gfp_axpy(dst.subspan(i), src.subspan(i), c, p);
}

}  // namespace constrank::kernels::avx2
