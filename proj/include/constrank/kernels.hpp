#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants.
// The dispatcher picks the widest instruction set the CPU reports at first
// use; tests compare every available variant against the scalar one.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace constrank::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Variants compiled into this binary and supported by the running CPU.
std::vector<Isa> available_isas();
Isa active_isa() noexcept;
/// Overrides the dispatcher; throws std::invalid_argument if unavailable.
void set_active_isa(Isa isa);

/// Largest prime for which gfp_axpy has a vector path.
inline constexpr std::uint16_t kVectorAxpyMaxPrime = 251;

/// Ranks of a batch of GF(2) matrices. Matrix k occupies words
/// [k*rows_per_matrix, (k+1)*rows_per_matrix) of `rows`, one row per word.
/// ranks.size() must equal rows.size() / rows_per_matrix; rows_per_matrix <= 64.
void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks);

/// dst[i] = (dst[i] + c * src[i]) mod p for a prime p < 2^16, entries < p.
void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p);

/// Rank of a single packed GF(2) matrix; the scalar elimination used by the
/// batch kernels' tails.
int gf2_rank(std::span<const std::uint64_t> rows) noexcept;

namespace scalar {
void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks);
void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p);
}  // namespace scalar

#if defined(CONSTRANK_HAVE_AVX2)
namespace avx2 {
void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks);
/// Requires p <= kVectorAxpyMaxPrime.
void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p);
}  // namespace avx2
#endif

#if defined(CONSTRANK_HAVE_NEON)
namespace neon {
void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks);
void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p);
}  // namespace neon
#endif

}  // namespace constrank::kernels
