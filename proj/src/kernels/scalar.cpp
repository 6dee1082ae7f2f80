#include <array>

#include "constrank/kernels.hpp"

namespace constrank::kernels {

// Each nonzero row becomes a pivot on its lowest set bit and is cleared from
// every later row. Pivot bits are then pairwise distinct, so the surviving
// nonzero rows are independent and their count is the rank.
int gf2_rank(std::span<const std::uint64_t> rows) noexcept {
    std::array<std::uint64_t, 64> r{};
    const std::size_t m = rows.size();
    for (std::size_t i = 0; i < m; ++i) r[i] = rows[i];
    int rank = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::uint64_t pivot = r[i];
        if (pivot == 0) continue;
        ++rank;
        const std::uint64_t low = pivot & (~pivot + 1);
        for (std::size_t j = i + 1; j < m; ++j)
            if (r[j] & low) r[j] ^= pivot;
    }
    return rank;
}

namespace scalar {

void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks) {
    for (std::size_t k = 0; k < ranks.size(); ++k)
        ranks[k] = static_cast<std::uint8_t>(
            gf2_rank(rows.subspan(k * rows_per_matrix, rows_per_matrix)));
}

void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p) {
    const std::uint32_t cc = c;
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst[i] = static_cast<std::uint16_t>((dst[i] + cc * src[i]) % p);
}

}  // namespace scalar
}  // namespace constrank::kernels
