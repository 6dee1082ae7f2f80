#include <atomic>
#include <stdexcept>

#include "constrank/kernels.hpp"

namespace constrank::kernels {

namespace {

bool cpu_supports(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return true;
        case Isa::Avx2:
#if defined(CONSTRANK_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::Neon:
#if defined(CONSTRANK_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa detect() noexcept {
    if (cpu_supports(Isa::Avx2)) return Isa::Avx2;
    if (cpu_supports(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

std::atomic<Isa>& active() noexcept {
    static std::atomic<Isa> isa{detect()};
    return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
        case Isa::Scalar: return "scalar";
        case Isa::Avx2: return "avx2";
        case Isa::Neon: return "neon";
    }
    return "unknown";
}

std::vector<Isa> available_isas() {
    std::vector<Isa> out;
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon})
        if (cpu_supports(isa)) out.push_back(isa);
    return out;
}

Isa active_isa() noexcept { return active().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
    if (!cpu_supports(isa))
        throw std::invalid_argument("instruction set not available: " + std::string(isa_name(isa)));
    active().store(isa, std::memory_order_relaxed);
}

void gf2_rank_batch(std::span<const std::uint64_t> rows, std::size_t rows_per_matrix,
                    std::span<std::uint8_t> ranks) {
    if (rows_per_matrix == 0 || rows_per_matrix > 64 ||
        rows.size() != ranks.size() * rows_per_matrix)
        throw std::invalid_argument("gf2_rank_batch: inconsistent batch layout");
    switch (active_isa()) {
#if defined(CONSTRANK_HAVE_AVX2)
        case Isa::Avx2: return avx2::gf2_rank_batch(rows, rows_per_matrix, ranks);
#endif
#if defined(CONSTRANK_HAVE_NEON)
        case Isa::Neon: return neon::gf2_rank_batch(rows, rows_per_matrix, ranks);
#endif
        default: return scalar::gf2_rank_batch(rows, rows_per_matrix, ranks);
    }
}

void gfp_axpy(std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p) {
    if (dst.size() != src.size()) throw std::invalid_argument("gfp_axpy: length mismatch");
    if (c == 0) return;
    if (p <= kVectorAxpyMaxPrime) {
        switch (active_isa()) {
#if defined(CONSTRANK_HAVE_AVX2)
            case Isa::Avx2: return avx2::gfp_axpy(dst, src, c, p);
#endif
#if defined(CONSTRANK_HAVE_NEON)
            case Isa::Neon: return neon::gfp_axpy(dst, src, c, p);
#endif
            default: break;
        }
    }
    scalar::gfp_axpy(dst, src, c, p);
}

}  // namespace constrank::kernels
