#include "doctest.h"

#include <random>

#include "constrank/kernels.hpp"

using namespace constrank;
using namespace constrank::kernels;

namespace {

// Independent reference: Gaussian elimination by pivot search over bit columns.
int reference_rank(std::vector<std::uint64_t> rows) {
    int rank = 0;
    for (int bit = 0; bit < 64; ++bit) {
        const std::uint64_t mask = std::uint64_t{1} << bit;
        std::size_t pivot = rank;
        while (pivot < rows.size() && !(rows[pivot] & mask)) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[pivot], rows[rank]);
        for (std::size_t j = 0; j < rows.size(); ++j)
            if (j != static_cast<std::size_t>(rank) && (rows[j] & mask)) rows[j] ^= rows[rank];
        ++rank;
    }
    return rank;
}

void run_rank_batch(Isa isa, std::span<const std::uint64_t> rows, std::size_t m, std::span<std::uint8_t> out) {
    switch (isa) {
#if defined(CONSTRANK_HAVE_AVX2)
        case Isa::Avx2: avx2::gf2_rank_batch(rows, m, out); return;
#endif
#if defined(CONSTRANK_HAVE_NEON)
        case Isa::Neon: neon::gf2_rank_batch(rows, m, out); return;
#endif
        default: scalar::gf2_rank_batch(rows, m, out); return;
    }
}

void run_axpy(Isa isa, std::span<std::uint16_t> dst, std::span<const std::uint16_t> src, std::uint16_t c,
              std::uint16_t p) {
    switch (isa) {
#if defined(CONSTRANK_HAVE_AVX2)
        case Isa::Avx2: avx2::gfp_axpy(dst, src, c, p); return;
#endif
#if defined(CONSTRANK_HAVE_NEON)
        case Isa::Neon: neon::gfp_axpy(dst, src, c, p); return;
#endif
        default: scalar::gfp_axpy(dst, src, c, p); return;
    }
}

}  // namespace

TEST_CASE("scalar rank matches reference elimination") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 5000; ++trial) {
        const std::size_t m = 1 + rng() % 64;
        const int width = 1 + static_cast<int>(rng() % 64);
        std::vector<std::uint64_t> rows(m);
        for (auto& r : rows) {
            r = rng();
            if (width < 64) r &= (std::uint64_t{1} << width) - 1;
            if (rng() % 4 == 0) r = rows[rng() % m];  // force dependencies
        }
        CHECK(gf2_rank(rows) == reference_rank(rows));
    }
}

TEST_CASE("every available ISA agrees with scalar on batched GF(2) rank") {
    std::mt19937_64 rng(2);
    for (Isa isa : available_isas()) {
        CAPTURE(isa_name(isa));
        for (int trial = 0; trial < 400; ++trial) {
            const std::size_t m = 1 + rng() % 64;
            const std::size_t count = rng() % 23;
            const int width = 1 + static_cast<int>(rng() % 64);
            std::vector<std::uint64_t> rows(m * count);
            for (auto& r : rows) {
                r = rng() & (width == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1);
                if (rng() % 3 == 0) r &= rng();
                if (rng() % 8 == 0) r = 0;
            }
            std::vector<std::uint8_t> expect(count), got(count);
            scalar::gf2_rank_batch(rows, m, expect);
            run_rank_batch(isa, rows, m, got);
            CHECK(got == expect);
        }
    }
}

TEST_CASE("every available ISA agrees with scalar on GF(p) axpy") {
    std::mt19937_64 rng(3);
    for (Isa isa : available_isas()) {
        CAPTURE(isa_name(isa));
        for (std::uint16_t p = 2; p <= kVectorAxpyMaxPrime; ++p) {
            bool prime = true;
            for (std::uint16_t d = 2; d * d <= p; ++d) prime = prime && p % d;
            if (!prime) continue;
            for (int trial = 0; trial < 20; ++trial) {
                const std::size_t n = rng() % 70;
                std::vector<std::uint16_t> src(n), dst(n);
                for (auto& x : src) x = static_cast<std::uint16_t>(rng() % p);
                for (auto& x : dst) x = static_cast<std::uint16_t>(rng() % p);
                // extremes exercise the quotient estimate
                if (n > 0) src[0] = dst[0] = static_cast<std::uint16_t>(p - 1);
                const auto c = static_cast<std::uint16_t>(trial == 0 ? p - 1 : rng() % p);
                auto expect = dst;
                for (std::size_t i = 0; i < n; ++i) expect[i] = static_cast<std::uint16_t>((dst[i] + c * src[i]) % p);
                run_axpy(isa, dst, src, c, p);
                CHECK(dst == expect);
            }
        }
    }
}

TEST_CASE("dispatcher") {
    const Isa before = active_isa();
    const auto isas = available_isas();
    CHECK(!isas.empty());
    CHECK(isas.front() == Isa::Scalar);
    for (Isa isa : isas) {
        set_active_isa(isa);
        CHECK(active_isa() == isa);
        std::vector<std::uint64_t> rows = {1, 2, 3, 4, 0, 0, 7, 7};
        std::vector<std::uint8_t> ranks(4);
        gf2_rank_batch(rows, 2, ranks);
        CHECK(ranks == std::vector<std::uint8_t>{2, 2, 0, 1});
        std::vector<std::uint16_t> dst = {1, 2}, src = {2, 2};
        gfp_axpy(dst, src, 2, 3);
        CHECK(dst == std::vector<std::uint16_t>{2, 0});
    }
    set_active_isa(before);
    std::vector<std::uint64_t> odd(3);
    std::vector<std::uint8_t> one(1);
    CHECK_THROWS(gf2_rank_batch(odd, 2, one));
}
