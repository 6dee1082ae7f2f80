#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "constrank/subspace.hpp"

namespace constrank::detail {

/// Receives ranks of consecutive elements starting at `first_index`;
/// returning false stops the scan.
using RankBatchFn = std::function<bool(std::uint64_t first_index, std::span<const std::uint8_t> ranks)>;

bool packed_path_applies(const Subspace& s) noexcept;

/// Ranks of elements with index in [begin, end), in index order, in batches.
void scan_ranks(const Subspace& s, std::uint64_t begin, std::uint64_t end, const RankBatchFn& fn);

}  // namespace constrank::detail
