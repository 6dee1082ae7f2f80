#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string_view>

#include "constrank/bigint.hpp"
#include "constrank/subspace.hpp"

namespace constrank {

enum class SearchStatus { Found, ExhaustedNone, BudgetExceeded };

std::string_view to_string(SearchStatus s) noexcept;

struct SearchOptions {
    /// Limit on accepted extension nodes.
    std::uint64_t node_budget = 1'000'000'000;
    /// Workers split the tree at its first level.
    unsigned workers = 1;
    /// Traverse the whole tree and count every target-dimension subspace
    /// instead of stopping at the first.
    bool count_all = false;
};

struct SearchOutcome {
    SearchStatus status = SearchStatus::ExhaustedNone;
    /// First subspace reached at the target dimension (single worker: the
    /// first in tree order).
    std::optional<Subspace> witness;
    std::uint64_t nodes_explored = 0;
    /// Target-dimension subspaces reached; 1 on early exit.
    std::uint64_t found_count = 0;
    /// Rank-r matrices with leading entry 1.
    std::uint64_t candidate_count = 0;
    std::chrono::duration<double> elapsed{};
};

/// Depth-first search for a constant rank r subspace of M_{m x n}(F) of
/// dimension target_dim. A partial basis B_1 < ... < B_k (lexicographic on
/// entries) is extended by C when C has rank r and leading entry 1, C is the
/// lexicographically least element of C + span(B_1..B_k), C > B_k, and every
/// element of the q - 1 new cosets lambda C + span has rank r. Each subspace
/// is then reached exactly once, through its reduced echelon basis.
/// Requires 1 <= r <= m <= n and target_dim >= 1 (ShapeViolation).
SearchOutcome search_constant_rank(const Field& field, std::size_t m, std::size_t n, std::size_t r,
                                   std::size_t target_dim, const SearchOptions& opts = {});

inline constexpr std::uint64_t kDefaultCensusLimit = 10'000'000;

/// Counts constant rank r subspaces of dimension `dim` by walking every
/// dim-dimensional subspace of F^(m n) through its reduced echelon form.
/// BudgetExceeded when the Gaussian binomial [mn, dim]_q exceeds `limit`.
std::uint64_t brute_force_census(const Field& field, std::size_t m, std::size_t n, std::size_t r,
                                 std::size_t dim, std::uint64_t limit = kDefaultCensusLimit);

/// Gaussian binomial [mn, dim]_q: the census's work size.
BigInt census_size(const Field& field, std::size_t m, std::size_t n, std::size_t dim);

namespace detail {

/// True iff c is the lexicographically least element of c + span(basis),
/// by scanning the whole coset. Test oracle for the pivot-based check.
bool is_coset_leader_bruteforce(const Matrix& c, std::span<const Matrix> basis);

}  // namespace detail

}  // namespace constrank
