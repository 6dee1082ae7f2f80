#pragma once

#include <cstddef>

#include "constrank/subspace.hpp"

namespace constrank {

/// Multiplication operators of GF(q^n) = F[x]/(g) on the power basis
/// 1, x, ..., x^(n-1), where g is the smallest monic irreducible of degree n
/// over F. Basis element j is multiplication by x^j. Every nonzero element of
/// the span is invertible. Requires n * log2(q) <= 24 (OrderTooLarge).
Subspace regular_representation(const Field& field, std::size_t n);

/// Top r rows of each regular-representation matrix, followed by m - r zero
/// rows: an n-dimensional constant rank r subspace of M_{m x n}(F). Requires
/// 1 <= r <= m <= n (ShapeViolation). The result is enumerated and checked
/// before it is returned (InternalVerificationFailed).
Subspace truncated_construction(const Field& field, std::size_t m, std::size_t n, std::size_t r);

}  // namespace constrank
