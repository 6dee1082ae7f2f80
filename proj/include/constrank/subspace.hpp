#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "constrank/matrix.hpp"

namespace constrank {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 28;

/// A nonzero subspace of M_{m x n}(F_q) held as an ordered, independent basis.
class Subspace {
public:
    /// Keeps the basis as given. Throws EmptyInput, ShapeMismatch, or
    /// DependentBasis when the flattened matrices are not independent.
    static Subspace from_basis(std::vector<Matrix> basis);

    const Field& field() const noexcept { return basis_.front().field(); }
    const FieldSpec& gf() const noexcept { return basis_.front().gf(); }
    std::size_t rows() const noexcept { return basis_.front().rows(); }
    std::size_t cols() const noexcept { return basis_.front().cols(); }
    std::size_t dim() const noexcept { return basis_.size(); }
    const std::vector<Matrix>& basis() const noexcept { return basis_; }

    /// q^dim, saturated at UINT64_MAX.
    std::uint64_t element_count() const noexcept;

    /// sum_i coeffs[i] * basis[i].
    Matrix combination(std::span<const Elem> coeffs) const;
    /// Coefficient tuple of the index-th element in enumeration order.
    std::vector<Elem> coefficients_at(std::uint64_t index) const;

    friend bool operator==(const Subspace& a, const Subspace& b) { return a.basis_ == b.basis_; }

private:
    explicit Subspace(std::vector<Matrix> basis) : basis_(std::move(basis)) {}
    std::vector<Matrix> basis_;
};

/// Reduced echelon basis (on flattened matrices) of the span of `mats`.
/// Throws EmptyInput, ShapeMismatch, or ZeroSpan.
Subspace make_subspace(std::span<const Matrix> mats);

/// Streams span elements with index in [begin, end). Index k has coefficient
/// tuple (c_1..c_d) = base-q digits of k, c_1 most significant, so index order
/// is lexicographic coefficient order and index 0 is the zero matrix. Each
/// step updates the current element by the basis vectors whose digits changed.
class ElementEnumerator {
public:
    ElementEnumerator(const Subspace& s, std::uint64_t begin, std::uint64_t end);
    explicit ElementEnumerator(const Subspace& s) : ElementEnumerator(s, 0, s.element_count()) {}

    /// Advances to the next element; false once the range is exhausted.
    bool next();
    const Matrix& current() const noexcept { return current_; }
    std::span<const Elem> coefficients() const noexcept { return coeffs_; }
    std::uint64_t index() const noexcept { return index_; }

private:
    const Subspace* s_;
    std::uint64_t index_;
    std::uint64_t end_;
    bool started_ = false;
    std::vector<Elem> coeffs_;
    Matrix current_;
};

struct EnumerationOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned workers = 1;
};

/// Throws BudgetExceeded if q^dim exceeds the budget.
void require_enumerable(const Subspace& s, std::uint64_t budget);

/// Calls fn on every element in enumeration order; stops early if fn returns false.
void for_each_element(const Subspace& s, const std::function<bool(const Matrix&)>& fn,
                      std::uint64_t budget = kDefaultEnumerationBudget);

struct RankProfile {
    /// counts[s] = number of nonzero elements of rank s, s = 0..min(m, n).
    std::vector<std::uint64_t> counts;

    std::uint64_t nonzero_total() const noexcept;
    /// The common rank when exactly one bucket is occupied, else -1.
    int constant_rank() const noexcept;
    friend bool operator==(const RankProfile&, const RankProfile&) = default;
};

RankProfile rank_profile(const Subspace& s, const EnumerationOptions& opts = {});

struct ConstantRankCheck {
    bool holds = false;
    /// First nonzero element, in enumeration order, whose rank differs from r.
    std::optional<Matrix> witness;
    int witness_rank = -1;
};

/// Requires 1 <= r <= min(m, n); throws ShapeViolation otherwise.
ConstantRankCheck is_constant_rank(const Subspace& s, int r,
                                   std::uint64_t budget = kDefaultEnumerationBudget);

/// Pads every basis matrix with zero rows to n x n.
Subspace pad_to_square(const Subspace& s);
/// Basis b'_i = sum_j change(i, j) b_j; `change` must be invertible d x d.
Subspace change_basis(const Subspace& s, const Matrix& change);
/// Basis P b_i Q for invertible P (m x m) and Q (n x n). Preserves every rank.
Subspace transform_equivalent(const Subspace& s, const Matrix& left, const Matrix& right);

/// Header `d m n GF(...)`, then the d matrices in matrix text format
/// separated by blank lines.
std::string format_subspace(const Subspace& s);
void write_subspace(std::ostream& os, const Subspace& s);
Subspace parse_subspace(std::string_view text);
Subspace read_subspace(std::istream& is);

}  // namespace constrank
