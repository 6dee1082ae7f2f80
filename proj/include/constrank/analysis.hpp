#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "constrank/bigint.hpp"
#include "constrank/subspace.hpp"

namespace constrank {

/// K_u = {A in S : A u = 0} together with the evaluation map B -> B u.
struct KernelSlice {
    Matrix u;
    std::vector<Matrix> slice_basis;
    std::size_t r_u = 0;        // dim K_u
    std::size_t image_dim = 0;  // dim S u
};

/// S must be square and u a nonzero n x 1 vector (ShapeViolation, ZeroVector).
KernelSlice kernel_slice(const Subspace& s, const Matrix& u);

/// dim K_u only, without building the slice basis.
std::size_t slice_dimension(const Subspace& s, std::span<const Elem> u);

struct ScanOptions {
    std::uint64_t budget = kDefaultEnumerationBudget;
    unsigned workers = 1;
};

struct Lemma1Options {
    ScanOptions scan;
    /// 0 checks every maximal-rank element; otherwise a seeded uniform sample.
    std::uint64_t sample = 0;
    std::uint64_t seed = 0;
    std::size_t max_recorded = 16;
};

struct Lemma1Violation {
    Matrix a;  // maximal-rank element
    Matrix u;  // kernel basis vector of a
    Matrix b;  // basis element of S with b u outside im a
};

struct Lemma1Report {
    bool holds = true;
    int max_rank = 0;
    bool field_hypothesis = false;  // q >= max_rank + 1
    std::uint64_t elements_checked = 0;
    std::uint64_t violation_count = 0;
    /// First `max_recorded` violations in enumeration order.
    std::vector<Lemma1Violation> violations;
};

/// For every maximal-rank A in S, every u in a kernel basis of A and every
/// basis element B of S, tests B u in im A. S must be square.
Lemma1Report check_image_of_kernel(const Subspace& s, const Lemma1Options& opts = {});

/// Histogram over projective points u (leading coordinate 1) of dim K_u.
struct SliceCensus {
    std::vector<std::uint64_t> points_by_r_u;  // index r_u, up to dim S
    std::size_t min_r_u() const noexcept;
    std::uint64_t points() const noexcept;
};

/// S must be square.
SliceCensus slice_census(const Subspace& s, const ScanOptions& opts = {});

struct Lemma2Report {
    int rank = 0;
    std::size_t n = 0;
    std::size_t d = 0;
    bool applicable = false;  // d == n + 1 and q >= rank + 1
    std::size_t min_r_u = 0;
    long bound = 0;           // n + 1 - rank
    bool holds = false;       // min_r_u >= bound, evaluated whether or not applicable
};

/// S square and constant rank; NotConstantRank otherwise.
Lemma2Report check_lemma2_bound(const Subspace& s, const ScanOptions& opts = {});

struct CountingReport {
    std::uint64_t q = 0;
    std::size_t n = 0;
    int r = 0;
    std::size_t d = 0;
    BigInt omega_elements;  // (q^d - 1)(q^(n-r) - 1)
    BigInt omega_vectors;   // sum over u != 0 of (q^r(u) - 1)
    bool identity_holds = false;
    std::size_t min_r_u = 0;
    std::vector<std::uint64_t> vectors_by_r_u;  // nonzero u per value of r(u)
    /// Present only when d == n + 1.
    std::optional<BigInt> rearranged_lhs;  // q^(2n+1-r) - q^(n-r) - q^(n+1) + q^n
    std::optional<BigInt> rearranged_rhs;  // sum over u != 0 of q^r(u)
    std::optional<unsigned> lhs_valuation;
    std::optional<std::size_t> rhs_min_exponent;
    /// d == n + 1 and every r(u) >= n + 1 - r: the right side would be
    /// divisible by q^(n+1-r) while the left side is not.
    bool contradiction = false;
};

/// S square and constant rank; NotConstantRank, BudgetExceeded.
CountingReport counting_report(const Subspace& s, const ScanOptions& opts = {});

/// q^(2n+1-r) - q^(n-r) - q^(n+1) + q^n, for 1 <= r <= n.
BigInt rearranged_lhs(std::uint64_t q, unsigned n, unsigned r);

struct GeneralBoundReport {
    std::size_t d = 0, m = 0, n = 0;
    int r = 0;
    std::uint64_t q = 0;
    bool within_general_bound = false;  // d <= m + n - r
    bool within_n = false;              // d <= max(m, n)
    bool field_hypothesis = false;      // q >= r + 1
};

/// S constant rank (any shape); NotConstantRank otherwise.
GeneralBoundReport check_general_bound(const Subspace& s, const ScanOptions& opts = {});

/// The common rank of S, or NotConstantRank.
int require_constant_rank(const Subspace& s, const ScanOptions& opts = {});

}  // namespace constrank
