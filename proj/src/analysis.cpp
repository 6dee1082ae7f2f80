#include "constrank/analysis.hpp"

#include <algorithm>
#include <random>
#include <thread>

#include "detail/scan.hpp"

namespace constrank {

BigInt ipow(std::uint64_t base, unsigned exponent) {
    BigInt out = 1;
    for (unsigned i = 0; i < exponent; ++i) out *= base;
    return out;
}

unsigned q_adic_valuation(const BigInt& x, std::uint64_t q) {
    if (x == 0 || q < 2) throw Error(ErrorKind::DimensionMismatch, "valuation needs x != 0 and q >= 2");
    BigInt y = x < 0 ? BigInt(-x) : x;
    unsigned k = 0;
    while (y % q == 0) {
        y /= q;
        ++k;
    }
    return k;
}

BigInt gaussian_binomial(unsigned n, unsigned k, std::uint64_t q) {
    if (k > n) return 0;
    BigInt num = 1, den = 1;
    for (unsigned i = 0; i < k; ++i) {
        num *= ipow(q, n - i) - 1;
        den *= ipow(q, i + 1) - 1;
    }
    return num / den;
}

BigInt rearranged_lhs(std::uint64_t q, unsigned n, unsigned r) {
    return ipow(q, 2 * n + 1 - r) - ipow(q, n - r) - ipow(q, n + 1) + ipow(q, n);
}

namespace {

void require_square(const Subspace& s, const char* what) {
    if (s.rows() != s.cols())
        throw Error(ErrorKind::ShapeViolation, std::string(what) + " needs square matrices; got " +
                                                   std::to_string(s.rows()) + "x" + std::to_string(s.cols()) +
                                                   " (pad with zero rows first)");
}

/// Row-major n x d matrix whose column i is basis[i] * u.
std::vector<Elem> evaluation_matrix(const Subspace& s, std::span<const Elem> u) {
    const FieldSpec& f = s.gf();
    const std::size_t m = s.rows(), n = s.cols(), d = s.dim();
    std::vector<Elem> t(m * d, 0);
    for (std::size_t i = 0; i < d; ++i) {
        const Matrix& b = s.basis()[i];
        for (std::size_t row = 0; row < m; ++row) {
            Elem acc = 0;
            for (std::size_t k = 0; k < n; ++k)
                if (u[k]) acc = f.add(acc, f.mul(b(row, k), u[k]));
            t[row * d + i] = acc;
        }
    }
    return t;
}

/// Membership in a fixed span via its reduced echelon rows.
class SpanTester {
public:
    SpanTester(const FieldSpec& f, std::span<const Matrix> basis, std::size_t len) : f_(f), len_(len) {
        for (const Matrix& b : basis) rows_.insert(rows_.end(), b.entries().begin(), b.entries().end());
        pivots_ = detail::echelonize(f, rows_, basis.size(), len, true);
    }

    bool contains(std::vector<Elem> v) const {
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            const Elem c = v[pivots_[i]];
            if (c == 0) continue;
            const Elem neg = f_.neg(c);
            for (std::size_t k = 0; k < len_; ++k) v[k] = f_.add(v[k], f_.mul(neg, rows_[i * len_ + k]));
        }
        return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
    }

private:
    const FieldSpec& f_;
    std::size_t len_;
    std::vector<Elem> rows_;
    std::vector<std::size_t> pivots_;
};

template <typename Fn>
void run_partitioned(std::uint64_t begin, std::uint64_t end, unsigned workers, Fn&& fn) {
    const std::uint64_t span = end > begin ? end - begin : 0;
    workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, std::max<std::uint64_t>(span, 1)));
    if (workers == 1) {
        fn(0u, begin, end);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] { fn(w, begin + span * w / workers, begin + span * (w + 1) / workers); });
    for (auto& t : pool) t.join();
}

std::uint64_t vector_space_size(const Subspace& s, std::uint64_t budget) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < s.cols(); ++i) {
        total *= s.gf().q();
        if (total > budget)
            throw Error(ErrorKind::BudgetExceeded, "q^n vectors exceed the enumeration budget");
    }
    return total;
}

}  // namespace

std::size_t slice_dimension(const Subspace& s, std::span<const Elem> u) {
    const auto t = evaluation_matrix(s, u);
    return s.dim() - static_cast<std::size_t>(detail::rank_of(s.gf(), t, s.rows(), s.dim()));
}

KernelSlice kernel_slice(const Subspace& s, const Matrix& u) {
    require_square(s, "kernel_slice");
    if (u.rows() != s.cols() || u.cols() != 1 || !same_field(u.field(), s.field()))
        throw Error(ErrorKind::ShapeViolation, "u must be an n x 1 vector over the subspace's field");
    if (u.is_zero()) throw Error(ErrorKind::ZeroVector, "u must be nonzero");
    const Matrix t(s.field(), s.rows(), s.dim(), evaluation_matrix(s, u.entries()));
    KernelSlice out{u, {}, 0, static_cast<std::size_t>(rank(t))};
    for (const Matrix& c : kernel_basis(t)) out.slice_basis.push_back(s.combination(c.entries()));
    out.r_u = out.slice_basis.size();
    return out;
}

int require_constant_rank(const Subspace& s, const ScanOptions& opts) {
    const RankProfile p = rank_profile(s, {opts.budget, opts.workers});
    const int r = p.constant_rank();
    if (r < 1) {
        std::string desc;
        for (std::size_t k = 1; k < p.counts.size(); ++k)
            if (p.counts[k]) desc += (desc.empty() ? "" : ", ") + std::to_string(p.counts[k]) + " of rank " +
                                     std::to_string(k);
        throw Error(ErrorKind::NotConstantRank, "nonzero elements: " + desc);
    }
    return r;
}

Lemma1Report check_image_of_kernel(const Subspace& s, const Lemma1Options& opts) {
    require_square(s, "check_image_of_kernel");
    require_enumerable(s, opts.scan.budget);
    const std::uint64_t total = s.element_count();
    const FieldSpec& f = s.gf();

    Lemma1Report report;
    detail::scan_ranks(s, 1, total, [&](std::uint64_t, std::span<const std::uint8_t> ranks) {
        for (auto r : ranks) report.max_rank = std::max<int>(report.max_rank, r);
        return true;
    });
    report.field_hypothesis = f.q() >= static_cast<std::uint64_t>(report.max_rank) + 1;

    struct Found {
        std::uint64_t index;
        Lemma1Violation v;
    };
    struct Partial {
        std::uint64_t checked = 0;
        std::uint64_t violations = 0;
        std::vector<Found> recorded;
    };

    auto check_element = [&](std::uint64_t index, Partial& part) {
        const Matrix a = s.combination(s.coefficients_at(index));
        ++part.checked;
        const auto image = image_basis(a);
        const SpanTester in_image(f, image, s.rows());
        for (const Matrix& u : kernel_basis(a)) {
            for (const Matrix& b : s.basis()) {
                const Matrix bu = b * u;
                if (in_image.contains(std::vector<Elem>(bu.entries().begin(), bu.entries().end()))) continue;
                ++part.violations;
                if (part.recorded.size() < opts.max_recorded) part.recorded.push_back({index, {a, u, b}});
            }
        }
    };

    std::vector<Partial> parts;
    if (opts.sample > 0) {
        // Reservoir sample of maximal-rank indices, then check in index order.
        std::mt19937_64 rng(opts.seed);
        std::vector<std::uint64_t> chosen;
        std::uint64_t seen = 0;
        detail::scan_ranks(s, 1, total, [&](std::uint64_t start, std::span<const std::uint8_t> ranks) {
            for (std::size_t k = 0; k < ranks.size(); ++k) {
                if (ranks[k] != report.max_rank) continue;
                ++seen;
                if (chosen.size() < opts.sample) {
                    chosen.push_back(start + k);
                } else {
                    const std::uint64_t j = std::uniform_int_distribution<std::uint64_t>(0, seen - 1)(rng);
                    if (j < opts.sample) chosen[j] = start + k;
                }
            }
            return true;
        });
        std::sort(chosen.begin(), chosen.end());
        parts.resize(1);
        for (auto idx : chosen) check_element(idx, parts[0]);
    } else {
        parts.resize(std::max(1u, opts.scan.workers));
        run_partitioned(1, total, opts.scan.workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
            detail::scan_ranks(s, lo, hi, [&](std::uint64_t start, std::span<const std::uint8_t> ranks) {
                for (std::size_t k = 0; k < ranks.size(); ++k)
                    if (ranks[k] == report.max_rank) check_element(start + k, parts[w]);
                return true;
            });
        });
    }

    std::vector<Found> all;
    for (auto& p : parts) {
        report.elements_checked += p.checked;
        report.violation_count += p.violations;
        for (auto& fnd : p.recorded) all.push_back(std::move(fnd));
    }
    std::stable_sort(all.begin(), all.end(), [](const Found& x, const Found& y) { return x.index < y.index; });
    for (std::size_t i = 0; i < all.size() && i < opts.max_recorded; ++i)
        report.violations.push_back(std::move(all[i].v));
    report.holds = report.violation_count == 0;
    return report;
}

std::size_t SliceCensus::min_r_u() const noexcept {
    for (std::size_t k = 0; k < points_by_r_u.size(); ++k)
        if (points_by_r_u[k]) return k;
    return 0;
}

std::uint64_t SliceCensus::points() const noexcept {
    std::uint64_t t = 0;
    for (auto c : points_by_r_u) t += c;
    return t;
}

SliceCensus slice_census(const Subspace& s, const ScanOptions& opts) {
    require_square(s, "slice_census");
    const std::size_t n = s.cols();
    const std::uint64_t q = s.gf().q();
    const std::uint64_t total = vector_space_size(s, opts.budget);

    std::vector<std::vector<std::uint64_t>> parts(std::max(1u, opts.workers),
                                                  std::vector<std::uint64_t>(s.dim() + 1, 0));
    run_partitioned(1, total, opts.workers, [&](unsigned w, std::uint64_t lo, std::uint64_t hi) {
        std::vector<Elem> u(n);
        for (std::uint64_t k = lo; k < hi; ++k) {
            // first coordinate most significant; keep only leading coefficient 1
            std::uint64_t x = k;
            for (std::size_t i = n; i-- > 0;) {
                u[i] = static_cast<Elem>(x % q);
                x /= q;
            }
            const auto lead = std::find_if(u.begin(), u.end(), [](Elem c) { return c != 0; });
            if (*lead != 1) continue;
            ++parts[w][slice_dimension(s, u)];
        }
    });
    SliceCensus out{std::vector<std::uint64_t>(s.dim() + 1, 0)};
    for (const auto& p : parts)
        for (std::size_t k = 0; k < p.size(); ++k) out.points_by_r_u[k] += p[k];
    return out;
}

Lemma2Report check_lemma2_bound(const Subspace& s, const ScanOptions& opts) {
    require_square(s, "check_lemma2_bound");
    Lemma2Report out;
    out.rank = require_constant_rank(s, opts);
    out.n = s.cols();
    out.d = s.dim();
    out.applicable = out.d == out.n + 1 && s.gf().q() >= static_cast<std::uint64_t>(out.rank) + 1;
    out.min_r_u = slice_census(s, opts).min_r_u();
    out.bound = static_cast<long>(out.n) + 1 - out.rank;
    out.holds = static_cast<long>(out.min_r_u) >= out.bound;
    return out;
}

CountingReport counting_report(const Subspace& s, const ScanOptions& opts) {
    require_square(s, "counting_report");
    CountingReport out;
    out.r = require_constant_rank(s, opts);
    out.q = s.gf().q();
    out.n = s.cols();
    out.d = s.dim();
    const auto n = static_cast<unsigned>(out.n);
    const auto r = static_cast<unsigned>(out.r);

    out.omega_elements = (ipow(out.q, static_cast<unsigned>(out.d)) - 1) * (ipow(out.q, n - r) - 1);

    const SliceCensus census = slice_census(s, opts);
    out.min_r_u = census.min_r_u();
    out.vectors_by_r_u.resize(census.points_by_r_u.size());
    BigInt rhs = 0;
    out.omega_vectors = 0;
    for (std::size_t k = 0; k < census.points_by_r_u.size(); ++k) {
        // every projective point stands for q - 1 nonzero vectors with the same r(u)
        const std::uint64_t vectors = census.points_by_r_u[k] * (out.q - 1);
        out.vectors_by_r_u[k] = vectors;
        const BigInt power = ipow(out.q, static_cast<unsigned>(k));
        out.omega_vectors += BigInt(vectors) * (power - 1);
        rhs += BigInt(vectors) * power;
    }
    out.identity_holds = out.omega_elements == out.omega_vectors;

    if (out.d == out.n + 1) {
        out.rearranged_lhs = rearranged_lhs(out.q, n, r);
        out.rearranged_rhs = rhs;
        out.lhs_valuation = q_adic_valuation(*out.rearranged_lhs, out.q);
        out.rhs_min_exponent = out.min_r_u;
        out.contradiction = out.min_r_u >= out.n + 1 - r;
    }
    return out;
}

GeneralBoundReport check_general_bound(const Subspace& s, const ScanOptions& opts) {
    GeneralBoundReport out;
    out.r = require_constant_rank(s, opts);
    out.d = s.dim();
    out.m = s.rows();
    out.n = s.cols();
    out.q = s.gf().q();
    out.within_general_bound = static_cast<long>(out.d) <= static_cast<long>(out.m + out.n) - out.r;
    out.within_n = out.d <= std::max(out.m, out.n);
    out.field_hypothesis = out.q >= static_cast<std::uint64_t>(out.r) + 1;
    return out;
}

}  // namespace constrank
