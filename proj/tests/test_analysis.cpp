#include "doctest.h"

#include <random>

#include "constrank/analysis.hpp"
#include "constrank/construct.hpp"
#include "constrank/search.hpp"

using namespace constrank;

namespace {

Matrix random_matrix(const Field& f, std::size_t m, std::size_t n, std::mt19937_64& rng) {
    std::vector<Elem> e(m * n);
    for (auto& x : e) x = static_cast<Elem>(rng() % f->q());
    return Matrix(f, m, n, std::move(e));
}

Matrix random_invertible(const Field& f, std::size_t n, std::mt19937_64& rng) {
    for (;;) {
        Matrix a = random_matrix(f, n, n, rng);
        if (rank(a) == static_cast<int>(n)) return a;
    }
}

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("integer helpers") {
    CHECK(ipow(3, 4) == 81);
    CHECK(ipow(7, 0) == 1);
    CHECK(q_adic_valuation(BigInt(48), 2) == 4);
    CHECK(q_adic_valuation(BigInt(48), 4) == 2);
    CHECK(q_adic_valuation(BigInt(-27), 3) == 3);
    CHECK(gaussian_binomial(4, 2, 2) == 35);
    CHECK(gaussian_binomial(4, 3, 2) == 15);
    CHECK(gaussian_binomial(9, 4, 2) == 3309747);
    CHECK(gaussian_binomial(3, 5, 2) == 0);
    CHECK(gaussian_binomial(5, 0, 3) == 1);
}

TEST_CASE("gaussian binomial satisfies the q-Pascal rule") {
    for (std::uint64_t q : {2u, 3u, 5u})
        for (unsigned n = 1; n <= 8; ++n)
            for (unsigned k = 1; k < n; ++k)
                CHECK(gaussian_binomial(n, k, q) ==
                      gaussian_binomial(n - 1, k - 1, q) + ipow(q, k) * gaussian_binomial(n - 1, k, q));
}

TEST_CASE("valuation of the rearranged left side is n - r") {
    for (std::uint64_t q : {2u, 3u, 4u, 5u, 7u, 8u, 9u})
        for (unsigned n = 2; n <= 10; ++n)
            for (unsigned r = 1; r < n; ++r) {
                const BigInt lhs = rearranged_lhs(q, n, r);
                CHECK(lhs == ipow(q, 2 * n + 1 - r) - ipow(q, n - r) - ipow(q, n + 1) + ipow(q, n));
                CHECK(q_adic_valuation(lhs, q) == n - r);
            }
}

TEST_CASE("kernel slice on the identity span") {
    const Field f2 = make_field(2);
    const Subspace s = Subspace::from_basis({Matrix::identity(f2, 2)});
    const auto slice = kernel_slice(s, Matrix::column(f2, {1, 0}));
    CHECK(slice.r_u == 0);
    CHECK(slice.image_dim == 1);
    CHECK(kind_of([&] { kernel_slice(s, Matrix::column(f2, {0, 0})); }) == ErrorKind::ZeroVector);
    CHECK(kind_of([&] { kernel_slice(s, Matrix::column(f2, {1, 0, 0})); }) == ErrorKind::ShapeViolation);
    const Subspace rect = Subspace::from_basis({Matrix::unit(f2, 2, 3, 0, 0)});
    CHECK(kind_of([&] { kernel_slice(rect, Matrix::column(f2, {1, 0, 0})); }) == ErrorKind::ShapeViolation);
}

TEST_CASE("rank-nullity of the evaluation map") {
    std::mt19937_64 rng(11);
    for (const char* desc : {"GF(2)", "GF(3)", "GF(4)", "GF(7)"}) {
        const Field f = parse_field(desc);
        for (int trial = 0; trial < 60; ++trial) {
            const std::size_t n = 2 + rng() % 3, d = 1 + rng() % (n * n);
            std::vector<Matrix> gens;
            for (std::size_t i = 0; i < d; ++i) gens.push_back(random_matrix(f, n, n, rng));
            Subspace s = [&] {
                try {
                    return make_subspace(gens);
                } catch (const Error&) {
                    return Subspace::from_basis({Matrix::identity(f, n)});
                }
            }();
            Matrix u = random_matrix(f, n, 1, rng);
            if (u.is_zero()) u.set(0, 0, 1);
            const auto slice = kernel_slice(s, u);
            CHECK(slice.r_u + slice.image_dim == s.dim());
            CHECK(slice.slice_basis.size() == slice.r_u);
            CHECK(slice_dimension(s, u.entries()) == slice.r_u);
            for (const auto& k : slice.slice_basis) {
                CHECK((k * u).is_zero());
                CHECK(member_of_span(k, s.basis()));
            }
        }
    }
}

TEST_CASE("lemma check holds on constructions with enough field elements") {
    for (const char* desc : {"GF(2)", "GF(3)", "GF(4)", "GF(5)"}) {
        const Field f = parse_field(desc);
        for (std::size_t n = 2; n <= 4; ++n)
            for (std::size_t r = 1; r <= n; ++r) {
                if (f->q() < r + 1) continue;
                const Subspace s = pad_to_square(truncated_construction(f, n, n, r));
                const auto rep = check_image_of_kernel(s);
                CAPTURE(desc); CAPTURE(n); CAPTURE(r);
                CHECK(rep.holds);
                CHECK(rep.field_hypothesis);
                CHECK(rep.max_rank == static_cast<int>(r));
                CHECK(rep.violation_count == 0);
                CHECK(rep.elements_checked == rank_profile(s).counts[r]);
            }
    }
}

TEST_CASE("lemma check with an invertible maximal element") {
    // E11, N = [[0,1],[0,1]] and E11 + N = [[1,1],[0,1]]; only the last has rank 2
    const Field f2 = make_field(2);
    const Subspace s = Subspace::from_basis({Matrix(f2, 2, 2, {1, 0, 0, 0}), Matrix(f2, 2, 2, {0, 1, 0, 1})});
    const auto rep = check_image_of_kernel(s);
    CHECK(rep.max_rank == 2);
    CHECK(rep.elements_checked == 1);
    CHECK(rep.holds);  // invertible maximal element: kernel is trivial
}

TEST_CASE("lemma check sampling and workers agree with the full check") {
    const Field f3 = make_field(3);
    std::mt19937_64 rng(5);
    std::vector<Matrix> gens;
    for (int i = 0; i < 3; ++i) gens.push_back(random_matrix(f3, 3, 3, rng));
    const Subspace s = make_subspace(gens);
    const auto full = check_image_of_kernel(s);
    Lemma1Options par;
    par.scan.workers = 4;
    const auto parallel = check_image_of_kernel(s, par);
    CHECK(parallel.holds == full.holds);
    CHECK(parallel.violation_count == full.violation_count);
    CHECK(parallel.elements_checked == full.elements_checked);
    REQUIRE(parallel.violations.size() == full.violations.size());
    for (std::size_t i = 0; i < full.violations.size(); ++i) CHECK(parallel.violations[i].a == full.violations[i].a);

    Lemma1Options sample;
    sample.sample = 3;
    sample.seed = 9;
    const auto a = check_image_of_kernel(s, sample);
    const auto b = check_image_of_kernel(s, sample);
    CHECK(a.elements_checked == std::min<std::uint64_t>(3, full.elements_checked));
    CHECK(a.violation_count == b.violation_count);
    CHECK(a.violation_count <= full.violation_count);
}

TEST_CASE("counting identity on constructions and random equivalents") {
    std::mt19937_64 rng(3);
    for (const char* desc : {"GF(2)", "GF(3)", "GF(4)"}) {
        const Field f = parse_field(desc);
        for (std::size_t n = 2; n <= 3; ++n)
            for (std::size_t m = 1; m <= n; ++m)
                for (std::size_t r = 1; r <= m; ++r) {
                    Subspace s = pad_to_square(truncated_construction(f, m, n, r));
                    s = transform_equivalent(s, random_invertible(f, n, rng), random_invertible(f, n, rng));
                    s = change_basis(s, random_invertible(f, s.dim(), rng));
                    const auto rep = counting_report(s);
                    CAPTURE(desc); CAPTURE(m); CAPTURE(n); CAPTURE(r);
                    CHECK(rep.identity_holds);
                    CHECK(rep.omega_elements == rep.omega_vectors);
                    CHECK(rep.omega_elements == (ipow(f->q(), n) - 1) * (ipow(f->q(), n - r) - 1));
                    CHECK_FALSE(rep.rearranged_lhs.has_value());
                    CHECK_FALSE(rep.contradiction);
                    std::uint64_t total = 0;
                    for (auto c : rep.vectors_by_r_u) total += c;
                    CHECK(total == ipow(f->q(), n) - 1);
                    const auto l2 = check_lemma2_bound(s);
                    CHECK_FALSE(l2.applicable);
                }
    }
}

TEST_CASE("counting on the dimension n + 1 counterexample") {
    const auto found = search_constant_rank(make_field(2), 3, 3, 2, 4);
    REQUIRE(found.witness);
    const auto rep = counting_report(*found.witness);
    CHECK(rep.identity_holds);
    REQUIRE(rep.rearranged_lhs.has_value());
    CHECK(*rep.rearranged_lhs == *rep.rearranged_rhs);
    // q < r + 1, so the valuation argument does not apply
    CHECK(rep.rhs_min_exponent.value() < 2);
    CHECK_FALSE(rep.contradiction);
    const auto l2 = check_lemma2_bound(*found.witness);
    CHECK_FALSE(l2.applicable);
    CHECK_FALSE(l2.holds);
}

TEST_CASE("analysis errors") {
    const Field f2 = make_field(2);
    const Subspace rect = Subspace::from_basis({Matrix::unit(f2, 2, 3, 0, 0)});
    CHECK(kind_of([&] { check_image_of_kernel(rect); }) == ErrorKind::ShapeViolation);
    CHECK(kind_of([&] { slice_census(rect); }) == ErrorKind::ShapeViolation);
    const Subspace mixed = Subspace::from_basis({Matrix::unit(f2, 2, 2, 0, 0), Matrix::unit(f2, 2, 2, 1, 1)});
    CHECK(kind_of([&] { counting_report(mixed); }) == ErrorKind::NotConstantRank);
    CHECK(kind_of([&] { check_general_bound(mixed); }) == ErrorKind::NotConstantRank);
    CHECK(kind_of([&] { require_constant_rank(mixed); }) == ErrorKind::NotConstantRank);
    CHECK(require_constant_rank(regular_representation(f2, 3)) == 3);
}

TEST_CASE("slice census totals") {
    const Field f3 = make_field(3);
    const Subspace s = regular_representation(f3, 3);
    const auto census = slice_census(s);
    CHECK(census.points() == 13);
    CHECK(census.points_by_r_u[0] == 13);
    CHECK(census.min_r_u() == 0);
    ScanOptions par;
    par.workers = 3;
    CHECK(slice_census(s, par).points_by_r_u == census.points_by_r_u);
}
