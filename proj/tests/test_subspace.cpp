#include "doctest.h"

#include <random>
#include <set>

#include "constrank/kernels.hpp"
#include "constrank/subspace.hpp"

using namespace constrank;

namespace {

Matrix mat(const Field& f, std::size_t m, std::size_t n, std::vector<Elem> e) {
    return Matrix(f, m, n, std::move(e));
}

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

Subspace random_subspace(const Field& f, std::size_t m, std::size_t n, std::size_t d, std::mt19937_64& rng) {
    for (;;) {
        std::vector<Matrix> mats;
        for (std::size_t i = 0; i < d; ++i) mats.push_back(random_matrix(f, m, n, rng));
        try {
            return Subspace::from_basis(mats);
        } catch (const Error&) {
        }
    }
}

// Profile by direct per-element generic rank, no batching or packing.
RankProfile naive_profile(const Subspace& s) {
    RankProfile p{std::vector<std::uint64_t>(std::min(s.rows(), s.cols()) + 1, 0)};
    for (std::uint64_t k = 1; k < s.element_count(); ++k)
        ++p.counts[rank_generic(s.combination(s.coefficients_at(k)))];
    return p;
}

}  // namespace

TEST_CASE("make_subspace") {
    const Field f2 = make_field(2), f3 = make_field(3);
    const Matrix i2 = Matrix::identity(f2, 2);
    CHECK(make_subspace(std::vector{i2}).dim() == 1);
    CHECK(make_subspace(std::vector{i2, i2}).dim() == 1);
    const Matrix e11 = Matrix::unit(f3, 2, 2, 0, 0), e12 = Matrix::unit(f3, 2, 2, 0, 1);
    CHECK(make_subspace(std::vector{e11, e12, e11 + e12}).dim() == 2);

    auto kind_of = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::Parse;
    };
    CHECK(kind_of([] { make_subspace(std::vector<Matrix>{}); }) == ErrorKind::EmptyInput);
    CHECK(kind_of([&] { make_subspace(std::vector{i2, Matrix::identity(f2, 3)}); }) == ErrorKind::ShapeMismatch);
    CHECK(kind_of([&] { make_subspace(std::vector{Matrix(f2, 2, 2)}); }) == ErrorKind::ZeroSpan);
    CHECK(kind_of([&] { Subspace::from_basis({i2, i2}); }) == ErrorKind::DependentBasis);
}

TEST_CASE("make_subspace is idempotent") {
    std::mt19937_64 rng(3);
    for (const Field& f : {make_field(2), make_field(3), make_field(2, 2)}) {
        for (int t = 0; t < 50; ++t) {
            std::vector<Matrix> mats;
            const std::size_t k = 1 + rng() % 5;
            for (std::size_t i = 0; i < k; ++i) mats.push_back(random_matrix(f, 2, 3, rng));
            if (std::all_of(mats.begin(), mats.end(), [](const Matrix& a) { return a.is_zero(); })) continue;
            const Subspace once = make_subspace(mats);
            const Subspace twice = make_subspace(once.basis());
            CHECK(once == twice);
            for (const Matrix& a : mats) CHECK(member_of_span(a, once.basis()));
        }
    }
}

TEST_CASE("enumeration order and counts") {
    const Field f2 = make_field(2), f3 = make_field(3);
    const Matrix b = Matrix::identity(f2, 2);
    const Subspace s1 = make_subspace(std::vector{b});
    std::vector<Matrix> seen;
    for_each_element(s1, [&](const Matrix& x) {
        seen.push_back(x);
        return true;
    });
    REQUIRE(seen.size() == 2);
    CHECK(seen[0].is_zero());
    CHECK(seen[1] == b);

    const Subspace s2 = make_subspace(std::vector{Matrix::unit(f3, 2, 2, 0, 0), Matrix::unit(f3, 2, 2, 1, 1)});
    std::vector<std::vector<Elem>> coeffs;
    ElementEnumerator it(s2);
    int nonzero = 0;
    while (it.next()) {
        coeffs.emplace_back(it.coefficients().begin(), it.coefficients().end());
        CHECK(it.current() == s2.combination(it.coefficients()));
        if (!it.current().is_zero()) ++nonzero;
    }
    CHECK(coeffs.size() == 9);
    CHECK(nonzero == 8);
    CHECK(std::is_sorted(coeffs.begin(), coeffs.end()));
    CHECK(coeffs.front() == std::vector<Elem>{0, 0});
    CHECK(coeffs[1] == std::vector<Elem>{0, 1});

    // 4-dim subspace of M_3(F_2): 15 nonzero elements
    std::vector<Matrix> mats;
    for (int k = 0; k < 4; ++k) mats.push_back(Matrix::unit(f2, 3, 3, static_cast<std::size_t>(k / 3), k % 3));
    int count = 0;
    for_each_element(make_subspace(mats), [&](const Matrix& x) {
        count += !x.is_zero();
        return true;
    });
    CHECK(count == 15);
}

TEST_CASE("incremental enumeration over sub-ranges matches direct combination") {
    std::mt19937_64 rng(9);
    for (const Field& f : {make_field(2), make_field(3), make_field(2, 2), make_field(3, 2)}) {
        const Subspace s = random_subspace(f, 2, 3, 3, rng);
        const std::uint64_t total = s.element_count();
        for (int t = 0; t < 10; ++t) {
            const std::uint64_t lo = rng() % total, hi = lo + rng() % (total - lo + 1);
            ElementEnumerator it(s, lo, hi);
            std::uint64_t k = lo;
            while (it.next()) {
                CHECK(it.index() == k);
                CHECK(it.current() == s.combination(s.coefficients_at(k)));
                ++k;
            }
            CHECK(k == hi);
        }
    }
}

TEST_CASE("rank profile examples") {
    const Field f2 = make_field(2);
    const RankProfile p1 = rank_profile(make_subspace(std::vector{Matrix::identity(f2, 2)}));
    CHECK(p1.counts == std::vector<std::uint64_t>{0, 0, 1});

    // GF(4) acting on itself with basis (1, x): multiplication by x sends 1 -> x, x -> x + 1
    const Matrix mx = mat(f2, 2, 2, {0, 1, 1, 1});
    const Subspace reg = Subspace::from_basis({Matrix::identity(f2, 2), mx});
    CHECK(rank_profile(reg).counts == std::vector<std::uint64_t>{0, 0, 3});

    const Subspace diag = make_subspace(std::vector{Matrix::unit(f2, 2, 2, 0, 0), Matrix::unit(f2, 2, 2, 1, 1)});
    const RankProfile pd = rank_profile(diag);
    CHECK(pd.counts == std::vector<std::uint64_t>{0, 2, 1});
    CHECK(pd.constant_rank() == -1);
}

TEST_CASE("is_constant_rank") {
    const Field f2 = make_field(2), f3 = make_field(3);
    CHECK(is_constant_rank(make_subspace(std::vector{Matrix::identity(f3, 3)}), 3).holds);
    const Subspace diag = make_subspace(std::vector{Matrix::unit(f2, 2, 2, 0, 0), Matrix::unit(f2, 2, 2, 1, 1)});
    const auto res = is_constant_rank(diag, 1);
    CHECK_FALSE(res.holds);
    REQUIRE(res.witness);
    CHECK(*res.witness == Matrix::identity(f2, 2));
    CHECK(res.witness_rank == 2);
    CHECK_THROWS_AS(is_constant_rank(diag, 3), Error);
    CHECK_THROWS_AS(is_constant_rank(diag, 0), Error);
}

TEST_CASE("profile invariants, basis-change invariance, packed and parallel agreement") {
    std::mt19937_64 rng(21);
    for (const Field& f : {make_field(2), make_field(3), make_field(2, 2), make_field(5)}) {
        for (int t = 0; t < 30; ++t) {
            const std::size_t m = 1 + rng() % 3, n = 1 + rng() % 4;
            const std::size_t d = 1 + rng() % std::min<std::size_t>(m * n, f->q() == 2 ? 6 : 3);
            const Subspace s = random_subspace(f, m, n, d, rng);
            const RankProfile p = rank_profile(s);
            CHECK(p.counts[0] == 0);
            CHECK(p.nonzero_total() == s.element_count() - 1);
            for (auto c : p.counts) CHECK(c % (f->q() - 1) == 0);
            CHECK(p == naive_profile(s));
            CHECK(p == rank_profile(change_basis(s, random_invertible(f, d, rng))));
            CHECK(p == rank_profile(s, {kDefaultEnumerationBudget, 3}));
            for (int r = 1; r <= static_cast<int>(std::min(m, n)); ++r)
                CHECK(is_constant_rank(s, r).holds == (p.constant_rank() == r));
        }
    }
}

TEST_CASE("packed path is used under every ISA and agrees") {
    std::mt19937_64 rng(8);
    const Field f2 = make_field(2);
    const auto before = kernels::active_isa();
    const Subspace s = random_subspace(f2, 5, 6, 9, rng);
    const RankProfile expect = naive_profile(s);
    for (auto isa : kernels::available_isas()) {
        kernels::set_active_isa(isa);
        CHECK(rank_profile(s) == expect);
    }
    kernels::set_active_isa(before);
}

TEST_CASE("budget") {
    const Field f2 = make_field(2);
    std::vector<Matrix> mats;
    for (std::size_t k = 0; k < 9; ++k) mats.push_back(Matrix::unit(f2, 3, 3, k / 3, k % 3));
    const Subspace s = make_subspace(mats);
    try {
        rank_profile(s, {256, 1});
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BudgetExceeded);
    }
    CHECK(rank_profile(s, {512, 1}).nonzero_total() == 511);
}

TEST_CASE("subspace file format") {
    std::mt19937_64 rng(4);
    for (const Field& f : {make_field(2), make_field(3, 2)}) {
        const Subspace s = random_subspace(f, 2, 3, 3, rng);
        const std::string text = format_subspace(s);
        const Subspace back = parse_subspace(text);
        CHECK(back == s);
        CHECK(format_subspace(back) == text);
    }
    const Field f2 = make_field(2);
    const Subspace one = Subspace::from_basis({Matrix::identity(f2, 2)});
    CHECK(format_subspace(one) == "1 2 2 GF(2)\n\n2 2 GF(2)\n1 0\n0 1\n");

    auto line_of = [](const char* text) -> std::size_t {
        try {
            parse_subspace(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("2 2 2 GF(2)\n\n2 2 GF(2)\n1 0\n0 1\n") == 6);
    CHECK(line_of("1 2 2 GF(2)\n\n2 3 GF(2)\n1 0 0\n0 1 0\n") == 3);
    CHECK(line_of("2 2 2 GF(2)\n\n2 2 GF(2)\n1 0\n0 1\n\n2 2 GF(2)\n1 0\n0 1\n") == 1);
    CHECK(line_of("1 2 2 GF(2)\n\n2 2 GF(2)\n1 0\n0 1\n\n7\n") == 7);
}

TEST_CASE("equivalence transforms and padding preserve the profile") {
    std::mt19937_64 rng(6);
    const Field f3 = make_field(3);
    const Subspace s = random_subspace(f3, 2, 3, 3, rng);
    const RankProfile p = rank_profile(s);
    CHECK(rank_profile(transform_equivalent(s, random_invertible(f3, 2, rng), random_invertible(f3, 3, rng))) == p);
    const Subspace sq = pad_to_square(s);
    CHECK(sq.rows() == 3);
    RankProfile padded = rank_profile(sq);
    CHECK(padded.counts[3] == 0);
    padded.counts.pop_back();
    CHECK(padded == p);
}
