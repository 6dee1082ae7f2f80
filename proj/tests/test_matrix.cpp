#include "doctest.h"

#include <random>
#include <sstream>

#include "constrank/matrix.hpp"

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

// Every matrix of the given shape, by counting in base q.
std::vector<Matrix> all_matrices(const Field& f, std::size_t m, std::size_t n) {
    std::vector<Matrix> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < m * n; ++i) total *= f->q();
    for (std::uint64_t k = 0; k < total; ++k) {
        std::vector<Elem> e(m * n);
        std::uint64_t x = k;
        for (auto& v : e) {
            v = static_cast<Elem>(x % f->q());
            x /= f->q();
        }
        out.push_back(mat(f, m, n, std::move(e)));
    }
    return out;
}

}  // namespace

TEST_CASE("rank examples") {
    const Field f2 = make_field(2), f3 = make_field(3);
    CHECK(rank(Matrix(f2, 3, 4)) == 0);
    CHECK(rank(Matrix::identity(f3, 3)) == 3);
    CHECK(rank(mat(f2, 2, 2, {1, 0, 1, 0})) == 1);
    CHECK(rank_generic(mat(f2, 2, 2, {1, 0, 1, 0})) == 1);
    CHECK_THROWS_AS(Matrix(f2, 0, 3), Error);
    CHECK_THROWS_AS(mat(f2, 1, 2, {1, 2}), Error);
}

TEST_CASE("rank equals rank of transpose on all small matrices") {
    for (const Field& f : {make_field(2), make_field(3)}) {
        for (auto [m, n] : {std::pair{2, 2}, std::pair{2, 3}}) {
            for (const Matrix& a : all_matrices(f, m, n)) {
                CHECK(rank(a) == rank(a.transpose()));
                CHECK(rank_generic(a) == rank_generic(a.transpose()));
                CHECK((rank(a) == 0) == a.is_zero());
            }
        }
    }
}

TEST_CASE("kernel and image bases") {
    const Field f2 = make_field(2), f3 = make_field(3);
    CHECK(kernel_basis(Matrix::identity(f2, 3)).empty());
    CHECK(kernel_basis(Matrix(f2, 2, 2)).size() == 2);
    CHECK(image_basis(Matrix(f2, 2, 2)).empty());
    CHECK(image_basis(Matrix::identity(f3, 2)).size() == 2);
    const auto img = image_basis(mat(f2, 2, 2, {1, 1, 0, 0}));
    REQUIRE(img.size() == 1);
    CHECK(img[0] == Matrix::column(f2, {1, 0}));
}

TEST_CASE("rank-nullity, kernel annihilation and image membership on random matrices") {
    std::mt19937_64 rng(7);
    for (const Field& f : {make_field(2), make_field(3), make_field(2, 2), make_field(5), make_field(3, 2)}) {
        for (int trial = 0; trial < 300; ++trial) {
            const std::size_t m = 1 + rng() % 6, n = 1 + rng() % 6;
            Matrix a = random_matrix(f, m, n, rng);
            if (trial % 3 == 0 && m > 1)  // force a repeated row
                for (std::size_t j = 0; j < n; ++j) a.set(m - 1, j, a(0, j));
            const auto ker = kernel_basis(a);
            const auto img = image_basis(a);
            const int r = rank(a);
            CHECK(r + static_cast<int>(ker.size()) == static_cast<int>(n));
            CHECK(static_cast<int>(img.size()) == r);
            for (const Matrix& v : ker) CHECK((a * v).is_zero());
            if (!ker.empty()) {
                // kernel vectors are independent: stack them and take the rank
                std::vector<Elem> stacked;
                for (const Matrix& v : ker) stacked.insert(stacked.end(), v.entries().begin(), v.entries().end());
                CHECK(rank(Matrix(f, ker.size(), n, stacked)) == static_cast<int>(ker.size()));
            }
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<Elem> e(n, 0);
                e[j] = 1;
                CHECK(member_of_span(a * Matrix::column(f, e), img));
            }
        }
    }
}

TEST_CASE("nonzero kernel count is q^(n-rank)-1") {
    const Field f3 = make_field(3);
    for (const Matrix& a : all_matrices(f3, 2, 2)) {
        int zeros = 0;
        for (const Matrix& v : all_matrices(f3, 2, 1))
            if (!v.is_zero() && (a * v).is_zero()) ++zeros;
        int expect = 1;
        for (int i = 0; i < 2 - rank(a); ++i) expect *= 3;
        CHECK(zeros == expect - 1);
    }
}

TEST_CASE("member_of_span") {
    const Field f2 = make_field(2), f3 = make_field(3);
    const std::vector<Matrix> e2 = {Matrix::column(f2, {0, 1})};
    CHECK(member_of_span(Matrix::column(f2, {0, 0}), e2));
    CHECK(member_of_span(Matrix::column(f2, {0, 0}), {}));
    CHECK_FALSE(member_of_span(Matrix::column(f2, {1, 0}), e2));
    const std::vector<Matrix> full = {Matrix::column(f3, {1, 0}), Matrix::column(f3, {0, 1})};
    CHECK(member_of_span(Matrix::column(f3, {1, 2}), full));
    CHECK_THROWS_AS(member_of_span(Matrix::column(f3, {1, 2, 0}), full), Error);
    CHECK_THROWS_AS(member_of_span(Matrix::column(f2, {1, 1}), full), Error);
}

TEST_CASE("GF(2) packed rank equals generic rank on 1e5 random matrices") {
    const Field f2 = make_field(2);
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100000; ++trial) {
        const std::size_t m = 1 + rng() % 8, n = 1 + rng() % 8;
        Matrix a = random_matrix(f2, m, n, rng);
        if (trial % 2 == 0)
            for (std::size_t i = 1; i < m; ++i)
                if (rng() % 2)
                    for (std::size_t j = 0; j < n; ++j) a.set(i, j, a(i - 1, j));
        REQUIRE(rank_packed_gf2(a) == rank_generic(a));
    }
}

TEST_CASE("padding") {
    const Field f3 = make_field(3);
    const Matrix a = mat(f3, 2, 3, {1, 0, 2, 0, 1, 1});
    const Matrix p = pad_to_square(a);
    CHECK(p.rows() == 3);
    CHECK(rank(p) == 2);
    CHECK(p(2, 0) == 0);
    const Matrix sq = Matrix::identity(f3, 3);
    CHECK(pad_to_square(sq) == sq);
    const Matrix z = pad_to_square(Matrix(f3, 1, 4));
    CHECK(z.rows() == 4);
    CHECK(rank(z) == 0);
    CHECK_THROWS_AS(pad_to_square(Matrix(f3, 3, 2)), Error);
    CHECK(pad_rows(a, 5).rows() == 5);
    CHECK(rank(pad_rows(a, 5)) == 2);
}

TEST_CASE("text format round trip and errors") {
    std::mt19937_64 rng(5);
    for (const Field& f : {make_field(2), make_field(2, 2), make_field(5)}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Matrix a = random_matrix(f, 1 + rng() % 5, 1 + rng() % 5, rng);
            const std::string text = format_matrix(a);
            const Matrix b = parse_matrix(text);
            CHECK(b == a);
            CHECK(format_matrix(b) == text);
        }
    }
    CHECK(format_matrix(mat(make_field(2, 2), 1, 2, {3, 0})) == "1 2 GF(2^2)[1,1,1]\n3 0\n");

    auto where = [](const char* text) {
        try {
            parse_matrix(text);
        } catch (const ParseError& e) {
            return std::pair{e.line(), e.column()};
        }
        return std::pair<std::size_t, std::size_t>{0, 0};
    };
    CHECK(where("2 2 GF(2)\n1 0\n0 2\n") == std::pair<std::size_t, std::size_t>{3, 3});
    CHECK(where("2 2 GF(2)\n1 0\n0\n") == std::pair<std::size_t, std::size_t>{3, 2});
    CHECK(where("2 x GF(2)\n") == std::pair<std::size_t, std::size_t>{1, 3});
    CHECK(where("1 1 GF(6)\n1\n") == std::pair<std::size_t, std::size_t>{1, 5});
    CHECK(where("1 1 GF(2\n1\n") == std::pair<std::size_t, std::size_t>{1, 9});
    CHECK(where("1 1 GF(2)\n1\n1\n") == std::pair<std::size_t, std::size_t>{3, 1});
    CHECK(where("2 2 GF(2)\n1 1\n") == std::pair<std::size_t, std::size_t>{3, 1});
}

TEST_CASE("arithmetic") {
    const Field f3 = make_field(3);
    const Matrix a = mat(f3, 2, 2, {1, 2, 0, 1});
    const Matrix b = mat(f3, 2, 2, {2, 2, 1, 0});
    CHECK(a + b == mat(f3, 2, 2, {0, 1, 1, 1}));
    CHECK(a - a == Matrix(f3, 2, 2));
    CHECK(a * b == mat(f3, 2, 2, {1, 2, 1, 0}));
    CHECK(a.scaled(2) == mat(f3, 2, 2, {2, 1, 0, 2}));
    CHECK(mat(f3, 1, 2, {0, 2}) < mat(f3, 1, 2, {1, 0}));
    CHECK_THROWS_AS(a * Matrix(f3, 3, 1), Error);
}
