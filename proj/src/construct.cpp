#include "constrank/construct.hpp"

#include <cmath>

#include "constrank/poly.hpp"

namespace constrank {

Subspace regular_representation(const Field& field, std::size_t n) {
    if (n < 1) throw Error(ErrorKind::ShapeViolation, "n must be at least 1");
    if (static_cast<double>(n) * std::log2(static_cast<double>(field->q())) > 24.0 + 1e-9)
        throw Error(ErrorKind::OrderTooLarge, "GF(q^n) with q = " + std::to_string(field->q()) +
                                                  ", n = " + std::to_string(n) + " exceeds 2^24");
    const FieldSpec& f = *field;
    const poly::Poly g = poly::smallest_irreducible(f, static_cast<unsigned>(n));

    // x^k mod g for k = 0 .. 2n-2, each padded to n coefficients
    std::vector<poly::Poly> powers;
    poly::Poly x_k = {1};
    for (std::size_t k = 0; k + 1 < 2 * n; ++k) {
        poly::Poly reduced = poly::mod(f, x_k, g);
        reduced.resize(n, 0);
        powers.push_back(reduced);
        x_k.insert(x_k.begin(), 0);
    }

    std::vector<Matrix> basis;
    for (std::size_t j = 0; j < n; ++j) {
        Matrix mult(field, n, n);
        // column k holds the coordinates of x^j * x^k
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t i = 0; i < n; ++i) mult.set(i, k, powers[j + k][i]);
        basis.push_back(std::move(mult));
    }
    Subspace out = Subspace::from_basis(std::move(basis));
    if (!is_constant_rank(out, static_cast<int>(n)).holds)
        throw Error(ErrorKind::InternalVerificationFailed, "regular representation has a singular element");
    return out;
}

Subspace truncated_construction(const Field& field, std::size_t m, std::size_t n, std::size_t r) {
    if (!(1 <= r && r <= m && m <= n))
        throw Error(ErrorKind::ShapeViolation, "need 1 <= r <= m <= n; got r = " + std::to_string(r) +
                                                   ", m = " + std::to_string(m) + ", n = " + std::to_string(n));
    const Subspace full = regular_representation(field, n);
    std::vector<Matrix> basis;
    for (const Matrix& a : full.basis()) {
        Matrix top(field, m, n);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < n; ++j) top.set(i, j, a(i, j));
        basis.push_back(std::move(top));
    }
    Subspace out = [&] {
        try {
            return Subspace::from_basis(std::move(basis));
        } catch (const Error& e) {
            throw Error(ErrorKind::InternalVerificationFailed, std::string("truncation lost dimension: ") + e.what());
        }
    }();
    const auto check = is_constant_rank(out, static_cast<int>(r));
    if (!check.holds || out.dim() != n)
        throw Error(ErrorKind::InternalVerificationFailed,
                    "truncated construction is not constant rank " + std::to_string(r));
    return out;
}

}  // namespace constrank
