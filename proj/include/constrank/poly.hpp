#pragma once

#include <cstdint>
#include <vector>

#include "constrank/field.hpp"

namespace constrank::poly {

/// Dense polynomial over a FieldSpec, constant coefficient first. The zero
/// polynomial is the empty vector; other values carry no trailing zeros.
using Poly = std::vector<Elem>;

void trim(Poly& a);
int degree(const Poly& a) noexcept;

Poly add(const FieldSpec& f, const Poly& a, const Poly& b);
Poly mul(const FieldSpec& f, const Poly& a, const Poly& b);
/// Remainder of a modulo m; m must be nonzero.
Poly mod(const FieldSpec& f, Poly a, const Poly& m);

/// Monic polynomial of degree `deg` whose lower coefficients are the base-q
/// digits of `index`; index order equals integer order of the polynomial.
Poly monic_from_index(const FieldSpec& f, unsigned deg, std::uint64_t index);

/// Trial division by every monic polynomial of degree 1..deg(f)/2.
bool is_irreducible(const FieldSpec& field, const Poly& f);

/// Smallest monic irreducible of the given degree, in integer order.
Poly smallest_irreducible(const FieldSpec& field, unsigned deg);

}  // namespace constrank::poly
